"""CLI commands for smcheck."""
