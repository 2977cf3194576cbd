"""Utility modules for smcheck."""
