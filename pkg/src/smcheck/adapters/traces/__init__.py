"""Trace serialization formats."""
