"""Formatter tests."""
