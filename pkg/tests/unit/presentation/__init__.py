"""Presentation layer tests."""
