"""Persistence of query results."""
