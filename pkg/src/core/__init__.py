"""Parsing, field arithmetic, errors and diagnostics."""
