"""Reduced linear system, its subsystem groups and class counts."""
