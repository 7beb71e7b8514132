"""Command line, report files and sweeps."""
