"""The hk command and its file formats."""
