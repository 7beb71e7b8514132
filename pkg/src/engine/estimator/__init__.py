"""Multiplicity estimation and rationality probing."""
