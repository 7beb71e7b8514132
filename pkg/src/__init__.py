"""Hilbert-Kunz functions of trinomial hypersurfaces over prime fields."""
