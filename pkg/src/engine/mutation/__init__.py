"""Mutation engine: membership conditions and the mutant linear system."""
