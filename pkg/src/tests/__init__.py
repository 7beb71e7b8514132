"""Initialize the tests package."""
