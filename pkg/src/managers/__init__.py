"""Configuration management for the hk toolkit."""
