"""Utility modules for file handling, validation, and configuration."""
