"""Test fixtures and shared testing utilities."""
