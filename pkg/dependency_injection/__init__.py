"""Dependency injection package."""
