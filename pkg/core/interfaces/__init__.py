"""Interfaces package - Abstract base classes for SOLID design."""
