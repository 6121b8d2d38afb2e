"""Implementations package - Concrete implementations of interfaces."""
