"""Packaged data assets."""
