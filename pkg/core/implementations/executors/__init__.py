"""Ensemble executors package."""
