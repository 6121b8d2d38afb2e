"""Stationary vector solvers package."""
