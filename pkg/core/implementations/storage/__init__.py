"""File formats: weight matrices, CSV tables and scenario files."""
