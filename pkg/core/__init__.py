"""herdlab core: models, services and file formats for the Random Actions model."""

__version__ = "0.1.0"
