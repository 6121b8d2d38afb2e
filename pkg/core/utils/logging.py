"""Logging configuration."""

import logging


def setup_logging(level: str = "INFO"):
    """Configure application logging.

    Output goes to stderr so CSV written to stdout stays clean.
    """
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="[%(levelname)s] %(asctime)s - %(name)s - %(message)s",
    )
