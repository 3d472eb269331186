"""Characteristic-polynomial expectations of beta ensembles and their scaling limits."""
from betacharpoly.version import __version__

__all__ = ["symmetric", "special", "rmt", "errors", "config", "cli"]

import logging

logging.getLogger(__name__).addHandler(logging.NullHandler())

from betacharpoly import errors  # noqa: E402
from betacharpoly import symmetric  # noqa: E402
from betacharpoly import special  # noqa: E402
from betacharpoly import rmt  # noqa: E402
