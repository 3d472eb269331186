__all__ = ["constants", "quadrature", "airy", "asymptotics"]

from betacharpoly.special import constants
from betacharpoly.special import quadrature
from betacharpoly.special import airy
from betacharpoly.special import asymptotics
