__all__ = ["ensembles", "limits", "pde_checks"]

from betacharpoly.rmt import ensembles
from betacharpoly.rmt import limits
from betacharpoly.rmt import pde_checks
