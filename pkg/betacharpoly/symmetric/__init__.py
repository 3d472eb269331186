__all__ = ["partitions", "jack", "hyper"]

from betacharpoly.symmetric import partitions
from betacharpoly.symmetric import jack
from betacharpoly.symmetric import hyper
