"""
betacharpoly.config
~~~~~~~~~~~~~~~~~~~

Resolved configuration of one command-line run.

Values are layered: built-in defaults, then a YAML file given with
``--config``, then the environment (``BETACHARPOLY_THREADS``,
``BETACHARPOLY_LOG_LEVEL``), then explicit flags. The resolved
:py:class:`RunConfig` is echoed in every output.

.. code:: yaml

    seed: 7
    fmt: csv
    max_weight: 80
    threads: 4

"""
import logging
import os
from dataclasses import asdict
from dataclasses import dataclass
from dataclasses import field
from dataclasses import fields

import yaml

from betacharpoly.errors import DomainError
from betacharpoly.errors import fail

_LOGGER = logging.getLogger(__name__)

ENV_THREADS = "BETACHARPOLY_THREADS"
ENV_LOG_LEVEL = "BETACHARPOLY_LOG_LEVEL"

FORMATS = ("json", "csv")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass
class RunConfig:
    """Global settings shared by all subcommands plus the subcommand's own
    options.

    :type seed: :py:class:`int`
    :param seed: 64-bit seed for Monte Carlo streams.

    :type fmt: :py:class:`str`
    :param fmt: ``'json'`` or ``'csv'``.

    :type tol: :py:class:`float`
    :param tol: relative tolerance of series truncation.

    :type max_weight: :py:class:`int`
    :param max_weight: largest partition weight summed.

    :type threads: :py:class:`int`
    :param threads: worker threads for grids and report rows.

    :type options: :py:class:`dict`
    :param options: the subcommand's typed flags.
    """

    subcommand: str = ""
    seed: int = 0
    fmt: str = "json"
    tol: float = 1e-14
    max_weight: int = 60
    threads: int = 1
    log_level: str = "WARNING"
    options: dict = field(default_factory=dict)

    def validate(self):
        if not 0 <= self.seed < 2 ** 64:
            raise fail(DomainError(f"seed must be a 64-bit unsigned integer: {self.seed}", "config"))
        if self.fmt not in FORMATS:
            raise fail(DomainError(f"Unknown output format: [{self.fmt}]", "config"))
        if not self.tol > 0:
            raise fail(DomainError(f"tol must be positive: {self.tol}", "config"))
        if self.max_weight < 1:
            raise fail(DomainError(f"max_weight must be >= 1: {self.max_weight}", "config"))
        if self.threads < 1:
            raise fail(DomainError(f"threads must be >= 1: {self.threads}", "config"))
        self.log_level = str(self.log_level).upper()
        if self.log_level not in LOG_LEVELS:
            raise fail(DomainError(f"Unknown log level: [{self.log_level}]", "config"))
        return self

    def as_dict(self):
        return asdict(self)


_GLOBAL_KEYS = {f.name for f in fields(RunConfig)} - {"subcommand", "options"}


def load_yaml(path):
    """Reads a YAML mapping of global settings.

    :raises DomainError: when the file is not a mapping or holds unknown keys.

    :rtype: :py:class:`dict`
    """
    with open(path) as handle:
        data = yaml.safe_load(handle) or {}
    if not isinstance(data, dict):
        raise fail(DomainError(f"Config file must hold a mapping: {path}", "config"))
    unknown = sorted(set(data) - _GLOBAL_KEYS)
    if unknown:
        raise fail(
            DomainError(f"Unknown config keys: {unknown}", "config", details={"path": str(path)})
        )
    _LOGGER.debug(f"Loaded config file: [path={path}] [keys={sorted(data)}]")
    return data


def from_environment(environ=None):
    """Settings taken from ``BETACHARPOLY_THREADS`` and
    ``BETACHARPOLY_LOG_LEVEL``.

    :rtype: :py:class:`dict`
    """
    environ = os.environ if environ is None else environ
    values = {}
    if environ.get(ENV_THREADS):
        try:
            values["threads"] = int(environ[ENV_THREADS])
        except ValueError:
            raise fail(DomainError(f"{ENV_THREADS} must be an integer: {environ[ENV_THREADS]}", "config"))
    if environ.get(ENV_LOG_LEVEL):
        values["log_level"] = environ[ENV_LOG_LEVEL]
    return values


def resolve(subcommand, flags, options, config_path=None, environ=None):
    """Layers defaults, YAML, environment and flags into a :py:class:`RunConfig`.

    :type flags: :py:class:`dict`
    :param flags: global flags given on the command line; ``None`` values
        mean "not given".

    :type options: :py:class:`dict`
    :param options: the subcommand's options, copied as they are.

    :rtype: :py:class:`RunConfig`
    """
    values = {}
    if config_path:
        values.update(load_yaml(config_path))
    values.update(from_environment(environ))
    values.update({k: v for k, v in flags.items() if v is not None and k in _GLOBAL_KEYS})
    return RunConfig(subcommand=subcommand, options=dict(options), **values).validate()
