"""
betacharpoly.cli
~~~~~~~~~~~~~~~~

Batch command-line front end. Scalars and metadata are written as JSON,
per-N tables as CSV; both echo the resolved configuration, so identical
arguments and seed give identical bytes.

.. code:: bash

    betacharpoly constants --name Gamma --beta 2 --n 1
    betacharpoly expect --ensemble l --N 1 --beta 2 --s 0
    betacharpoly limit-check --ensemble l --regime hard --n 1 --beta 2 \\
        --N-list 20,40,80 --s 1 --format csv

Library errors are printed as ``{"error": {kind, module, message,
details}}`` with exit status 1; argument errors exit with status 2.

"""
import argparse
import csv
import io
import json
import logging
import math
import sys

from betacharpoly import config as run_config
from betacharpoly.errors import BetaCharpolyError
from betacharpoly.errors import DomainError
from betacharpoly.errors import fail
from betacharpoly.rmt import ensembles
from betacharpoly.rmt import limits
from betacharpoly.rmt import pde_checks
from betacharpoly.special import airy
from betacharpoly.special import asymptotics
from betacharpoly.special import constants
from betacharpoly.special.quadrature import QuadConfig
from betacharpoly.symmetric import hyper
from betacharpoly.symmetric import jack
from betacharpoly.symmetric.partitions import Partition
from betacharpoly.symmetric.partitions import enumerate_partitions
from betacharpoly.version import __version__

_LOGGER = logging.getLogger(__name__)

_GLOBAL_FLAGS = ("seed", "fmt", "tol", "max_weight", "threads", "log_level")


def _floats(text):
    """``'1,2.5,-3'`` -> ``[1.0, 2.5, -3.0]``; ``inf`` is accepted."""
    try:
        return [float(v) for v in str(text).replace(" ", "").split(",") if v != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma separated list of numbers: {text}")


def _complexes(text):
    try:
        return [complex(v.replace("i", "j")) for v in str(text).replace(" ", "").split(",") if v != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma separated list of complex numbers: {text}")


def _ints(text):
    try:
        return [int(v) for v in str(text).replace(" ", "").split(",") if v != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma separated list of integers: {text}")


def _grid(text):
    """``'0,1;0.5,-0.5'`` -> ``[[0, 1], [0.5, -0.5]]``."""
    return [_floats(point) for point in str(text).split(";") if point.strip()]


def _common_parser():
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group("global options")
    group.add_argument("--seed", type=int, default=None, help="64-bit Monte Carlo seed (default 0)")
    group.add_argument("--tol", type=float, default=None, help="series relative tolerance (default 1e-14)")
    group.add_argument("--max-weight", type=int, default=None, help="largest partition weight (default 60)")
    group.add_argument("--format", dest="fmt", choices=run_config.FORMATS, default=None)
    group.add_argument("--threads", type=int, default=None, help=f"worker threads (env {run_config.ENV_THREADS})")
    group.add_argument(
        "--log-level", default=None, help=f"logging level on stderr (env {run_config.ENV_LOG_LEVEL})"
    )
    group.add_argument("--config", default=None, help="YAML file with global settings")
    return common


def build_parser():
    """The argument parser with one subcommand per module.

    :rtype: :py:class:`argparse.ArgumentParser`
    """
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="betacharpoly",
        description="Characteristic-polynomial expectations of beta ensembles.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("jack", parents=[common], help="Jack polynomial expansions")
    p.add_argument("action", choices=("table", "eval"))
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--vars", type=int, required=True, help="number of variables n")
    p.add_argument("--kappa", type=_ints, default=None, help="partition for eval, e.g. 2,1")
    p.add_argument("--x", type=_complexes, default=None, help="evaluation point for eval")
    p.add_argument("--weight", type=int, default=4, help="largest weight listed by table")

    p = sub.add_parser("hyper", parents=[common], help="hypergeometric series")
    p.add_argument("action", choices=("eval",))
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--upper", type=_complexes, default=[])
    p.add_argument("--lower", type=_complexes, default=[])
    p.add_argument("--x", type=_complexes, required=True)
    p.add_argument("--two-set", action="store_true")
    p.add_argument("--y", type=_complexes, default=None)

    p = sub.add_parser("airy", parents=[common], help="multivariate Airy function")
    p.add_argument("action", choices=("eval",))
    p.add_argument("--alpha", type=float, required=True, help="Jack parameter; inf allowed")
    p.add_argument("--s", type=_floats, required=True)
    p.add_argument("--nodes", type=int, default=201)
    p.add_argument("--damping", type=float, default=0.0)
    p.add_argument("--method", choices=("auto", "rays", "pair", "damping"), default="auto")

    p = sub.add_parser("constants", parents=[common], help="closed-form constants")
    p.add_argument(
        "--name",
        required=True,
        choices=("S", "W", "G", "Gamma", "M", "Phi", "Psi", "xi", "ak", "bk", "gammam"),
    )
    p.add_argument("--ensemble", default="h")
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--l", type=int, default=None, help="selects the odd bulk coefficient Psi^(l)")
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--b", type=float, default=None)
    p.add_argument("--lambda1", type=float, default=0.0)
    p.add_argument("--lambda2", type=float, default=0.0)
    p.add_argument("--lambda3", type=float, default=None)
    p.add_argument("--u", type=float, default=None)

    p = sub.add_parser("expect", parents=[common], help="finite-N expectations K_N and phi_N")
    _ensemble_flags(p)
    p.add_argument("--s", type=_complexes, required=True)
    p.add_argument("--method", default="auto", choices=("auto", "exact_series", "duality_quadrature", "monte_carlo"))
    p.add_argument("--mc", type=int, default=None, metavar="DRAWS", help="Monte Carlo with this many draws")

    p = sub.add_parser("limit-check", parents=[common], help="finite-N convergence to a scaling limit")
    _ensemble_flags(p, with_N=False)
    p.add_argument("--regime", choices=limits.REGIMES, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--u", type=float, default=None)
    p.add_argument("--N-list", dest="N_list", type=_ints, default=None)
    p.add_argument("--s", type=_floats, default=None, help="one point of dimension n")
    p.add_argument("--grid", type=_grid, default=None, help="several points: 'a,b;c,d'")
    p.add_argument("--method", default="auto", choices=("auto", "exact_series", "duality_quadrature", "monte_carlo"))
    p.add_argument("--centering", default="standard", choices=limits.CENTERINGS)

    p = sub.add_parser("pde-check", parents=[common], help="residuals of the limiting PDE systems")
    p.add_argument("--regime", choices=limits.REGIMES, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda1", type=float, default=0.0)
    p.add_argument("--grid", type=_grid, required=True)
    p.add_argument("--source", default=None, choices=("series", "classical", "quadrature", "separable"))
    p.add_argument("--weight", type=int, default=pde_checks.DEFAULT_WEIGHT)
    p.add_argument("--j", type=int, default=0)

    p = sub.add_parser("saddle", parents=[common], help="saddle-point leading terms against quadrature")
    p.add_argument("action", choices=("verify",))
    p.add_argument("--case", choices=asymptotics.WORKED_CASES, required=True)
    p.add_argument("--N-list", dest="N_list", type=_ints, default=[10, 20, 40])
    return parser


def _ensemble_flags(p, with_N=True):
    p.add_argument("--ensemble", choices=("h", "l", "j"), required=True)
    if with_N:
        p.add_argument("--N", type=int, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--lambda1", type=float, default=0.0)
    p.add_argument("--lambda2", type=float, default=0.0)


def _truncation(cfg):
    return hyper.TruncationPolicy(max_weight=cfg.max_weight, rel_tol=cfg.tol)


def _split(value, prefix):
    value = complex(value)
    return {f"{prefix}_re": value.real, f"{prefix}_im": value.imag}


def _run_jack(cfg, args):
    alpha, n = args.alpha, args.vars
    if args.action == "eval":
        if args.kappa is None or args.x is None:
            raise fail(DomainError("jack eval needs --kappa and --x", "cli"))
        expansion = jack.jack_expansion(Partition(args.kappa), alpha, n)
        return {"partition": list(expansion.kappa), **_split(jack.jack_eval(expansion, args.x), "value")}
    table = []
    for weight in range(min(args.weight, cfg.max_weight) + 1):
        for kappa in enumerate_partitions(weight, n):
            expansion = jack.jack_expansion(kappa, alpha, n)
            coefficients = {",".join(map(str, mu)) or "0": float(c) for mu, c in expansion.coeffs.items()}
            table.append({"partition": list(kappa), "coefficients": coefficients})
    return {"table": table}


def _run_hyper(cfg, args):
    spec = hyper.HyperSeriesSpec(args.alpha, tuple(args.upper), tuple(args.lower), _truncation(cfg))
    if args.two_set:
        if args.y is None:
            raise fail(DomainError("--two-set needs --y", "cli"))
        result = hyper.eval_two_set(spec, args.x, args.y)
    else:
        result = hyper.eval_pFq(spec, args.x)
    return {
        **_split(result.value, "value"),
        "weight_used": result.weight_used,
        "terminated": result.terminated,
        "last_shell": result.last_shell,
        "extended": result.extended,
    }


def _run_airy(cfg, args):
    spec = airy.AiryQuadSpec(
        alpha=args.alpha,
        n=len(args.s),
        nodes_per_axis=args.nodes,
        damping=args.damping,
        method=args.method,
    )
    result = airy.airy_multivariate(spec, args.s, QuadConfig(nodes=65, max_nodes=2049, rel_tol=1e-12, workers=cfg.threads))
    return {
        "value": result.value,
        "im_residual": result.im_residual,
        "est_error": result.est_error,
        "method": result.method,
        "experimental": result.experimental,
    }


def _need(args, *names):
    missing = [f"--{name}" for name in names if getattr(args, name) is None]
    if missing:
        raise fail(DomainError(f"constants --name {args.name} needs {', '.join(missing)}", "cli"))


def _run_constants(cfg, args):
    name = args.name
    if name == "S":
        _need(args, "N", "lambda3")
        value = constants.selberg_S(args.N, args.lambda1, args.lambda2, args.lambda3)
    elif name == "W":
        _need(args, "N", "beta")
        value = constants.laguerre_W(args.lambda1, args.beta, args.N)
    elif name == "G":
        _need(args, "N", "beta")
        value = constants.gaussian_G(args.beta, args.N)
    elif name == "Gamma":
        _need(args, "n", "beta")
        value = constants.gamma_beta_n(args.beta, args.n)
    elif name == "M":
        _need(args, "n", "a", "b", "alpha")
        value = constants.morris_M(args.n, args.a, args.b, args.alpha)
    elif name == "Phi":
        _need(args, "N", "n", "beta")
        value = constants.coefficient_Phi(args.ensemble, args.N, args.n, args.beta, args.lambda1)
    elif name == "Psi":
        _need(args, "N", "m", "beta", "u")
        rho = constants.bulk_density(args.ensemble, args.u)
        if args.l is None:
            value = constants.coefficient_Psi_even(
                args.ensemble, args.N, args.m, args.beta, rho, args.lambda1, args.lambda2
            )
        else:
            value = constants.coefficient_Psi_odd(
                args.ensemble, args.N, args.m, args.l, args.beta, rho, args.u, args.lambda1, args.lambda2
            )
    elif name == "xi":
        _need(args, "N", "n", "beta")
        value = constants.coefficient_xi(args.ensemble, args.N, args.n, args.beta, args.lambda1, args.lambda2)
    elif name == "ak":
        _need(args, "k", "beta")
        value = constants.coefficient_a_k(args.beta, args.k)
    elif name == "bk":
        _need(args, "k", "beta")
        value = constants.coefficient_b_k(args.beta, args.k)
    else:
        _need(args, "m", "beta")
        value = constants.coefficient_gamma_m(0.0 if math.isinf(args.beta) else 4 / args.beta, args.m)
    return {**_split(value.log_value, "log"), **_split(value.value, "value")}


def _run_expect(cfg, args):
    spec = ensembles.EnsembleSpec(args.ensemble, args.N, args.beta, args.lambda1, args.lambda2)
    method = ensembles.MONTE_CARLO if args.mc else args.method
    result = ensembles.expect(
        spec,
        args.s,
        method=method,
        draws=args.mc or 100000,
        seed=cfg.seed,
        workers=cfg.threads,
    )
    return {
        **_split(result.K, "K"),
        **_split(result.phi, "phi"),
        "method": result.method,
        "stderr": result.stderr,
    }


def _run_limit_check(cfg, args):
    spec = ensembles.EnsembleSpec(args.ensemble, 1, args.beta, args.lambda1, args.lambda2)
    points = args.grid if args.grid else ([args.s] if args.s is not None else None)
    if points is None:
        raise fail(DomainError("limit-check needs --s or --grid", "cli"))
    if any(len(p) != args.n for p in points):
        raise fail(DomainError(f"Every point needs {args.n} coordinates", "cli"))
    report = limits.convergence_report(
        spec,
        args.regime,
        points,
        args.N_list,
        u=args.u,
        method=args.method,
        seed=cfg.seed,
        truncation=_truncation(cfg),
        workers=cfg.threads,
        centering=args.centering,
    )
    summary = {
        "fitted_order": report.fitted_order,
        "fit_residual": report.fit_residual,
        **_split(report.limit, "limit_value"),
    }
    return {"rows": report.rows(), "summary": summary}


def _run_pde_check(cfg, args):
    result = pde_checks.pde_residual(
        args.regime,
        args.beta,
        args.n,
        args.grid,
        lambda1=args.lambda1,
        source=args.source,
        weight=args.weight,
        j=args.j,
    )
    return {
        "max_residual": result.max_residual,
        "per_point": list(result.per_point),
        "equation_index": result.equation_index,
        "source": result.source,
    }


def _run_saddle(cfg, args):
    config = QuadConfig(nodes=33, max_nodes=1025, rel_tol=1e-9, workers=cfg.threads)
    return {"rows": [asymptotics.worked_case(args.case, N, config) for N in args.N_list]}


_HANDLERS = {
    "jack": _run_jack,
    "hyper": _run_hyper,
    "airy": _run_airy,
    "constants": _run_constants,
    "expect": _run_expect,
    "limit-check": _run_limit_check,
    "pde-check": _run_pde_check,
    "saddle": _run_saddle,
}


def _finite(value):
    """JSON has no inf, nan or complex numbers; they are written as strings."""
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, complex):
        return str(value)
    if isinstance(value, dict):
        return {k: _finite(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite(v) for v in value]
    return value


def _dumps(payload):
    return json.dumps(_finite(payload), sort_keys=True, separators=(",", ":"))


def render(cfg, payload):
    """Formats a subcommand's payload. Tables (``rows``) become CSV under
    ``--format csv``, preceded by a ``# config:`` line and followed by a
    ``# summary:`` line when there is one; everything else is one JSON
    object carrying ``config``.

    :rtype: :py:class:`str`
    """
    echo = cfg.as_dict()
    if cfg.fmt == "csv" and "rows" in payload:
        buffer = io.StringIO()
        buffer.write(f"# config: {_dumps(echo)}\n")
        rows = payload["rows"]
        if rows:
            writer = csv.DictWriter(buffer, fieldnames=list(rows[0]), lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
        if "summary" in payload:
            buffer.write(f"# summary: {_dumps(payload['summary'])}\n")
        return buffer.getvalue()
    return _dumps({**payload, "config": echo}) + "\n"


def _configure_logging(level):
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def main(argv=None, stdout=None):
    """Runs one subcommand.

    :type argv: (Optional) :py:class:`list` of :py:class:`str`
    :param argv: arguments without the program name; ``sys.argv[1:]`` by
        default.

    :rtype: :py:class:`int`
    :returns: the exit status, 0 on success and 1 on a library error.
        Argument errors exit with status 2 from :py:mod:`argparse`.
    """
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    flags = {name: getattr(args, name, None) for name in _GLOBAL_FLAGS}
    options = {
        k: v for k, v in sorted(vars(args).items()) if k not in _GLOBAL_FLAGS + ("config", "subcommand")
    }
    try:
        cfg = run_config.resolve(args.subcommand, flags, options, args.config)
    except BetaCharpolyError as exc:
        stdout.write(_dumps({"error": exc.record()}) + "\n")
        return 1
    _configure_logging(cfg.log_level)
    _LOGGER.info(f"Running subcommand: [{cfg.subcommand}] [seed={cfg.seed}] [threads={cfg.threads}]")
    try:
        payload = _HANDLERS[cfg.subcommand](cfg, args)
    except BetaCharpolyError as exc:
        stdout.write(_dumps({"error": exc.record(), "config": cfg.as_dict()}) + "\n")
        return 1
    stdout.write(render(cfg, payload))
    return 0
