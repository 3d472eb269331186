"""
betacharpoly.rmt.pde_checks
~~~~~~~~~~~~~~~~~~~~~~~~~~~

Residuals of the second-order systems satisfied by the three limiting
functions, one equation per variable ``k``:

- hard: ``s_k F_kk + (2/beta)(1 + lambda1) F_k + F
  + (2/beta) sum_j (s_k F_k - s_j F_j)/(s_k - s_j) = 0``
- bulk: ``F_kk + F + (2/beta) sum_j (F_k - F_j)/(s_k - s_j) = 0``
- soft: ``F_kk - s_k F + (2/beta) sum_j (F_k - F_j)/(s_k - s_j) = 0``

Series solutions are differentiated monomial by monomial, so the residual
measures truncation only. The bulk system is written at unit frequency,
``F(s) = 0F0(s; i^m, (-i)^m)``.

"""
import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.special

from betacharpoly.errors import DomainError
from betacharpoly.errors import UnsupportedError
from betacharpoly.errors import fail
from betacharpoly.special.airy import AiryQuadSpec
from betacharpoly.special.airy import airy_multivariate
from betacharpoly.symmetric.hyper import HyperSeriesSpec
from betacharpoly.symmetric.hyper import eval_derivatives

_LOGGER = logging.getLogger(__name__)

HARD = "hard"
BULK = "bulk"
SOFT = "soft"

SERIES = "series"
CLASSICAL = "classical"
QUADRATURE = "quadrature"
SEPARABLE = "separable"

MIN_GAP = 0.1
FD_STEP = 1e-3
DEFAULT_WEIGHT = 30
_AIRY_TERMS = 120


@dataclass(frozen=True)
class PdeResidual:
    """Largest residual over a grid.

    :type per_point: :py:class:`tuple`
    :param per_point: the largest residual over ``k`` at each grid point.

    :type equation_index: :py:class:`int`
    :param equation_index: the ``k`` (from 1) at which ``max_residual`` occurs.
    """

    max_residual: float
    grid: tuple
    equation_index: int
    per_point: tuple
    source: str


def _coupling(beta):
    return 0.0 if math.isinf(beta) else 2 / beta


def _check_grid(grid, n):
    grid = [[float(v) for v in p] for p in grid]
    if not grid:
        raise fail(DomainError("The PDE grid is empty", "pde_checks"))
    for p in grid:
        if len(p) != n:
            raise fail(DomainError(f"Grid point {p} does not have dimension {n}", "pde_checks"))
        for a, b in itertools.combinations(p, 2):
            if abs(a - b) < MIN_GAP:
                raise fail(
                    DomainError(
                        f"Coordinates {a} and {b} of {p} are closer than {MIN_GAP}",
                        "pde_checks",
                        details={"point": p},
                    )
                )
    return grid


def operator_residuals(regime, beta, lambda1, s, value, grad, hess):
    """The ``n`` left-hand sides of the system at ``s``.

    :rtype: :py:class:`list` of :py:class:`complex`
    """
    c = _coupling(beta)
    n = len(s)
    out = []
    for k in range(n):
        coupling = 0j
        for j in range(n):
            if j == k:
                continue
            if regime == HARD:
                coupling += (s[k] * grad[k] - s[j] * grad[j]) / (s[k] - s[j])
            else:
                coupling += (grad[k] - grad[j]) / (s[k] - s[j])
        if regime == HARD:
            lhs = s[k] * hess[k] + c * (1 + lambda1) * grad[k] + value
        elif regime == BULK:
            lhs = hess[k] + value
        else:
            lhs = hess[k] - s[k] * value
        out.append(lhs + c * coupling)
    return out


def _series_derivatives(regime, beta, lambda1, s, weight):
    n = len(s)
    alpha = math.inf if math.isinf(beta) else beta / 2
    if regime == HARD:
        spec = HyperSeriesSpec(alpha, (), (_coupling(beta) * (lambda1 + n),))
        value, grad, hess = eval_derivatives(spec, [-v for v in s], weight)
        return value, [-g for g in grad], hess
    if n % 2:
        raise fail(DomainError(f"The bulk limit needs even n, got {n}", "pde_checks"))
    m = n // 2
    spec = HyperSeriesSpec(alpha)
    return eval_derivatives(spec, s, weight, y=[1j] * m + [-1j] * m)


def _airy_series(u):
    """``Ai``, ``Ai'`` and ``Ai''`` from the Maclaurin series with
    ``(j+2)(j+1) a_(j+2) = a_(j-1)``."""
    ai0, aip0, _, _ = scipy.special.airy(0.0)
    a = [float(ai0), float(aip0), 0.0]
    for j in range(1, _AIRY_TERMS):
        a.append(a[j - 1] / ((j + 2) * (j + 1)))
    powers = [u ** j for j in range(len(a))]
    value = sum(c * p for c, p in zip(a, powers))
    first = sum(j * a[j] * powers[j - 1] for j in range(1, len(a)))
    second = sum(j * (j - 1) * a[j] * powers[j - 2] for j in range(2, len(a)))
    return value, first, second


def _finite_differences(f, s, h=FD_STEP):
    centre = f(s)
    grad, hess = [], []
    for k in range(len(s)):
        up = list(s)
        down = list(s)
        up[k] += h
        down[k] -= h
        fu, fd = f(up), f(down)
        grad.append((fu - fd) / (2 * h))
        hess.append((fu - 2 * centre + fd) / h ** 2)
    return centre, grad, hess


def separable_solution(regime, n, j, s):
    """The ``beta = inf`` symmetric solutions with their derivatives.

    bulk: ``1/n! sum_sigma exp(i (s_sigma(1) + ... + s_sigma(j) - s_sigma(j+1) - ... - s_sigma(n)))``.
    soft: ``1/n! sum_sigma Ai(s_sigma(1)) ... Ai(s_sigma(j)) Bi(s_sigma(j+1)) ... Bi(s_sigma(n))``.

    :rtype: :py:class:`tuple`
    :returns: ``(value, grad, hess)``.
    """
    s = [float(v) for v in s]
    if len(s) != n or not 0 <= j <= n:
        raise fail(DomainError(f"Need dim(s) = n and 0 <= j <= n, got {len(s)}, {n}, {j}", "pde_checks"))
    if regime == BULK:
        table = [
            [(np.exp(1j * v), 1j * np.exp(1j * v), -np.exp(1j * v)) for v in s],
            [(np.exp(-1j * v), -1j * np.exp(-1j * v), -np.exp(-1j * v)) for v in s],
        ]
    elif regime == SOFT:
        ai, aip, bi, bip = scipy.special.airy(np.array(s))
        table = [
            [(ai[k], aip[k], s[k] * ai[k]) for k in range(n)],
            [(bi[k], bip[k], s[k] * bi[k]) for k in range(n)],
        ]
    else:
        raise fail(DomainError(f"No separable solutions for regime [{regime}]", "pde_checks"))
    value = 0j
    grad = [0j] * n
    hess = [0j] * n
    for perm in itertools.permutations(range(n)):
        # variable perm[i] takes the first kind when i < j
        factors = [table[0 if perm.index(k) < j else 1][k] for k in range(n)]
        values = [f[0] for f in factors]
        term = complex(np.prod(values))
        value += term
        for k in range(n):
            rest = complex(np.prod(values[:k] + values[k + 1 :]))
            grad[k] += rest * factors[k][1]
            hess[k] += rest * factors[k][2]
    scale = 1 / math.factorial(n)
    return value * scale, [g * scale for g in grad], [h * scale for h in hess]


def pde_residual(regime, beta, n, grid, lambda1=0.0, source=None, weight=DEFAULT_WEIGHT, j=0, airy_spec=None):
    """Largest residual of the ``regime``'s system over ``grid``.

    :type source: (Optional) :py:class:`str`
    :param source: how ``F`` is produced. ``'series'`` (hard, bulk; the
        truncated Jack series), ``'classical'`` (soft, ``n = 1``; the Airy
        Maclaurin series), ``'quadrature'`` (soft, ``n >= 2``; finite
        differences of the Airy quadrature with ``h = 1e-3``) or
        ``'separable'`` (bulk and soft at ``beta = inf``; solution index ``j``).
        Defaults per regime.

    :type weight: :py:class:`int`
    :param weight: last shell of the truncated series.

    :raises DomainError: when two coordinates of a grid point are closer than
        ``0.1``.

    :rtype: :py:class:`PdeResidual`
    """
    if regime not in (HARD, BULK, SOFT):
        raise fail(DomainError(f"Unknown regime: [{regime}]", "pde_checks"))
    grid = _check_grid(grid, n)
    if source is None:
        source = SERIES if regime != SOFT else (CLASSICAL if n == 1 else QUADRATURE)
    if source == SERIES and regime == SOFT:
        raise fail(UnsupportedError("The soft-edge limit has no series source", "pde_checks"))
    if source == CLASSICAL and (regime != SOFT or n != 1):
        raise fail(DomainError("The classical source is the one-variable Airy function", "pde_checks"))
    if source == QUADRATURE:
        if regime != SOFT:
            raise fail(DomainError("The quadrature source is the soft-edge Airy function", "pde_checks"))
        _LOGGER.warning(f"Finite-difference PDE residual for Ai^({beta / 2}) in {n} variables [h={FD_STEP}]")
        spec = airy_spec or AiryQuadSpec(alpha=beta / 2, n=n)

        def airy(point):
            return airy_multivariate(spec, point).value

    per_point = []
    worst, worst_k = 0.0, 1
    for s in grid:
        if source == SERIES:
            value, grad, hess = _series_derivatives(regime, beta, lambda1, s, weight)
        elif source == CLASSICAL:
            value, first, second = _airy_series(s[0])
            grad, hess = [first], [second]
        elif source == QUADRATURE:
            value, grad, hess = _finite_differences(airy, s)
        elif source == SEPARABLE:
            value, grad, hess = separable_solution(regime, n, j, s)
        else:
            raise fail(DomainError(f"Unknown PDE source: [{source}]", "pde_checks"))
        residuals = [abs(r) for r in operator_residuals(regime, beta, lambda1, s, value, grad, hess)]
        k = int(np.argmax(residuals))
        per_point.append(residuals[k])
        if residuals[k] >= worst:
            worst, worst_k = residuals[k], k + 1
    _LOGGER.info(
        f"PDE residual: [regime={regime}] [beta={beta}] [n={n}] [source={source}] [max={worst:.3e}]"
    )
    return PdeResidual(worst, tuple(tuple(p) for p in grid), worst_k, tuple(per_point), source)


def _bulk_order(beta):
    return -0.5 if math.isinf(beta) else 2 / beta - 0.5


def bulk_n2_closed_form(beta, s1, s2):
    """``2^nu Gamma(nu + 1) x^(-nu) J_nu(x)`` with ``nu = 2/beta - 1/2`` and
    ``x = s1 - s2``, summed as ``0F1(; nu + 1; -x^2/4)`` so that ``x = 0``
    gives 1. ``sin(x)/x`` at ``beta = 2``, ``cos(x)`` at ``beta = inf``.

    :rtype: :py:class:`float`
    """
    x = float(s1) - float(s2)
    return float(scipy.special.hyp0f1(_bulk_order(beta) + 1, -x * x / 4))


def bulk_n2_ode_residual(beta, x):
    """``f'' + (4/beta) f'/x + f`` for :func:`bulk_n2_closed_form`, with
    ``0F1`` derivatives taken from contiguous parameters.

    :rtype: :py:class:`float`
    """
    if x == 0:
        raise fail(DomainError("The ODE is singular at x = 0", "pde_checks"))
    b = _bulk_order(beta) + 1
    z = -x * x / 4
    f = scipy.special.hyp0f1(b, z)
    f1 = scipy.special.hyp0f1(b + 1, z)
    f2 = scipy.special.hyp0f1(b + 2, z)
    first = -(x / 2) * f1 / b
    second = -f1 / (2 * b) + (x * x / 4) * f2 / (b * (b + 1))
    return float(second + 2 * _coupling(beta) * first / x + f)
