"""
betacharpoly.special.quadrature
~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

Quadrature rules shared by the Airy, saddle-point and ensemble modules:
tanh-sinh rules on complex segments and polylines, Gauss-Legendre panels,
tensor grids with a half-rule error estimate, and node doubling until two
successive estimates agree.

Tensor grids are reduced chunk by chunk along the outermost axis, in chunk
order, so the result does not depend on the number of worker threads.

"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from betacharpoly.errors import DomainError
from betacharpoly.errors import QuadratureError
from betacharpoly.errors import fail

_LOGGER = logging.getLogger(__name__)

# beyond this the tanh-sinh abscissae round to +-1 in double precision
TANH_SINH_TMAX = 3.2
MAX_DIMENSION = 3


@dataclass(frozen=True)
class QuadConfig:
    """Node counts and tolerances for tensor quadrature.

    :type nodes: :py:class:`int`
    :param nodes: odd number of tanh-sinh nodes per segment to start with.

    :type max_nodes: :py:class:`int`
    :param max_nodes: upper bound reached by doubling.

    :type rel_tol: :py:class:`float`
    :param rel_tol: agreement required between successive estimates.

    :type workers: :py:class:`int`
    :param workers: threads used for tensor grids.
    """

    nodes: int = 101
    max_nodes: int = 801
    rel_tol: float = 1e-10
    abs_tol: float = 1e-300
    workers: int = 1

    def __post_init__(self):
        if self.nodes < 3 or self.nodes % 2 == 0:
            raise fail(DomainError(f"nodes must be odd and >= 3: {self.nodes}", "quadrature"))
        if self.max_nodes < self.nodes:
            raise fail(DomainError("max_nodes must be >= nodes", "quadrature"))
        if self.workers < 1:
            raise fail(DomainError(f"workers must be >= 1: {self.workers}", "quadrature"))


@dataclass(frozen=True)
class QuadResult:
    value: complex
    error: float
    nodes: int


@dataclass(frozen=True)
class Rule:
    """A one-dimensional rule: ``sum w_k f(x_k)``. Points and weights may be
    complex (a rule along a contour)."""

    points: np.ndarray
    weights: np.ndarray

    def __len__(self):
        return len(self.points)

    def half(self):
        """Every other node with doubled weight, the rule at twice the step.
        Exact for tanh-sinh and trapezoid families built with an even half
        width."""
        return Rule(self.points[::2], 2 * self.weights[::2])

    def integrate(self, f):
        return complex(np.sum(self.weights * f(self.points)))


def _tanh_sinh_nodes(nodes, t_max):
    if nodes < 3 or nodes % 2 == 0:
        raise fail(DomainError(f"tanh-sinh needs an odd node count >= 3: {nodes}", "quadrature"))
    half_width = (nodes - 1) // 2
    h = t_max / half_width
    t = h * np.arange(-half_width, half_width + 1)
    phi = (np.pi / 2) * np.sinh(t)
    w = h * (np.pi / 2) * np.cosh(t) / np.cosh(phi) ** 2
    return phi, w


def tanh_sinh_rule(nodes, t_max=TANH_SINH_TMAX):
    """Tanh-sinh abscissae and weights on ``[-1, 1]``.

    :type nodes: :py:class:`int`
    :param nodes: odd total node count ``2K + 1``; the step is ``t_max / K``.

    :rtype: :py:class:`Rule`
    """
    phi, w = _tanh_sinh_nodes(nodes, t_max)
    return Rule(np.tanh(phi), w)


def segment_rule(a, b, nodes):
    """Tanh-sinh rule on the straight complex segment from ``a`` to ``b``.

    :rtype: :py:class:`Rule`
    """
    phi, w = _tanh_sinh_nodes(nodes, TANH_SINH_TMAX)
    a, b = complex(a), complex(b)
    # measured from the nearer end so that no node lands on an endpoint
    near_a = 1 / (1 + np.exp(-2 * phi))
    near_b = 1 / (1 + np.exp(2 * phi))
    points = np.where(phi < 0, a + (b - a) * near_a, b - (b - a) * near_b)
    return Rule(points, (b - a) / 2 * w)


def polyline_rule(vertices, nodes):
    """Concatenated segment rules along a polyline through ``vertices``.
    Each segment has ``nodes`` nodes, so :meth:`Rule.half` stays consistent.

    :rtype: :py:class:`Rule`
    """
    vertices = [complex(v) for v in vertices]
    if len(vertices) < 2:
        raise fail(DomainError("A polyline needs at least two vertices.", "quadrature"))
    rules = [segment_rule(a, b, nodes) for a, b in zip(vertices, vertices[1:])]
    return Rule(
        np.concatenate([r.points for r in rules]),
        np.concatenate([r.weights for r in rules]),
    )


def half_polyline(rule, segments):
    """:meth:`Rule.half` applied per segment of a polyline rule."""
    size = len(rule) // segments
    parts = [
        Rule(rule.points[k * size : (k + 1) * size], rule.weights[k * size : (k + 1) * size]).half()
        for k in range(segments)
    ]
    return Rule(
        np.concatenate([p.points for p in parts]),
        np.concatenate([p.weights for p in parts]),
    )


def gauss_legendre(a, b, order):
    """Gauss-Legendre rule of the given order on ``[a, b]``.

    :rtype: :py:class:`Rule`
    """
    x, w = leggauss(order)
    half = (b - a) / 2
    return Rule((a + b) / 2 + half * x, half * w)


def composite_gauss_legendre(a, b, panels, order=20):
    """Gauss-Legendre on ``panels`` equal panels of ``[a, b]``."""
    edges = np.linspace(a, b, panels + 1)
    rules = [gauss_legendre(lo, hi, order) for lo, hi in zip(edges, edges[1:])]
    return Rule(
        np.concatenate([r.points for r in rules]),
        np.concatenate([r.weights for r in rules]),
    )


def _tensor_sum(f, rules, workers):
    """``sum_k W_k f(X_k)`` over the tensor grid of ``rules``; ``f`` gets one
    array per axis and returns an array of the same shape."""
    if not 1 <= len(rules) <= MAX_DIMENSION:
        raise fail(
            DomainError(
                f"Tensor quadrature supports 1 to {MAX_DIMENSION} axes, got {len(rules)}",
                "quadrature",
            )
        )
    inner = rules[1:]

    def chunk(k):
        first = rules[0]
        pts = [first.points[k : k + 1]] + [r.points for r in inner]
        wts = [first.weights[k : k + 1]] + [r.weights for r in inner]
        grids = np.meshgrid(*pts, indexing="ij")
        weight = wts[0].reshape((-1,) + (1,) * len(inner))
        for axis, w in enumerate(wts[1:], 1):
            shape = [1] * len(rules)
            shape[axis] = -1
            weight = weight * w.reshape(shape)
        values = np.asarray(f(*grids), dtype=complex)
        return complex(np.sum(values * weight))

    indices = range(len(rules[0]))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partial = list(pool.map(chunk, indices))
    else:
        partial = [chunk(k) for k in indices]
    return complex(
        math.fsum(p.real for p in partial), math.fsum(p.imag for p in partial)
    )


def tensor_integrate(f, rules, halves=None, workers=1):
    """Tensor-product quadrature with a half-rule error estimate.

    :type f: callable
    :param f: vectorized integrand taking one array per axis.

    :type rules: :py:class:`list` of :py:class:`Rule`
    :param rules: one rule per axis.

    :type halves: (Optional) :py:class:`list` of :py:class:`Rule`
    :param halves: the coarser rules; defaults to ``[r.half() for r in rules]``.

    :rtype: :py:class:`QuadResult`
    """
    value = _tensor_sum(f, rules, workers)
    halves = halves or [r.half() for r in rules]
    coarse = _tensor_sum(f, halves, workers)
    nodes = int(np.prod([len(r) for r in rules]))
    return QuadResult(value, abs(value - coarse), nodes)


def adaptive_integrate(f, make_rules, config=QuadConfig(), label="integral"):
    """Doubles the node count until two successive tensor estimates agree to
    ``config.rel_tol``.

    :type make_rules: callable
    :param make_rules: ``nodes -> list of Rule``.

    :raises QuadratureError: when ``config.max_nodes`` is reached first, or
        the integrand is not finite on the grid.

    :rtype: :py:class:`QuadResult`
    """
    nodes = config.nodes
    previous = None
    while True:
        value = _tensor_sum(f, make_rules(nodes), config.workers)
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            raise fail(
                QuadratureError(
                    f"{label}: integrand not finite on the grid [nodes={nodes}]",
                    estimate=None,
                )
            )
        if previous is not None:
            error = abs(value - previous)
            _LOGGER.debug(f"{label}: [nodes={nodes}] [value={value}] [diff={error:.3e}]")
            if error <= max(config.rel_tol * abs(value), config.abs_tol):
                return QuadResult(value, error, nodes)
        next_nodes = 2 * nodes - 1
        if next_nodes > config.max_nodes:
            error = abs(value - previous) if previous is not None else math.inf
            raise fail(
                QuadratureError(
                    f"{label}: no agreement to {config.rel_tol:.1e} by {nodes} nodes "
                    f"(last difference {error:.3e}).",
                    estimate=value,
                    error=error,
                )
            )
        previous = value
        nodes = next_nodes
