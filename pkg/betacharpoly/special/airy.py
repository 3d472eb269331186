"""
betacharpoly.special.airy
~~~~~~~~~~~~~~~~~~~~~~~~~

The multivariate Airy function

.. math::

    \\mathrm{Ai}^{(\\alpha)}(s) = (2\\pi)^{-n} \\int_{\\mathbb{R}^n}
        e^{i p_3(t)/3} |\\Delta(t)|^{2/\\alpha}\\, {}_0\\mathcal{F}_0^{(\\alpha)}(s; it)\\, dt

computed by quadrature, its closed forms, and its large-argument
asymptotics.

Three routes are available:

- ``rays``: each ``t_j`` runs along two rays leaving ``i c`` at angles
  ``theta`` and ``pi - theta``, where ``e^{i t^3/3}`` decays like
  ``e^{-|t|^3 sin(3 theta)/3}``. This needs an analytic integrand, so for
  ``n >= 2`` the Vandermonde power ``2/alpha`` must be an even integer.
- ``pair`` (``n = 2``, any ``alpha``): centre-of-mass and relative coordinates
  reduce the integral to a one-dimensional real integral of ``|delta|^(2/alpha)``
  against a classical Airy function.
- ``damping`` (``n = 2``, experimental): Gaussian damping ``exp(-eps p_2(t))``
  extrapolated to ``eps = 0``.

"""
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.optimize
import scipy.special

from betacharpoly.errors import DomainError
from betacharpoly.errors import UnsupportedError
from betacharpoly.errors import fail
from betacharpoly.special.constants import gamma_beta_n
from betacharpoly.special.quadrature import QuadConfig
from betacharpoly.special.quadrature import adaptive_integrate
from betacharpoly.special.quadrature import half_polyline
from betacharpoly.special.quadrature import polyline_rule
from betacharpoly.special.quadrature import segment_rule
from betacharpoly.special.quadrature import tensor_integrate
from betacharpoly.symmetric.hyper import HyperSeriesSpec
from betacharpoly.symmetric.hyper import TruncationPolicy
from betacharpoly.symmetric.hyper import eval_pFq
from betacharpoly.symmetric.hyper import eval_two_set
from betacharpoly.symmetric.hyper import two_set_grid
from betacharpoly.symmetric.hyper import two_set_n2_closed_form

_LOGGER = logging.getLogger(__name__)

MAX_AIRY_DIMENSION = 3
DEFAULT_DAMPING = (0.2, 0.1, 0.05)
KERNEL_MAX_WEIGHT = 40
# relative size of the integrand where a ray is cut
_LOG_CUTOFF = 37.0
_METHODS = ("auto", "rays", "pair", "damping")


@dataclass(frozen=True)
class AiryQuadSpec:
    """Quadrature settings for :func:`airy_multivariate`.

    :type alpha: :py:class:`float`
    :param alpha: Jack parameter, positive or ``math.inf``.

    :type n: :py:class:`int`
    :param n: number of variables, at most 3.

    :type rotation_angle: :py:class:`float`
    :param rotation_angle: ray angle ``theta`` in ``(0, pi/6]``.

    :type nodes_per_axis: :py:class:`int`
    :param nodes_per_axis: tanh-sinh nodes per axis (both rays together).

    :type rel_tol: :py:class:`float`
    :param rel_tol: agreement the rays route needs between two node
        doublings.

    :type max_nodes_per_axis: :py:class:`int`
    :param max_nodes_per_axis: (Optional) cap reached by doubling on the
        rays route; by default 8, 4 and 2 times ``nodes_per_axis`` for
        ``n = 1, 2, 3``.

    :type damping: :py:class:`float`
    :param damping: largest ``eps`` of the damping ladder; 0 selects the
        default ladder ``(0.2, 0.1, 0.05)``.

    :type method: :py:class:`str`
    :param method: ``'auto'``, ``'rays'``, ``'pair'`` or ``'damping'``.
    """

    alpha: float
    n: int
    rotation_angle: float = math.pi / 6
    nodes_per_axis: int = 201
    damping: float = 0.0
    method: str = "auto"
    rel_tol: float = 1e-8
    max_nodes_per_axis: Optional[int] = None

    def __post_init__(self):
        if not self.alpha > 0:
            raise fail(DomainError(f"alpha must be positive, got {self.alpha}", "airy"))
        if not 1 <= self.n <= MAX_AIRY_DIMENSION:
            raise fail(
                UnsupportedError(
                    f"Airy quadrature supports 1 <= n <= {MAX_AIRY_DIMENSION}, got {self.n}",
                    "airy",
                )
            )
        if not 0 < self.rotation_angle <= math.pi / 6 + 1e-15:
            raise fail(
                DomainError(f"rotation_angle must lie in (0, pi/6]: {self.rotation_angle}", "airy")
            )
        if self.nodes_per_axis < 9:
            raise fail(DomainError(f"nodes_per_axis too small: {self.nodes_per_axis}", "airy"))
        if self.max_nodes_per_axis is not None and self.max_nodes_per_axis < self.nodes_per_axis:
            raise fail(DomainError("max_nodes_per_axis must be >= nodes_per_axis", "airy"))
        if not self.rel_tol > 0:
            raise fail(DomainError(f"rel_tol must be positive: {self.rel_tol}", "airy"))
        if self.damping < 0:
            raise fail(DomainError(f"damping must be >= 0: {self.damping}", "airy"))
        if self.method not in _METHODS:
            raise fail(DomainError(f"Unknown Airy method: [{self.method}]", "airy"))

    @property
    def power(self):
        """The Vandermonde power ``2/alpha``."""
        return 0.0 if math.isinf(self.alpha) else 2.0 / self.alpha

    def analytic_power(self):
        p = self.power
        return abs(p - 2 * round(p / 2)) < 1e-12

    def resolved_method(self):
        if self.method != "auto":
            return self.method
        if self.n == 2 and self.damping > 0:
            return "damping"
        return "pair" if self.n == 2 else "rays"


@dataclass(frozen=True)
class AiryValue:
    """A quadrature value of the multivariate Airy function.

    ``im_residual`` is the imaginary part left by the quadrature, which
    should vanish for real ``s``.
    """

    value: float
    im_residual: float
    est_error: float
    method: str
    experimental: bool = False


def classical_airy_derivatives(u, order):
    """``[Ai(u), Ai'(u), ..., Ai^(order)(u)]`` from ``Ai'' = u Ai`` and
    ``Ai^(k+2) = u Ai^(k) + k Ai^(k-1)``.

    :rtype: :py:class:`list` of :py:class:`float`
    """
    ai, aip, _, _ = scipy.special.airy(u)
    values = [float(ai), float(aip)]
    for k in range(0, order - 1):
        nxt = u * values[k] + (k * values[k - 1] if k >= 1 else 0.0)
        values.append(nxt)
    return values[: order + 1]


def airy_equal_argument(n, u):
    """Closed form at equal arguments for the analytic Vandermonde square
    (``2/alpha = 2``):
    ``(-1)^(n(n-1)/2) n! det[Ai^(i+j-2)(u)]``.

    For ``n = 2`` this is ``2 (Ai'(u)^2 - u Ai(u)^2)``.

    :rtype: :py:class:`float`
    """
    derivs = classical_airy_derivatives(u, 2 * n - 2)
    matrix = np.array([[derivs[i + j] for j in range(n)] for i in range(n)])
    sign = -1.0 if (n * (n - 1) // 2) % 2 else 1.0
    return sign * math.factorial(n) * float(np.linalg.det(matrix))


def airy_infinite(s):
    """``Ai^(inf)(s) = prod Ai(s_j)``."""
    ai = scipy.special.airy(np.asarray(s, dtype=float))[0]
    return float(np.prod(ai))


def _kernel(alpha, s, grids):
    """``0F0^(alpha)(s; i t)`` on a grid, after pulling out the mean of ``s``."""
    n = len(s)
    s0 = float(np.mean(s))
    shifted = [float(v) - s0 for v in s]
    total = sum(grids)
    base = np.exp(1j * s0 * total)
    if max(abs(v) for v in shifted) == 0.0:
        return base
    it = [1j * g for g in grids]
    if math.isinf(alpha):
        acc = np.zeros_like(base)
        for perm in itertools.permutations(range(n)):
            acc = acc + np.exp(sum(shifted[j] * it[perm[j]] for j in range(n)))
        return base * acc / math.factorial(n)
    if n == 2:
        return base * two_set_n2_closed_form(alpha, shifted, it)
    return base * two_set_grid(alpha, shifted, it, max_weight=KERNEL_MAX_WEIGHT)


def _vandermonde(grids, power):
    if power == 0:
        return 1.0
    value = 1.0
    for i, j in itertools.combinations(range(len(grids)), 2):
        value = value * (grids[i] - grids[j]) ** int(round(power))
    return value


def _ray_length(spec, s, apex_height):
    theta = spec.rotation_angle
    s0 = float(np.mean(s))
    spread = max(abs(float(v) - s0) for v in s)
    linear = max(-s0, 0.0) * math.sin(theta) + spread
    pairs = spec.n * (spec.n - 1) / 2

    def excess(r):
        return (
            apex_height * r * r * math.cos(2 * theta)
            + r ** 3 * math.sin(3 * theta) / 3
            - linear * r
            - spec.power * pairs * math.log(1 + 2 * (apex_height + r))
            - _LOG_CUTOFF
        )

    hi = 4.0
    while excess(hi) <= 0:
        hi *= 2
        if hi > 1e4:
            raise fail(DomainError("Could not bound the Airy integration rays.", "airy"))
    return scipy.optimize.brentq(excess, 1e-9, hi)


def _segment_nodes(nodes_per_axis):
    half_width = 2 * max(1, (nodes_per_axis - 1) // 8)
    return 2 * half_width + 1


def _airy_rays(spec, s, workers=1):
    if spec.n >= 2 and not spec.analytic_power():
        raise fail(
            UnsupportedError(
                "non-analytic Vandermonde power: quadrature unsupported "
                f"(2/alpha = {spec.power}, n = {spec.n})",
                "airy",
            )
        )
    c = math.sqrt(max(float(np.mean(s)), 0.0))
    length = _ray_length(spec, s, c)
    theta = spec.rotation_angle
    apex = 1j * c
    vertices = [
        apex + length * np.exp(1j * (math.pi - theta)),
        apex,
        apex + length * np.exp(1j * theta),
    ]
    start = _segment_nodes(spec.nodes_per_axis)
    if spec.max_nodes_per_axis is None:
        cap = (start - 1) * 2 ** (4 - spec.n) + 1
    else:
        cap = max(start, _segment_nodes(spec.max_nodes_per_axis))
    doubling = QuadConfig(nodes=start, max_nodes=cap, rel_tol=spec.rel_tol, workers=workers)
    norm = (2 * math.pi) ** (-spec.n)

    def integrand(*grids):
        phase = np.exp(1j * sum(g ** 3 for g in grids) / 3)
        return norm * phase * _vandermonde(grids, spec.power) * _kernel(spec.alpha, s, grids)

    _LOGGER.debug(
        f"Airy rays: [n={spec.n}] [apex={c:.3f}] [length={length:.3f}] [nodes={start}..{cap}]"
    )
    result = adaptive_integrate(
        integrand, lambda nodes: [polyline_rule(vertices, nodes)] * spec.n, doubling, "Airy rays"
    )
    return AiryValue(result.value.real, result.value.imag, result.error, "rays")


def _pair_bessel(alpha, d, delta):
    b = 0.5 if math.isinf(alpha) else 1.0 / alpha + 0.5
    return scipy.special.hyp0f1(b, -((d * delta) ** 2) / 4)


def _airy_pair(spec, s, config):
    s1, s2 = (float(v) for v in s)
    s0, d = (s1 + s2) / 2, (s1 - s2) / 2
    shift = 2 ** (2 / 3) * s0
    # Ai(x) < 1e-17 for x > 15.5
    reach = math.sqrt(2 ** (4 / 3) * (15.5 + max(0.0, -shift)))
    power = spec.power

    def integrand(delta):
        delta = np.real(delta)
        arg = shift + 2 ** (-4 / 3) * delta ** 2
        ai = scipy.special.airy(arg)[0]
        weight = np.abs(delta) ** power if power else 1.0
        return weight * _pair_bessel(spec.alpha, d, delta) * ai

    result = adaptive_integrate(
        integrand, lambda nodes: [segment_rule(0.0, reach, nodes)], config, "Airy pair"
    )
    scale = 2 ** (-1 / 3) / (2 * math.pi) * 2
    return AiryValue(scale * result.value.real, scale * result.value.imag, scale * result.error, "pair")


def _damped_pair(spec, s, eps):
    """``Ai`` with the damping ``exp(-eps p_2(t))`` in centre-of-mass ``T`` and
    relative ``delta`` coordinates. ``T`` runs on the ray contour, ``delta``
    on the real line."""
    s1, s2 = (float(v) for v in s)
    s0, d = (s1 + s2) / 2, (s1 - s2) / 2
    c = math.sqrt(max(s0, 0.0))
    theta = spec.rotation_angle
    nodes = _segment_nodes(spec.nodes_per_axis)
    reach_t = 1.5 * (3 * _LOG_CUTOFF / math.sin(3 * theta)) ** (1 / 3) + 2 * c
    reach_d = math.sqrt(2 ** (4 / 3) * (15.5 + max(0.0, -(2 ** (2 / 3)) * s0))) + 2
    t_rule = polyline_rule(
        [1j * c + reach_t * np.exp(1j * (math.pi - theta)), 1j * c, 1j * c + reach_t * np.exp(1j * theta)],
        nodes,
    )
    d_rule = polyline_rule([-reach_d, 0.0, reach_d], nodes)
    power = spec.power

    def integrand(T, delta):
        delta_r = np.real(delta)
        phase = np.exp(1j * (2 * T ** 3 / 3 + T * delta_r ** 2 / 2 + 2 * s0 * T))
        damp = np.exp(-eps * (2 * T ** 2 + delta_r ** 2 / 2))
        weight = np.abs(delta_r) ** power if power else 1.0
        return phase * damp * weight * _pair_bessel(spec.alpha, d, delta_r)

    result = tensor_integrate(
        integrand, [t_rule, d_rule], [half_polyline(t_rule, 2), half_polyline(d_rule, 2)]
    )
    return result.value / (2 * math.pi) ** 2, result.error / (2 * math.pi) ** 2


def _airy_damping(spec, s):
    ladder = (spec.damping, spec.damping / 2, spec.damping / 4) if spec.damping else DEFAULT_DAMPING
    _LOGGER.warning(
        f"Airy damping route is experimental: [alpha={spec.alpha}] [eps={ladder}]"
    )
    values = []
    quad_error = 0.0
    for eps in ladder:
        value, error = _damped_pair(spec, s, eps)
        values.append(value)
        quad_error = max(quad_error, error)
    eps = np.array(ladder)
    re = np.polyfit(eps, np.real(values), len(ladder) - 1)
    im = np.polyfit(eps, np.imag(values), len(ladder) - 1)
    estimate = complex(np.polyval(re, 0.0), np.polyval(im, 0.0))
    linear = values[-1] + (values[-1] - values[-2]) * ladder[-1] / (ladder[-2] - ladder[-1])
    spread = abs(estimate - linear)
    return AiryValue(estimate.real, estimate.imag, spread + quad_error, "damping", True)


def airy_multivariate(spec, s, config=None):
    """Evaluates ``Ai^(alpha)(s)`` by quadrature.

    .. code:: python

        from betacharpoly.special.airy import AiryQuadSpec, airy_multivariate
        airy_multivariate(AiryQuadSpec(alpha=1.0, n=2), [0.3, -0.2]).value

    :type spec: :py:class:`AiryQuadSpec`
    :param spec: parameters and route.

    :type s: sequence of :py:class:`float`
    :param s: real point with ``len(s) == spec.n``.

    :type config: (Optional) :py:class:`~betacharpoly.special.quadrature.QuadConfig`
    :param config: node doubling settings of the pair route; the rays route
        doubles from ``spec.nodes_per_axis`` to ``spec.max_nodes_per_axis``
        and only takes ``workers`` from here.

    :raises QuadratureError: when two doublings never agree to the
        requested tolerance.

    :rtype: :py:class:`AiryValue`
    """
    s = [float(v) for v in s]
    if len(s) != spec.n:
        raise fail(DomainError(f"Expected {spec.n} arguments, got {len(s)}", "airy"))
    method = spec.resolved_method()
    if method in ("pair", "damping") and spec.n != 2:
        raise fail(UnsupportedError(f"The {method} route needs n = 2, got {spec.n}", "airy"))
    _LOGGER.info(f"Evaluating Ai^({spec.alpha}) at {s}: [method={method}]")
    if method == "pair":
        return _airy_pair(spec, s, config or QuadConfig(nodes=65, max_nodes=2049, rel_tol=1e-12))
    if method == "damping":
        return _airy_damping(spec, s)
    return _airy_rays(spec, s, config.workers if config else 1)


def airy_asymptotic_right(alpha, n, x, s):
    """Leading behaviour of ``Ai^(alpha)(x + x^(-1/2) s)`` as ``x -> inf``:
    ``Gamma_{2/alpha,n} / ((2 pi)^n 2^(e/2)) exp(-2n x^(3/2)/3 - p_1(s)) / x^(e/4)``
    with ``e = n + n(n-1)/alpha``.

    :rtype: :py:class:`float`
    """
    if not x > 0:
        raise fail(DomainError(f"x must be positive, got {x}", "airy"))
    inv = 0.0 if math.isinf(alpha) else 1.0 / alpha
    e = n + n * (n - 1) * inv
    log = gamma_beta_n(2 * inv, n).log_value.real
    log -= n * math.log(2 * math.pi) + (e / 2) * math.log(2)
    log -= 2 * n * x ** 1.5 / 3 + sum(float(v) for v in s) + (e / 4) * math.log(x)
    return math.exp(log)


def airy_asymptotic_left(alpha, m, x, s, max_weight=60):
    """Leading behaviour of ``Ai^(alpha)(-x + x^(-1/2) s)`` for ``n = 2m``:
    ``C(2m, m) Gamma_{2/alpha,m}^2 / (2 pi)^n (2 sqrt(x))^(-m + m(m+1)/alpha)
    exp(-i p_1(s)) 1F1(m/alpha; n/alpha; 2 i s)``.

    At ``alpha = inf`` the ``1F1`` factor is taken through its two-set form
    ``0F0(i s; 1^m, (-1)^m)``.

    :rtype: :py:class:`complex`
    """
    if not x > 0:
        raise fail(DomainError(f"x must be positive, got {x}", "airy"))
    s = [float(v) for v in s]
    n = 2 * m
    if len(s) != n:
        raise fail(DomainError(f"Expected {n} arguments, got {len(s)}", "airy"))
    inv = 0.0 if math.isinf(alpha) else 1.0 / alpha
    log = math.log(scipy.special.comb(n, m, exact=True))
    log += 2 * gamma_beta_n(2 * inv, m).log_value.real - n * math.log(2 * math.pi)
    log += (-m + m * (m + 1) * inv) * math.log(2 * math.sqrt(x))
    policy = TruncationPolicy(max_weight=max_weight)
    if math.isinf(alpha):
        series = eval_two_set(
            HyperSeriesSpec(alpha, (), (), policy), [1j * v for v in s], [1.0] * m + [-1.0] * m
        ).value
    else:
        spec = HyperSeriesSpec(alpha, (m / alpha,), (n / alpha,), policy)
        series = np.exp(-1j * sum(s)) * eval_pFq(spec, [2j * v for v in s]).value
    return complex(math.exp(log) * series)
