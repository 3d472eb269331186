"""
betacharpoly.special.asymptotics
~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

Leading terms of Selberg-type integrals

.. math::

    I_N = \\int \\exp\\Big\\{-N \\sum_j p(t_j)\\Big\\} |\\Delta(t)|^\\nu q(t)\\, dt

as ``N -> inf``: Watson's lemma on ``(0, inf)^n``, Laplace's method at one
saddle of any order and at two simple saddles, the integral representation
of ``|x|^nu`` through ``H_nu``, and brute tensor quadrature used to check
them.

Saddles are declared by the caller and only polished numerically. Fractional
powers of ``p_0 = p^(mu)(x_0)/mu!`` follow one branch rule: its phase
``omega_0`` is chosen with ``|omega_0 + mu omega| <= pi/2`` where ``omega`` is
the direction in which the path leaves ``x_0``.

"""
import cmath
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Callable
from typing import Optional
from typing import Tuple

import mpmath
import numpy as np
import scipy.special

from betacharpoly.errors import DomainError
from betacharpoly.errors import UnsupportedError
from betacharpoly.errors import fail
from betacharpoly.special.constants import gamma_beta_n
from betacharpoly.special.quadrature import QuadConfig
from betacharpoly.special.quadrature import adaptive_integrate
from betacharpoly.special.quadrature import composite_gauss_legendre
from betacharpoly.special.quadrature import polyline_rule
from betacharpoly.special.quadrature import segment_rule

_LOGGER = logging.getLogger(__name__)

SADDLE_TOL = 1e-10
MAX_QUAD_DIMENSION = 3
_NEWTON_STEPS = 50
# e^-40 relative to the peak is where rays are cut
_LOG_CUTOFF = 40.0


def _is_even_integer(nu):
    return abs(nu - 2 * round(nu / 2)) < 1e-12


def branch_phase(p0, mu, omega):
    """The phase ``omega_0`` of ``p0`` satisfying ``|omega_0 + mu omega| <= pi/2``.

    :type p0: :py:class:`complex`
    :param p0: ``p^(mu)(x_0) / mu!``.

    :type mu: :py:class:`int`
    :param mu: order of the first non-vanishing derivative.

    :type omega: :py:class:`float`
    :param omega: direction of the path leaving the saddle.

    :raises DomainError: when no branch satisfies the bound, i.e. ``omega``
        is not a direction of descent.

    :rtype: :py:class:`float`
    """
    principal = cmath.phase(complex(p0))
    k = round(-(principal + mu * omega) / (2 * math.pi))
    omega0 = principal + 2 * math.pi * k
    if abs(omega0 + mu * omega) > math.pi / 2 + 1e-12:
        raise fail(
            DomainError(
                f"Path direction is not a descent direction: [omega={omega:.6f}] "
                f"[ph(p0)={principal:.6f}] [mu={mu}]",
                "asymptotics",
            )
        )
    return omega0


def log_root(p0, mu, omega):
    """``log(p0^(1/mu))`` on the branch fixed by :func:`branch_phase`."""
    omega0 = branch_phase(p0, mu, omega)
    return complex(math.log(abs(p0)), omega0) / mu


@dataclass(frozen=True)
class PhaseFunction:
    """The phase ``p`` of a Selberg-type integral together with its saddles.

    Either one saddle ``saddle`` of order ``order - 1`` is declared, or two
    simple saddles ``saddles = (x_plus, x_minus)``. Declared saddles are
    polished by Newton steps and must make ``p'`` vanish to ``1e-10``.

    :type value: callable
    :param value: ``p``, vectorized over complex arrays.

    :type derivatives: :py:class:`tuple` of callables
    :param derivatives: ``(p', p'', p''')``; ``p'''`` may be omitted for
        simple saddles.

    :type saddle: :py:class:`complex`
    :param saddle: the single saddle ``x_0``.

    :type order: :py:class:`int`
    :param order: ``mu >= 2``, the order of the first non-vanishing derivative.

    :type leading_derivative: :py:class:`complex`
    :param leading_derivative: ``p^(mu)(x_0)``; computed from ``derivatives``
        when ``mu <= 3``.

    :type slope: :py:class:`float`
    :param slope: direction in which the path leaves ``x_0``. Defaults to the
        steepest descent direction with ``|slope| <= pi/2`` for even ``mu``.

    :type incoming_slope: :py:class:`float`
    :param incoming_slope: direction, seen from ``x_0``, from which the path
        arrives. Defaults to ``slope + pi``.

    :type saddles: :py:class:`tuple`
    :param saddles: ``(x_plus, x_minus)`` with ``Re(x_plus - x_minus) >= 0``.

    :type slopes: :py:class:`tuple`
    :param slopes: outgoing directions at ``x_plus`` and ``x_minus``.
    """

    value: Callable
    derivatives: Tuple[Callable, ...]
    saddle: Optional[complex] = None
    order: int = 2
    leading_derivative: Optional[complex] = None
    slope: Optional[float] = None
    incoming_slope: Optional[float] = None
    saddles: Optional[Tuple[complex, complex]] = None
    slopes: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 2:
            raise fail(DomainError(f"Saddle order mu must be an integer >= 2: {self.order}", "asymptotics"))
        if len(self.derivatives) < 2:
            raise fail(DomainError("At least p' and p'' are required.", "asymptotics"))
        if (self.saddle is None) == (self.saddles is None):
            raise fail(DomainError("Declare exactly one of saddle or saddles.", "asymptotics"))
        if self.saddle is not None:
            self._init_one_saddle()
        else:
            self._init_two_saddles()

    def _init_one_saddle(self):
        x0 = self.polish(self.saddle, self.order)
        object.__setattr__(self, "saddle", x0)
        if self.leading_derivative is None:
            if self.order > len(self.derivatives):
                raise fail(
                    DomainError(
                        f"leading_derivative is required for mu = {self.order}", "asymptotics"
                    )
                )
            lead = complex(self.derivatives[self.order - 1](x0))
            object.__setattr__(self, "leading_derivative", lead)
        if self.leading_derivative == 0:
            raise fail(DomainError("p^(mu)(x_0) vanishes.", "asymptotics"))
        if self.slope is None:
            if self.order % 2:
                raise fail(DomainError("Odd mu needs declared slopes.", "asymptotics"))
            object.__setattr__(self, "slope", _steepest_slope(self.p0, self.order))
        if self.incoming_slope is None:
            object.__setattr__(self, "incoming_slope", self.slope + math.pi)
        branch_phase(self.p0, self.order, self.slope)
        branch_phase(self.p0, self.order, self.incoming_slope)

    def _init_two_saddles(self):
        if self.order != 2:
            raise fail(DomainError("Two declared saddles must be simple (mu = 2).", "asymptotics"))
        plus, minus = (self.polish(x, 2) for x in self.saddles)
        if (plus - minus).real < -SADDLE_TOL:
            raise fail(
                DomainError(
                    f"Saddles must satisfy Re(x_plus - x_minus) >= 0: [{plus}] [{minus}]",
                    "asymptotics",
                )
            )
        object.__setattr__(self, "saddles", (plus, minus))
        seconds = tuple(complex(self.derivatives[1](x)) for x in (plus, minus))
        if any(v == 0 for v in seconds):
            raise fail(DomainError("p'' vanishes at a declared simple saddle.", "asymptotics"))
        if self.slopes is None:
            object.__setattr__(self, "slopes", tuple(_steepest_slope(v / 2, 2) for v in seconds))
        for v, omega in zip(seconds, self.slopes):
            branch_phase(v / 2, 2, omega)

    def polish(self, x, mu):
        """Newton refinement of a declared saddle of order ``mu - 1``.

        A double zero of ``p'`` is a simple zero of ``p''``, so for ``mu = 3``
        the iteration runs on ``p''``.

        :raises DomainError: if ``|p'(x)|`` stays above ``1e-10``.

        :rtype: :py:class:`complex`
        """
        x = complex(x)
        if mu <= len(self.derivatives):
            f, df = self.derivatives[mu - 2], self.derivatives[mu - 1]
            for _ in range(_NEWTON_STEPS):
                slope = complex(df(x))
                if slope == 0:
                    break
                step = complex(f(x)) / slope
                x -= step
                if abs(step) <= 1e-15 * max(1.0, abs(x)):
                    break
        residual = abs(complex(self.derivatives[0](x)))
        if residual > SADDLE_TOL:
            raise fail(
                DomainError(
                    f"p' does not vanish at the declared saddle: [x={x}] [residual={residual:.3e}]",
                    "asymptotics",
                    {"residual": residual},
                )
            )
        _LOGGER.debug(f"Saddle polished: [x={x}] [residual={residual:.3e}]")
        return x

    @property
    def p0(self):
        """``p^(mu)(x_0) / mu!`` at the single saddle."""
        return complex(self.leading_derivative) / math.factorial(self.order)

    def second_derivatives(self):
        """``(p''(x_plus), p''(x_minus))``."""
        return tuple(complex(self.derivatives[1](x)) for x in self.saddles)


def _steepest_slope(p0, mu):
    """The steepest descent direction ``-ph(p0)/mu`` moved into ``(-pi/2, pi/2]``."""
    omega = -cmath.phase(complex(p0)) / mu
    step = 2 * math.pi / mu
    while omega <= -math.pi / 2:
        omega += step
    while omega > math.pi / 2:
        omega -= step
    return omega


@dataclass(frozen=True)
class SelbergIntegralSpec:
    """An integral ``int exp(-N sum p(t_j)) |Delta(t)|^nu q(t) dt``.

    :type phase: :py:class:`PhaseFunction`
    :param phase: ``p`` and its saddles.

    :type n: :py:class:`int`
    :param n: number of variables.

    :type vandermonde_power: :py:class:`float`
    :param vandermonde_power: ``nu > -1``.

    :type amplitude: callable
    :param amplitude: (Optional) ``q(t_1, ..., t_n)``, vectorized; ``1`` when
        omitted.

    :type domain: :py:class:`tuple`
    :param domain: (Optional) vertices of the polyline every ``t_j`` runs
        along, used by :func:`brute_selberg`.

    :type vanishing_orders: :py:class:`tuple`
    :param vanishing_orders: (Optional) ``lambda``, the orders with which ``q``
        vanishes at the saddle, as in ``t^(lambda - 1)``.

    :type real_line_paths: :py:class:`bool`
    :param real_line_paths: the caller asserts that after deforming the local
        paths onto a line the argument of ``H_nu`` becomes real. Required
        for a non-even ``nu``; not checked.
    """

    phase: PhaseFunction
    n: int
    vandermonde_power: float
    amplitude: Optional[Callable] = None
    domain: Optional[Tuple[complex, ...]] = None
    vanishing_orders: Optional[Tuple[float, ...]] = None
    real_line_paths: bool = True

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise fail(DomainError(f"n must be a positive integer: {self.n}", "asymptotics"))
        if not self.vandermonde_power > -1:
            raise fail(DomainError(f"nu must exceed -1: {self.vandermonde_power}", "asymptotics"))
        if not self.analytic_power() and self.n > 1 and not self.real_line_paths:
            raise fail(
                UnsupportedError(
                    "A non-even Vandermonde power needs local paths on which the H_nu argument is real.",
                    "asymptotics",
                )
            )

    @property
    def n_nu(self):
        return self.vandermonde_power * self.n * (self.n - 1) / 2

    def analytic_power(self):
        return self.n == 1 or _is_even_integer(self.vandermonde_power)

    def q(self, *point):
        if self.amplitude is None:
            return 1.0
        return complex(self.amplitude(*point))


@dataclass(frozen=True)
class LeadingTerm:
    """``coefficient / N^exponent``."""

    coefficient: complex
    exponent: float

    def at(self, N):
        return self.coefficient * N ** (-self.exponent)


def _vandermonde(grids, power, absolute=False):
    if power == 0 or len(grids) < 2:
        return 1.0
    value = 1.0
    for i, j in itertools.combinations(range(len(grids)), 2):
        diff = grids[i] - grids[j]
        if absolute:
            value = value * np.abs(np.real(diff)) ** power
        else:
            value = value * diff ** int(round(power))
    return value


def watson_leading(lam, beta, n, a0=1.0):
    """Leading term of ``int_(0,inf)^n e^(-N sum t) |Delta|^beta q(t) dt`` when
    ``q(t) ~ a0 t^(mu - 1)`` near the origin:

    ``A_0 = a0 prod_j Gamma(1 + beta/2 + j beta/2) Gamma(mu + j beta/2) / Gamma(1 + beta/2)``
    over ``N^(beta n(n-1)/2 + mu n)``.

    :type lam: :py:class:`float` or sequence
    :param lam: ``mu``, or the vector ``lambda`` which must then be uniform.

    :raises UnsupportedError: for a nonuniform ``lambda``.

    :rtype: :py:class:`LeadingTerm`
    """
    if np.ndim(lam):
        lam = [float(v) for v in lam]
        if len(lam) != n:
            raise fail(DomainError(f"lambda needs {n} entries, got {len(lam)}", "asymptotics"))
        if max(lam) - min(lam) > 1e-14:
            raise fail(
                UnsupportedError(
                    "closed form unavailable; use quadrature A_j route "
                    f"(lambda={lam})",
                    "asymptotics",
                )
            )
        lam = lam[0]
    mu = float(lam)
    if not mu > 0:
        raise fail(DomainError(f"mu must be positive: {mu}", "asymptotics"))
    if beta < 0:
        raise fail(DomainError(f"beta must be >= 0: {beta}", "asymptotics"))
    log = sum(
        scipy.special.gammaln(1 + beta / 2 + j * beta / 2)
        + scipy.special.gammaln(mu + j * beta / 2)
        - scipy.special.gammaln(1 + beta / 2)
        for j in range(n)
    )
    exponent = beta * n * (n - 1) / 2 + mu * n
    return LeadingTerm(complex(a0) * math.exp(log), exponent)


def watson_coefficient_quadrature(lam, beta, n, a=None, config=None):
    """``A_j = int_(0,inf)^n t^(lambda-1) e^(-sum t) |Delta|^beta a_j(t) dt`` by
    tensor quadrature, for any ``lambda``.

    :type a: callable
    :param a: (Optional) the homogeneous polynomial ``a_j``, vectorized;
        ``1`` when omitted.

    :rtype: :py:class:`~betacharpoly.special.quadrature.QuadResult`
    """
    lam = [float(v) for v in (lam if np.ndim(lam) else [lam] * n)]
    if len(lam) != n or min(lam) <= 0:
        raise fail(DomainError(f"lambda must hold {n} positive entries: {lam}", "asymptotics"))
    _check_dimension(n)
    reach = _LOG_CUTOFF + 4 * (max(lam) + beta * n)

    def integrand(*grids):
        t = [np.real(g) for g in grids]
        value = np.exp(-sum(t)) * _vandermonde(t, beta, absolute=True)
        for tj, lj in zip(t, lam):
            value = value * tj ** (lj - 1)
        if a is not None:
            value = value * a(*t)
        return value

    return adaptive_integrate(
        integrand,
        lambda nodes: [segment_rule(0.0, reach, nodes)] * n,
        config or QuadConfig(nodes=33, max_nodes=513, rel_tol=1e-9),
        "Watson A_j",
    )


def _check_dimension(n):
    if n > MAX_QUAD_DIMENSION:
        raise fail(
            UnsupportedError(
                f"Quadrature supports n <= {MAX_QUAD_DIMENSION}, got {n}", "asymptotics"
            )
        )


def _straight(slope_out, slope_in):
    return abs(cmath.exp(1j * slope_in) + cmath.exp(1j * slope_out)) < 1e-12


def leading_coefficient_closed_form(c, mu, nu, n, slope_out=0.0, slope_in=None):
    """``A_0`` with ``g = 1`` where a closed form exists.

    - ``n = 1``: ``Gamma(1 + 1/mu) |c|^(-1/mu) (e^(-i omega_out/mu) - e^(-i omega_in/mu))``
      with each ``omega`` from :func:`branch_phase` on its ray.
    - ``mu = 2``: Mehta's integral, ``Gamma_{nu,n} (2c)^(-(n + n_nu)/2)``.

    :rtype: :py:class:`complex`
    """
    slope_in = slope_out + math.pi if slope_in is None else slope_in
    if n == 1:
        out = branch_phase(c, mu, slope_out)
        inc = branch_phase(c, mu, slope_in)
        scale = math.gamma(1 + 1 / mu) * abs(c) ** (-1 / mu)
        return scale * (cmath.exp(-1j * out / mu) - cmath.exp(-1j * inc / mu))
    if mu != 2:
        raise fail(UnsupportedError(f"No closed form for mu = {mu}, n = {n}", "asymptotics"))
    if not _straight(slope_out, slope_in):
        raise fail(UnsupportedError("The closed form needs a straight local path.", "asymptotics"))
    e = n + nu * n * (n - 1) / 2
    log = gamma_beta_n(nu, n).log_value.real - (e / 2) * math.log(2)
    log -= e * log_root(c, 2, slope_out)
    return cmath.exp(log)


def leading_coefficient_quadrature(c, mu, nu, n, g=None, slope_out=0.0, slope_in=None, config=None):
    """``A_0 = int exp(-c sum w_j^mu) g(w) h(Delta(w)) dw`` with each ``w_j`` on
    the ray arriving from ``slope_in`` followed by the ray leaving at
    ``slope_out``.

    ``h(Delta) = Delta^nu`` for even ``nu``. Otherwise the path must be a
    straight line ``w = e^(i omega) r`` and ``h`` is taken as
    ``e^(i omega n_nu) |Delta(r)|^nu``, which is what the ``H_nu``
    representation gives after rotating its ``r``-integral.

    :type g: callable
    :param g: (Optional) analytic weight ``g(w_1, ..., w_n)``, vectorized.

    :raises DomainError: if a ray is not a descent direction.
    :raises UnsupportedError: for ``n > 3`` or a bent path with non-even ``nu``.

    :rtype: :py:class:`~betacharpoly.special.quadrature.QuadResult`
    """
    _check_dimension(n)
    slope_in = slope_out + math.pi if slope_in is None else slope_in
    decay = []
    for omega in (slope_in, slope_out):
        omega0 = branch_phase(c, mu, omega)
        rate = abs(c) * math.cos(omega0 + mu * omega)
        if rate <= 1e-12 * abs(c):
            raise fail(
                DomainError(
                    f"divergent A_0 integrand along the ray at angle {omega:.6f}",
                    "asymptotics",
                )
            )
        decay.append(rate)
    e = n + nu * n * (n - 1) / 2
    reach = 1.5 * ((_LOG_CUTOFF + e) / min(decay)) ** (1 / mu) + 1.0
    config = config or QuadConfig(nodes=33, max_nodes=1025, rel_tol=1e-8)

    if n == 1 or _is_even_integer(nu):
        vertices = [reach * cmath.exp(1j * slope_in), 0.0, reach * cmath.exp(1j * slope_out)]

        def integrand(*w):
            value = np.exp(-c * sum(wj ** mu for wj in w)) * _vandermonde(w, nu)
            return value * (g(*w) if g is not None else 1.0)

        label = "A_0"
    else:
        if not _straight(slope_out, slope_in):
            raise fail(
                UnsupportedError(
                    "A non-even Vandermonde power needs a straight local path.", "asymptotics"
                )
            )
        rotation = cmath.exp(1j * slope_out)
        vertices = [-reach, 0.0, reach]
        front = cmath.exp(1j * slope_out * e)
        rotated_c = c * rotation ** mu

        def integrand(*r):
            r = [np.real(x) for x in r]
            value = front * np.exp(-rotated_c * sum(x ** mu for x in r))
            value = value * _vandermonde(r, nu, absolute=True)
            if g is not None:
                value = value * g(*[rotation * x for x in r])
            return value

        label = "A_0 (rotated line)"

    _LOGGER.debug(f"{label}: [c={c}] [mu={mu}] [nu={nu}] [n={n}] [reach={reach:.3f}]")
    return adaptive_integrate(
        integrand, lambda nodes: [polyline_rule(vertices, nodes)] * n, config, label
    )


def _log_scaled(log_value):
    if log_value.real > 700:
        return complex(mpmath.exp(mpmath.mpc(log_value.real, log_value.imag)))
    return cmath.exp(log_value)


def laplace_one_saddle(spec, g=None, N=1.0, config=None):
    """Leading term at a single saddle ``x_0`` of order ``mu - 1``:

    ``I_N ~ e^(-n N p(x_0)) N^(-(n_nu + n)/mu) A_0 q(x_0, ..., x_0)``

    with ``A_0`` from :func:`leading_coefficient_closed_form` when ``g`` is
    omitted and a closed form exists, otherwise by
    :func:`leading_coefficient_quadrature`.

    :type spec: :py:class:`SelbergIntegralSpec`
    :param spec: the integral, with a single declared saddle.

    :type g: callable
    :param g: (Optional) the weight in ``g(N^(1/mu)(t - x_0))``.

    :type N: :py:class:`float`
    :param N: the large parameter.

    :rtype: :py:class:`complex`
    """
    phase = spec.phase
    if phase.saddle is None:
        raise fail(DomainError("laplace_one_saddle needs a single declared saddle.", "asymptotics"))
    mu, nu, n = phase.order, spec.vandermonde_power, spec.n
    x0 = phase.saddle
    if g is None and (n == 1 or mu == 2):
        a0 = leading_coefficient_closed_form(
            phase.p0, mu, nu, n, phase.slope, phase.incoming_slope
        )
    else:
        a0 = leading_coefficient_quadrature(
            phase.p0, mu, nu, n, g, phase.slope, phase.incoming_slope, config
        ).value
    q0 = spec.q(*([x0] * n))
    log = -n * N * complex(phase.value(x0)) - ((spec.n_nu + n) / mu) * math.log(N)
    value = _log_scaled(log) * a0 * q0
    _LOGGER.info(f"One-saddle leading term: [x0={x0}] [mu={mu}] [N={N}] [A0={a0}] [value={value}]")
    return value


def laplace_two_saddle(spec, N=1.0):
    """Leading term at two simple saddles ``x_plus, x_minus`` with equal
    ``Re p``. With ``r_pm = p''(x_pm)^(1/2)`` on the branch of the declared
    slopes, for ``n = 2m``:

    ``C(2m, m) Gamma_{nu,m}^2 (x_+ - x_-)^(nu m^2) (r_+ r_-)^(-e)
    e^(-m N (p(x_+) + p(x_-))) N^(-e) q(x_+^m, x_-^m)``, ``e = m + nu m(m-1)/2``;

    and for ``n = 2m - 1`` the two terms in which one of the saddles carries
    ``m - 1`` variables.

    :raises DomainError: when ``Re p(x_+)`` and ``Re p(x_-)`` differ by more
        than ``1e-10``.

    :rtype: :py:class:`complex`
    """
    phase = spec.phase
    if phase.saddles is None:
        raise fail(DomainError("laplace_two_saddle needs two declared saddles.", "asymptotics"))
    nu, n = spec.vandermonde_power, spec.n
    plus, minus = phase.saddles
    p_plus, p_minus = (complex(phase.value(x)) for x in (plus, minus))
    if abs(p_plus.real - p_minus.real) > SADDLE_TOL:
        raise fail(
            DomainError(
                f"Re p differs at the saddles: [{p_plus.real}] [{p_minus.real}]",
                "asymptotics",
            )
        )
    second = phase.second_derivatives()
    roots = [log_root(v, 2, omega) for v, omega in zip(second, phase.slopes)]
    m = (n + 1) // 2
    e = m + nu * m * (m - 1) / 2
    log_sep = cmath.log(plus - minus)
    log_gamma_m = gamma_beta_n(nu, m).log_value.real
    if n % 2 == 0:
        log = math.log(scipy.special.comb(n, m, exact=True)) + 2 * log_gamma_m
        log += nu * m * m * log_sep - e * (roots[0] + roots[1])
        log += -m * N * (p_plus + p_minus) - e * math.log(N)
        value = _log_scaled(log) * spec.q(*([plus] * m + [minus] * m))
    else:
        log = math.log(scipy.special.comb(n, m, exact=True))
        log += gamma_beta_n(nu, m - 1).log_value.real + log_gamma_m
        log += nu * m * (m - 1) * log_sep - e * (roots[0] + roots[1])
        log += -m * N * (p_plus + p_minus) - ((2 * m - 1 + nu * (m - 1) ** 2) / 2) * math.log(N)
        power = 1 + nu * (m - 1)
        first = _log_scaled(N * p_plus + power * roots[0]) * spec.q(*([plus] * (m - 1) + [minus] * m))
        other = _log_scaled(N * p_minus + power * roots[1]) * spec.q(*([plus] * m + [minus] * (m - 1)))
        value = _log_scaled(log) * (first + other)
    _LOGGER.info(f"Two-saddle leading term: [n={n}] [N={N}] [value={value}]")
    return value


def _check_nu(nu):
    if not nu > -1:
        raise fail(DomainError(f"nu must exceed -1: {nu}", "asymptotics"))
    if _is_even_integer(nu):
        raise fail(
            DomainError(f"representation degenerate (c_nu = 0) at nu = {nu}", "asymptotics")
        )


def c_nu(nu):
    """``(2/pi) sin(pi nu/2) Gamma(nu + 1)``."""
    _check_nu(nu)
    return 2 / math.pi * math.sin(math.pi * nu / 2) * math.gamma(nu + 1)


def h_nu(nu, r):
    """``H_nu(r) = sum_{j <= [nu/2]} (-r^2)^j/(2j)! - cos r``.

    For ``|r| < 1`` the value is summed as the tail of the cosine series, which
    avoids the cancellation between the polynomial and ``cos r``.

    :rtype: :py:class:`float` or :py:class:`numpy.ndarray`
    """
    _check_nu(nu)
    top = math.floor(nu / 2)
    r = np.asarray(r, dtype=float)
    direct = sum((-(r ** 2)) ** j / math.factorial(2 * j) for j in range(top + 1)) - np.cos(r)
    small = np.zeros_like(r)
    for j in range(top + 1, top + 12):
        small = small - (-1) ** j * r ** (2 * j) / math.factorial(2 * j)
    value = np.where(np.abs(r) < 1.0, small, direct)
    return float(value) if value.ndim == 0 else value


def _cos_tail(nu, x, reach):
    """``int_reach^inf r^(-nu-1) cos(r x) dr`` through the upper incomplete gamma."""
    s = nu + 1
    a = reach * abs(x)
    tail = 1j ** (1 - s) * complex(mpmath.gammainc(1 - s, -1j * a))
    return abs(x) ** nu * tail.real


def abs_power_via_Hnu(nu, x, r_max=None, nodes=4000):
    """``|x|^nu`` rebuilt as ``c_nu int_0^inf r^(-nu-1) H_nu(r x) dr``.

    The integral runs numerically up to ``r_max``, with a tanh-sinh piece at
    the origin and Gauss-Legendre panels after it; the tail beyond ``r_max``
    is added in closed form.

    :type nu: :py:class:`float`
    :param nu: ``nu > -1``, not an even integer.

    :type x: :py:class:`float`
    :param x: the real argument.

    :type r_max: :py:class:`float`
    :param r_max: (Optional) where the numerical part stops; defaults to
        ``200 pi / |x|``.

    :type nodes: :py:class:`int`
    :param nodes: Gauss-Legendre nodes on the oscillatory part.

    :rtype: :py:class:`float`
    """
    _check_nu(nu)
    x = float(x)
    if x == 0.0:
        if nu > 0:
            return 0.0
        raise fail(DomainError(f"|0|^nu diverges for nu = {nu}", "asymptotics"))
    ax = abs(x)
    reach = r_max if r_max is not None else 200 * math.pi / ax
    knee = min(1.0 / ax, reach)

    def integrand(r):
        r = np.real(r)
        return r ** (-nu - 1) * h_nu(nu, r * x)

    head = segment_rule(0.0, knee, 201).integrate(integrand).real
    panels = max(1, nodes // 20)
    body = composite_gauss_legendre(knee, reach, panels).integrate(integrand).real
    top = math.floor(nu / 2)
    tail = sum(
        (-(x ** 2)) ** j / math.factorial(2 * j) * reach ** (2 * j - nu) / (nu - 2 * j)
        for j in range(top + 1)
    )
    tail -= _cos_tail(nu, x, reach)
    value = c_nu(nu) * (head + body + tail)
    _LOGGER.debug(f"|x|^nu via H_nu: [nu={nu}] [x={x}] [r_max={reach:.3f}] [value={value}]")
    return value


def brute_selberg(spec, N, config=None):
    """``I_N`` by adaptive tensor quadrature along ``spec.domain``.

    The integrand is ``exp(-N sum p(t_j)) h(Delta(t)) q(t)`` with
    ``h = Delta^nu`` for even ``nu`` and ``|Delta|^nu`` on a real domain
    otherwise.

    :type spec: :py:class:`SelbergIntegralSpec`
    :param spec: the integral; ``domain`` is required.

    :type N: :py:class:`float`
    :param N: the large parameter.

    :type config: :py:class:`~betacharpoly.special.quadrature.QuadConfig`
    :param config: (Optional) node doubling settings.

    :raises QuadratureError: with the last estimate when the nodes run out.

    :rtype: :py:class:`~betacharpoly.special.quadrature.QuadResult`
    """
    if spec.domain is None:
        raise fail(DomainError("brute_selberg needs spec.domain", "asymptotics"))
    _check_dimension(spec.n)
    vertices = [complex(v) for v in spec.domain]
    real_domain = all(v.imag == 0 for v in vertices)
    analytic = spec.analytic_power()
    if not analytic and not real_domain:
        raise fail(
            UnsupportedError(
                "non-analytic Vandermonde power: brute quadrature needs a real domain",
                "asymptotics",
            )
        )
    p, nu = spec.phase.value, spec.vandermonde_power

    def integrand(*t):
        value = np.exp(-N * sum(p(tj) for tj in t))
        value = value * _vandermonde(t, nu, absolute=not analytic)
        if spec.amplitude is not None:
            value = value * spec.amplitude(*t)
        return value

    result = adaptive_integrate(
        integrand,
        lambda nodes: [polyline_rule(vertices, nodes)] * spec.n,
        config or QuadConfig(nodes=33, max_nodes=1025, rel_tol=1e-9),
        f"Selberg integral at N={N}",
    )
    _LOGGER.info(f"Brute Selberg integral: [n={spec.n}] [N={N}] [value={result.value}] [nodes={result.nodes}]")
    return result


def watson_brute(lam, beta, n, N, q=None, config=None):
    """``int_(0,inf)^n e^(-N sum t) |Delta(t)|^beta t^(lambda-1) q(t) dt`` by
    tensor quadrature on ``[0, L/N]^n``.

    :type q: callable
    :param q: (Optional) smooth amplitude with ``q(0) = a0``, vectorized.

    :rtype: :py:class:`~betacharpoly.special.quadrature.QuadResult`
    """
    lam = [float(v) for v in (lam if np.ndim(lam) else [lam] * n)]
    _check_dimension(n)
    reach = (_LOG_CUTOFF + 4 * (max(lam) + beta * n)) / N

    def integrand(*grids):
        t = [np.real(g) for g in grids]
        value = np.exp(-N * sum(t)) * _vandermonde(t, beta, absolute=True)
        for tj, lj in zip(t, lam):
            value = value * tj ** (lj - 1)
        if q is not None:
            value = value * q(*t)
        return value

    return adaptive_integrate(
        integrand,
        lambda nodes: [segment_rule(0.0, reach, nodes)] * n,
        config or QuadConfig(nodes=33, max_nodes=513, rel_tol=1e-9),
        f"Watson integral at N={N}",
    )


WORKED_CASES = ("watson2", "gauss2", "airy1", "twosaddle2")


def _gauss_spec(N):
    reach = math.sqrt(2 * (_LOG_CUTOFF + 4) / N)
    phase = PhaseFunction(lambda t: t * t / 2, (lambda t: t, lambda t: 1.0 + 0 * t), saddle=0.0)
    return SelbergIntegralSpec(phase, 2, 2.0, domain=(-reach, 0.0, reach))


def _airy_spec(N):
    phase = PhaseFunction(
        lambda t: -1j * (t ** 3 / 3 + t),
        (lambda t: -1j * (t * t + 1), lambda t: -2j * t, lambda t: -2j + 0 * t),
        saddle=1j,
    )
    reach = math.sqrt((_LOG_CUTOFF + 4) / N) + 0.5
    return SelbergIntegralSpec(phase, 1, 0.0, domain=(-reach + 1j, 1j, reach + 1j))


def _two_saddle_spec():
    phase = PhaseFunction(
        lambda t: 1j * (t - t ** 3 / 3),
        (lambda t: 1j * (1 - t * t), lambda t: -2j * t, lambda t: -2j + 0 * t),
        saddles=(1.0, -1.0),
    )
    # out of -1 at -pi/4, through the lower half plane, into 1 from -3pi/4
    domain = (-1 + 2 * cmath.exp(0.75j * math.pi), -1.0, -1j, 1.0, 1 + 2 * cmath.exp(0.25j * math.pi))
    return SelbergIntegralSpec(phase, 2, 2.0, domain=domain)


def worked_case(name, N, config=None):
    """Brute value, leading term and their ratio for one of the worked
    integrals at ``N``:

    - ``watson2``: ``int_(0,inf)^2 e^(-(N+1/10)(u+v)) (u-v)^2``, exactly
      ``2/(N+1/10)^4``, against :func:`watson_leading`.
    - ``gauss2``: Mehta's integral ``int e^(-N|t|^2/2) Delta^2``, against the
      one-saddle term (exact).
    - ``airy1``: ``int e^(iN(t^3/3 + t)) dt = 2 pi N^(-1/3) Ai(N^(2/3))`` at
      the saddle ``i``.
    - ``twosaddle2``: ``int int e^(-iN sum (t - t^3/3)) (t_1 - t_2)^2`` on a
      contour through both saddles ``+-1``.

    :rtype: :py:class:`dict`
    :returns: ``{case, N, brute_re, brute_im, leading_re, leading_im, ratio_re, ratio_im}``.
    """
    if name == "watson2":
        brute = watson_brute(1.0, 2.0, 2, N, q=lambda u, v: np.exp(-(u + v) / 10), config=config).value
        leading = watson_leading(1.0, 2.0, 2).at(N)
    elif name == "gauss2":
        spec = _gauss_spec(N)
        brute = brute_selberg(spec, N, config).value
        leading = laplace_one_saddle(spec, N=N)
    elif name == "airy1":
        spec = _airy_spec(N)
        brute = brute_selberg(spec, N, config).value
        leading = laplace_one_saddle(spec, N=N)
    elif name == "twosaddle2":
        spec = _two_saddle_spec()
        brute = brute_selberg(spec, N, config).value
        leading = laplace_two_saddle(spec, N=N)
    else:
        raise fail(DomainError(f"Unknown worked case: [{name}]", "asymptotics"))
    ratio = complex(brute) / complex(leading)
    _LOGGER.info(f"Worked case: [case={name}] [N={N}] [ratio={ratio}]")
    return {
        "case": name,
        "N": N,
        "brute_re": complex(brute).real,
        "brute_im": complex(brute).imag,
        "leading_re": complex(leading).real,
        "leading_im": complex(leading).imag,
        "ratio_re": ratio.real,
        "ratio_im": ratio.imag,
    }
