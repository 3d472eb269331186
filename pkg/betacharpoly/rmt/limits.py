"""
betacharpoly.rmt.limits
~~~~~~~~~~~~~~~~~~~~~~~

Scaling limits of the weighted expectations ``phi_N`` at the hard edge, in
the bulk and at the soft edge, the maps ``s -> A + B s`` (or
``A (u + s / (rho N))``) that zoom onto each regime, the constants of the
parameter-varying Laguerre and Jacobi ensembles, and a harness that measures
how fast finite-N values approach their limit.

.. code:: python

    from betacharpoly.rmt.ensembles import EnsembleSpec
    from betacharpoly.rmt.limits import convergence_report
    spec = EnsembleSpec("l", 20, 2.0)
    report = convergence_report(spec, "hard", [[1.0]], [20, 40, 80])
    report.fitted_order

Complex coefficients carry N-dependent unit-modulus phases whose branch is
not pinned, so bulk and soft comparisons divide out the best constant phase
across the grid before measuring the error.

"""
import cmath
import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import mpmath
import numpy as np
import scipy.special

from betacharpoly.errors import DomainError
from betacharpoly.errors import UnsupportedError
from betacharpoly.errors import fail
from betacharpoly.rmt.ensembles import expect
from betacharpoly.special.airy import MAX_AIRY_DIMENSION
from betacharpoly.special.airy import AiryQuadSpec
from betacharpoly.special.airy import airy_equal_argument
from betacharpoly.special.airy import airy_infinite
from betacharpoly.special.airy import airy_multivariate
from betacharpoly.special.constants import EnsembleKind
from betacharpoly.special.constants import bulk_density
from betacharpoly.special.constants import coefficient_a_k
from betacharpoly.special.constants import coefficient_b_k
from betacharpoly.special.constants import coefficient_gamma_m
from betacharpoly.special.constants import coefficient_Phi
from betacharpoly.special.constants import coefficient_Psi_even
from betacharpoly.special.constants import coefficient_Psi_odd
from betacharpoly.special.constants import coefficient_xi
from betacharpoly.special.constants import gamma_beta_n
from betacharpoly.symmetric.hyper import HyperSeriesSpec
from betacharpoly.symmetric.hyper import TruncationPolicy
from betacharpoly.symmetric.hyper import eval_E
from betacharpoly.symmetric.hyper import eval_pFq
from betacharpoly.symmetric.hyper import eval_two_set
from betacharpoly.symmetric.hyper import reduce_0F0

_LOGGER = logging.getLogger(__name__)

HARD = "hard"
BULK = "bulk"
SOFT = "soft"
REGIMES = (HARD, BULK, SOFT)
CENTERINGS = ("standard", "refined")

ROUTE_TWO_SET = "two_set"
ROUTE_1F1 = "1F1"

DEFAULT_EXACT_N = (20, 40, 80)
DEFAULT_QUADRATURE_N = (50, 100, 200)
ROUTE_TOL = 1e-9

_ALLOWED = {
    EnsembleKind.HERMITE: (BULK, SOFT),
    EnsembleKind.LAGUERRE: (HARD, BULK, SOFT),
    EnsembleKind.JACOBI: (HARD, BULK),
}


def _check_regime(regime):
    if regime not in REGIMES:
        raise fail(DomainError(f"Unknown regime: [{regime}]", "limits"))
    return regime


def _alpha(beta):
    return math.inf if math.isinf(beta) else beta / 2


def _beta_prime(beta):
    return 0.0 if math.isinf(beta) else 4 / beta


def _is_even(beta):
    return not math.isinf(beta) and abs(beta - 2 * round(beta / 2)) < 1e-12 and beta > 0


@dataclass(frozen=True)
class ScalingMap:
    """The affine change of variables onto one regime.

    Edge regimes send ``s`` to ``A + B s``; the bulk sends ``s`` to
    ``A (u + s / (rho N))``, stored with ``B = A / (rho N)`` and centre
    ``A u``.

    :type A: :py:class:`float`
    :param A: centering (``0`` at the hard edge).

    :type B: :py:class:`float`
    :param B: scale.

    :type rho: :py:class:`float`
    :param rho: bulk density at ``u``; ``None`` at the edges.
    """

    A: float
    B: float
    rho: Optional[float]
    regime: str
    u: Optional[float] = None
    N: int = 1

    @property
    def center(self):
        return self.A * self.u if self.regime == BULK else self.A

    def apply(self, s):
        """The finite-N arguments for the scaled point ``s``.

        :rtype: :py:class:`list` of :py:class:`float`
        """
        return [self.center + self.B * float(v) for v in s]


def scaling_map(spec, regime, u=None, centering="standard"):
    """``(A, B, rho)`` of the given regime at ``spec.N``.

    The Hermite soft edge is centred at ``sqrt(2N)``; rescaled values then
    approach the limit like ``N^(-1/3)``. ``centering='refined'`` centres it
    at ``sqrt(2N + 1)``, which removes that term for ``n = 1`` at every
    ``beta``. Other regimes ignore ``centering``.

    :type spec: :py:class:`~betacharpoly.rmt.ensembles.EnsembleSpec`
    :param spec: the ensemble.

    :type regime: :py:class:`str`
    :param regime: ``'hard'``, ``'bulk'`` or ``'soft'``.

    :type u: (Optional) :py:class:`float`
    :param u: macroscopic location, required in the bulk.

    :type centering: :py:class:`str`
    :param centering: ``'standard'`` or ``'refined'``.

    :raises DomainError: for an unknown centering, the Hermite hard edge, the Jacobi soft edge and a
        bulk point outside the support.

    :rtype: :py:class:`ScalingMap`
    """
    _check_regime(regime)
    if centering not in CENTERINGS:
        raise fail(DomainError(f"Unknown centering: {centering!r}", "limits"))
    kind = spec.kind
    N = spec.N
    if regime not in _ALLOWED[kind]:
        raise fail(
            DomainError(
                f"No {regime} edge scaling for the {kind.name.lower()} ensemble",
                "limits",
                details={"ensemble": kind.name.lower(), "regime": regime},
            )
        )
    if regime == HARD:
        B = 1.0 / N if kind is EnsembleKind.LAGUERRE else 1.0 / N ** 2
        return ScalingMap(0.0, B, None, HARD, None, N)
    if regime == SOFT:
        if kind is EnsembleKind.HERMITE:
            A = math.sqrt(2 * N + 1) if centering == "refined" else math.sqrt(2 * N)
            return ScalingMap(A, 2 ** -0.5 * N ** (-1 / 6), None, SOFT, None, N)
        return ScalingMap(4.0 * N, 2 * (2 * N) ** (1 / 3), None, SOFT, None, N)
    if u is None:
        raise fail(DomainError("The bulk scaling needs a location u", "limits"))
    rho = bulk_density(kind, u)
    A = {EnsembleKind.HERMITE: math.sqrt(2 * N), EnsembleKind.LAGUERRE: 4.0 * N}.get(kind, 1.0)
    return ScalingMap(A, A / (rho * N), rho, BULK, float(u), N)


def _symmetrized_exponential(x, y):
    """The two-set ``0F0`` at ``alpha = inf``:
    ``1/n! sum_sigma prod_j exp(x_j y_sigma(j))``."""
    n = len(x)
    total = mpmath.mpc(0)
    for perm in itertools.permutations(range(n)):
        total += mpmath.exp(mpmath.fsum(complex(x[j]) * complex(y[perm[j]]) for j in range(n)))
    return complex(total / math.factorial(n))


def _two_set_0F0(alpha, x, y, truncation=None):
    if math.isinf(alpha):
        return _symmetrized_exponential(x, y)
    spec = HyperSeriesSpec(alpha, (), (), truncation or TruncationPolicy())
    return eval_two_set(spec, x, y).value


def hard_edge_limit(beta, lambda1, n, s, truncation=None):
    """``0F1^(beta/2)((2/beta)(lambda1 + n); -s)``.

    :rtype: :py:class:`complex`
    """
    s = [complex(v) for v in s]
    if len(s) != n:
        raise fail(DomainError(f"Expected {n} arguments, got {len(s)}", "limits"))
    if not lambda1 > -1:
        raise fail(DomainError(f"lambda1 must exceed -1: {lambda1}", "limits"))
    spec = HyperSeriesSpec(
        beta / 2, (), ((2 / beta) * (lambda1 + n),), truncation or TruncationPolicy()
    )
    return eval_pFq(spec, [-v for v in s]).value


def bulk_limit_even(beta, m, s, route=ROUTE_TWO_SET, check_routes=False, truncation=None):
    """``gamma_m(4/beta) 0F0^(beta/2)(i pi s; 1^m, (-1)^m)``, equal to
    ``gamma_m(4/beta) exp(-i pi p_1(s)) 1F1^(beta/2)(2m/beta; 2n/beta; 2 i pi s)``.

    At ``beta = inf`` the two-set series is the symmetrized exponential and
    the value is ``C(2m, m)`` times it; for ``m = 1`` that is
    ``2 cos(pi (s_1 - s_2))``.

    :type route: :py:class:`str`
    :param route: ``'two_set'`` (default) or ``'1F1'``.

    :type check_routes: :py:class:`bool`
    :param check_routes: evaluate both routes and log a warning when they
        differ by more than ``1e-9`` relative.

    :rtype: :py:class:`complex`
    """
    s = [float(v) for v in s]
    n = 2 * m
    if len(s) != n:
        raise fail(DomainError(f"Expected {n} = 2m arguments, got {len(s)}", "limits"))
    if route not in (ROUTE_TWO_SET, ROUTE_1F1):
        raise fail(DomainError(f"Unknown bulk route: [{route}]", "limits"))
    alpha = _alpha(beta)
    gamma = coefficient_gamma_m(_beta_prime(beta), m).value.real
    x = [1j * math.pi * v for v in s]

    def two_set():
        return _two_set_0F0(alpha, x, [1.0] * m + [-1.0] * m, truncation)

    def confluent():
        if math.isinf(alpha):
            raise fail(UnsupportedError("The 1F1 route degenerates at beta = inf", "limits"))
        return reduce_0F0(x, 1.0, -1.0, m, n, alpha, truncation).value

    value = two_set() if route == ROUTE_TWO_SET else confluent()
    if check_routes and not math.isinf(alpha):
        other = confluent() if route == ROUTE_TWO_SET else two_set()
        gap = abs(value - other) / max(abs(value), 1e-300)
        if gap > ROUTE_TOL:
            _LOGGER.warning(
                f"Bulk routes disagree: [beta={beta}] [m={m}] [two_set vs 1F1 gap={gap:.3e}]"
            )
    return gamma * value


def _airy_value(beta, s, airy_spec=None):
    n = len(s)
    if n == 1:
        return float(scipy.special.airy(s[0])[0])
    if math.isinf(beta):
        return airy_infinite(s)
    if abs(beta - 2) < 1e-12 and max(s) == min(s):
        return airy_equal_argument(n, s[0])
    if n > MAX_AIRY_DIMENSION:
        raise fail(
            UnsupportedError(
                f"Multivariate Airy quadrature supports n <= {MAX_AIRY_DIMENSION}, got {n}",
                "limits",
            )
        )
    spec = airy_spec or AiryQuadSpec(alpha=beta / 2, n=n)
    return airy_multivariate(spec, s).value


def soft_edge_limit(beta, n, s, airy_spec=None):
    """``(2 pi)^n / Gamma_{4/beta,n} Ai^(beta/2)(s)``.

    ``n = 1`` uses the classical Airy function, ``beta = inf`` the product
    of classical values, and ``beta = 2`` with equal arguments the Hankel
    determinant of Airy derivatives; everything else goes through
    :func:`~betacharpoly.special.airy.airy_multivariate`.

    :rtype: :py:class:`float`
    """
    s = [float(v) for v in s]
    if len(s) != n:
        raise fail(DomainError(f"Expected {n} arguments, got {len(s)}", "limits"))
    log = n * math.log(2 * math.pi) - gamma_beta_n(_beta_prime(beta), n).log_value.real
    return math.exp(log) * _airy_value(beta, s, airy_spec)


def bulk_kernel_odd(beta, m, s, t, truncation=None):
    """``(1/2i) (E_{m-1}(i pi s) E_{m-1}(-i pi t) - E_{m-1}(i pi t) E_{m-1}(-i pi s))``
    in ``n = 2m - 1`` variables; ``sin(pi (s_1 - t_1))`` when ``m = 1``.

    :rtype: :py:class:`complex`
    """
    n = 2 * m - 1
    s = [float(v) for v in s]
    t = [float(v) for v in t]
    if len(s) != n or len(t) != n:
        raise fail(
            DomainError(f"Expected two points of dimension {n}, got {len(s)} and {len(t)}", "limits")
        )
    alpha = _alpha(beta)
    y = [-1.0] * (m - 1) + [1.0] * m

    def E(point, sign):
        x = [sign * 1j * math.pi * v for v in point]
        if math.isinf(alpha):
            return _symmetrized_exponential(x, y)
        return eval_E(m - 1, alpha, x, n, truncation)

    return (E(s, 1) * E(t, -1) - E(t, 1) * E(s, -1)) / 2j


def _vandermonde_abs(x, power):
    value = 1.0
    for i in range(len(x)):
        for j in range(i + 1, len(x)):
            value *= abs(x[i] - x[j]) ** power
    return value


def correlation_limit(regime, beta, k, x, airy_spec=None, truncation=None):
    """Limiting ``k``-point correlation with ``n = beta k`` characteristic
    polynomials, ``s`` holding each ``x_i`` repeated ``beta`` times.

    soft: ``a_k(beta) |Delta(x)|^beta Ai^(beta/2)(s)``.
    bulk: ``b_k(beta) |Delta(2 pi x)|^beta 0F0^(beta/2)(i pi s; 1^m, (-1)^m)``
    with ``2m = n``.

    :raises DomainError: for odd or non-integer ``beta``.
    :raises UnsupportedError: when the soft-edge Airy function cannot be
        evaluated in ``beta k`` variables.

    :rtype: :py:class:`float`
    """
    if regime not in (BULK, SOFT):
        raise fail(DomainError(f"Correlation limits exist for bulk and soft only: [{regime}]", "limits"))
    if not _is_even(beta):
        raise fail(DomainError(f"correlation requires even beta, got {beta}", "limits"))
    x = [float(v) for v in x]
    if len(x) != k:
        raise fail(DomainError(f"Expected {k} points, got {len(x)}", "limits"))
    reps = int(round(beta))
    s = [v for v in x for _ in range(reps)]
    n = len(s)
    if regime == SOFT:
        value = coefficient_a_k(beta, k).value.real * _vandermonde_abs(x, beta)
        return value * _airy_value(beta, s, airy_spec)
    m = n // 2
    inner = _two_set_0F0(
        _alpha(beta), [1j * math.pi * v for v in s], [1.0] * m + [-1.0] * m, truncation
    )
    value = coefficient_b_k(beta, k).value.real * _vandermonde_abs([2 * math.pi * v for v in x], beta)
    return value * inner.real


@dataclass(frozen=True)
class VaryingConstants:
    """Constants of the Laguerre (``N_1 / N -> gamma1``) and Jacobi
    (``N_j / N -> gamma_j``) ensembles with proportionally growing parameters.

    ``x_l``, ``x_r``, ``g_minus`` and ``g_plus`` belong to the Jacobi phase
    function and are ``None`` when ``gamma1 = 1`` (no soft left edge).
    """

    gamma1: float
    gamma2: float
    Lambda_minus: float
    Lambda_plus: float
    b_minus: float
    b_plus: float
    laguerre_x_l: Optional[float]
    laguerre_x_r: float
    x_l: Optional[float]
    x_r: Optional[float]
    g_minus: Optional[float]
    g_plus: Optional[float]

    def rho_laguerre(self, u):
        """``2/(pi u) sqrt((u - Lambda_-)(Lambda_+ - u))`` on ``(Lambda_-, Lambda_+)``."""
        if not self.Lambda_minus < u < self.Lambda_plus:
            raise fail(DomainError(f"u outside (Lambda_-, Lambda_+): {u}", "limits"))
        return 2 / (math.pi * u) * math.sqrt((u - self.Lambda_minus) * (self.Lambda_plus - u))

    def rho_jacobi(self, u):
        """``(gamma1 + gamma2)/(2 pi u (1-u)) sqrt((u - b_-)(b_+ - u))`` on ``(b_-, b_+)``."""
        if not self.b_minus < u < self.b_plus:
            raise fail(DomainError(f"u outside (b_-, b_+): {u}", "limits"))
        scale = (self.gamma1 + self.gamma2) / (2 * math.pi * u * (1 - u))
        return scale * math.sqrt((u - self.b_minus) * (self.b_plus - u))

    def laguerre_phase_derivative(self, x, u):
        """``p'(x) = 1/x + gamma1/(1-x) - 4u``."""
        return 1 / x + self.gamma1 / (1 - x) - 4 * u

    def jacobi_phase_derivative(self, x, u):
        """``p'(x) = gamma2/x + (gamma1+gamma2-1)/(1-x) - u/(1-u+ux)``."""
        c = self.gamma1 + self.gamma2 - 1
        return self.gamma2 / x + c / (1 - x) - u / (1 - u + u * x)

    def laguerre_saddles(self, u):
        """The conjugate pair ``x_+, x_-`` solving ``p'(x) = 0`` at ``u``.

        :rtype: :py:class:`tuple` of :py:class:`complex`
        """
        if not u > 0:
            raise fail(DomainError(f"u must be positive: {u}", "limits"))
        root = cmath.sqrt(16 * (u - self.Lambda_minus) * (u - self.Lambda_plus))
        centre = 4 * u + 1 - self.gamma1
        return (centre + root) / (8 * u), (centre - root) / (8 * u)

    def jacobi_saddles(self, u):
        """The pair ``x_+, x_-`` solving the Jacobi ``p'(x) = 0`` at ``u``.

        :rtype: :py:class:`tuple` of :py:class:`complex`
        """
        if not 0 < u < 1:
            raise fail(DomainError(f"u must lie in (0, 1): {u}", "limits"))
        g1, g2 = self.gamma1, self.gamma2
        root = cmath.sqrt((g1 + g2) ** 2 * (u - self.b_minus) * (u - self.b_plus))
        centre = (g1 - g2) * u + 1 - g1
        return (centre + root) / (2 * g1 * u), (centre - root) / (2 * g1 * u)

    def soft_scaling(self, kind, N):
        """Left soft-edge ``(A, B)``: ``4 N Lambda_-`` and
        ``-(sqrt(gamma1) - 1)^(4/3) gamma1^(-1/6) N^(1/3)`` (Laguerre), or
        ``b_-`` and ``N^(-2/3) g_-`` (Jacobi).

        :rtype: :py:class:`ScalingMap`
        """
        kind = EnsembleKind.parse(kind)
        if self.gamma1 <= 1:
            raise fail(DomainError("The left edge is soft only for gamma1 > 1", "limits"))
        if kind is EnsembleKind.LAGUERRE:
            root = math.sqrt(self.gamma1)
            B = -((root - 1) ** (4 / 3)) * self.gamma1 ** (-1 / 6) * N ** (1 / 3)
            return ScalingMap(4 * N * self.Lambda_minus, B, None, SOFT, None, N)
        if kind is EnsembleKind.JACOBI:
            if self.g_minus is None:
                raise fail(DomainError("The Jacobi left edge scale needs gamma2 > 1", "limits"))
            return ScalingMap(self.b_minus, N ** (-2 / 3) * self.g_minus, None, SOFT, None, N)
        raise fail(DomainError("Parameter-varying scalings exist for Laguerre and Jacobi only", "limits"))


def _jacobi_third_derivative(x, u, gamma1, gamma2):
    c = gamma1 + gamma2 - 1
    return 2 * gamma2 / x ** 3 + 2 * c / (1 - x) ** 3 - 2 * u ** 3 / (1 - u + u * x) ** 3


def _edge_scale(x, b, gamma1, gamma2):
    third = _jacobi_third_derivative(x, b, gamma1, gamma2)
    return (1 - b + b * x) ** 2 * float(np.cbrt(third / 2))


def parameter_varying_constants(gamma1, gamma2=1.0):
    """``Lambda_pm``, ``b_pm``, the double saddles at the spectrum edges and
    the Jacobi soft-edge scales ``g_pm`` (real cube root of ``p'''/2``).

    The Laguerre ``x_l`` needs ``gamma1 > 1``; the Jacobi ``x_l``, ``x_r``
    and ``g_pm`` need both ratios above 1. Missing values are ``None``.

    :type gamma1: :py:class:`float`
    :param gamma1: limit of ``N_1 / N``, at least 1.

    :type gamma2: :py:class:`float`
    :param gamma2: limit of ``N_2 / N``, at least 1 (Jacobi only).

    :rtype: :py:class:`VaryingConstants`
    """
    if not (gamma1 >= 1 and gamma2 >= 1):
        raise fail(DomainError(f"gamma1, gamma2 must be >= 1: {gamma1}, {gamma2}", "limits"))
    root1 = math.sqrt(gamma1)
    Lambda_minus = ((1 - root1) / 2) ** 2
    Lambda_plus = ((1 + root1) / 2) ** 2
    total = gamma1 + gamma2
    head = math.sqrt(gamma1 * (total - 1))
    b_minus = ((head - math.sqrt(gamma2)) / total) ** 2
    b_plus = ((head + math.sqrt(gamma2)) / total) ** 2
    laguerre_x_r = 1 / (1 + root1)
    laguerre_x_l = 1 / (1 - root1) if gamma1 > 1 else None
    if gamma1 > 1 and gamma2 > 1:
        lead = math.sqrt(gamma2 / gamma1)
        x_l = lead * (math.sqrt(gamma1 * gamma2) + math.sqrt(total - 1)) / (1 - gamma1)
        x_r = lead * (math.sqrt(gamma1 * gamma2) - math.sqrt(total - 1)) / (1 - gamma1)
        g_minus = _edge_scale(x_l, b_minus, gamma1, gamma2)
        g_plus = _edge_scale(x_r, b_plus, gamma1, gamma2)
    else:
        x_l = x_r = g_minus = g_plus = None
    _LOGGER.debug(
        f"Varying constants: [gamma1={gamma1}] [gamma2={gamma2}] "
        f"[Lambda=({Lambda_minus}, {Lambda_plus})] [b=({b_minus}, {b_plus})]"
    )
    return VaryingConstants(
        float(gamma1),
        float(gamma2),
        Lambda_minus,
        Lambda_plus,
        b_minus,
        b_plus,
        laguerre_x_l,
        laguerre_x_r,
        x_l,
        x_r,
        g_minus,
        g_plus,
    )


@dataclass(frozen=True)
class ConvergenceReport:
    """Finite-N values rescaled onto a limit, one row per ``N``.

    :type rescaled: :py:class:`tuple`
    :param rescaled: per ``N``, the rescaled values at each grid point.

    :type limits: :py:class:`tuple`
    :param limits: the limit at each grid point.

    :type rel_errors: :py:class:`tuple`
    :param rel_errors: per ``N``, the largest relative error over the grid
        after phase alignment.

    :type fitted_order: :py:class:`float`
    :param fitted_order: least-squares slope of ``log rel_error`` against
        ``log N``; ``nan`` with fewer than two nonzero errors.
    """

    regime: str
    N_values: tuple
    points: tuple
    rescaled: tuple
    limits: tuple
    rel_errors: tuple
    point_errors: tuple
    phases: tuple
    fitted_order: float
    fit_residual: float

    @property
    def limit(self):
        return self.limits[0]

    def rows(self):
        """One record per ``(N, point)``, in order.

        :rtype: :py:class:`list` of :py:class:`dict`
        """
        rows = []
        for N, values, errors in zip(self.N_values, self.rescaled, self.point_errors):
            for index, (value, error) in enumerate(zip(values, errors)):
                rows.append(
                    {
                        "N": N,
                        "point": index,
                        "rescaled_re": value.real,
                        "rescaled_im": value.imag,
                        "rel_error": error,
                    }
                )
        return rows


def _aligned_errors(values, limits, align_phase):
    """Relative errors after rotating ``values`` by
    ``-arg(sum values * conj(limits))``."""
    theta = 0.0
    if align_phase:
        overlap = sum(v * l.conjugate() for v, l in zip(values, limits))
        theta = cmath.phase(overlap) if overlap else 0.0
    rotation = cmath.exp(-1j * theta)
    errors = tuple(
        abs(v * rotation - l) / abs(l) if l else abs(v * rotation) for v, l in zip(values, limits)
    )
    return theta, errors


def fit_order(N_values, errors):
    """Slope and RMS residual of the least-squares line through
    ``(log N, log error)``; ``(nan, nan)`` when it is undefined."""
    pairs = [(math.log(N), math.log(e)) for N, e in zip(N_values, errors) if e > 0]
    if len(pairs) < 2:
        return math.nan, math.nan
    x, y = np.array(pairs).T
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return float(slope), residual


def _grid(points, n=None):
    points = [[float(v) for v in p] for p in points]
    if not points:
        raise fail(DomainError("The s-grid is empty", "limits"))
    dims = {len(p) for p in points}
    if len(dims) != 1 or (n is not None and dims != {n}):
        raise fail(DomainError(f"Every grid point needs dimension {n or dims}", "limits"))
    return points


def _limit_values(spec, regime, points, airy_spec, truncation):
    n = len(points[0])
    if regime == HARD:
        return tuple(complex(hard_edge_limit(spec.beta, spec.lambda1, n, p, truncation)) for p in points)
    if regime == SOFT:
        return tuple(complex(soft_edge_limit(spec.beta, n, p, airy_spec)) for p in points)
    if n % 2:
        raise fail(
            DomainError("Odd n in the bulk has no single limit; use kernel_convergence", "limits")
        )
    return tuple(complex(bulk_limit_even(spec.beta, n // 2, p, truncation=truncation)) for p in points)


def _coefficient(spec, regime, n, smap):
    kind, N, beta = spec.kind, spec.N, spec.beta
    if regime == HARD:
        return coefficient_xi(kind, N, n, beta, spec.lambda1, spec.lambda2)
    if regime == SOFT:
        return coefficient_Phi(kind, N, n, beta, spec.lambda1)
    return coefficient_Psi_even(kind, N, n // 2, beta, smap.rho, spec.lambda1, spec.lambda2)


def _rescaled_row(spec, regime, u, points, options, centering):
    n = len(points[0])
    smap = scaling_map(spec, regime, u, centering)
    coefficient = _coefficient(spec, regime, n, smap).mp_value
    values = []
    for p in points:
        result = expect(spec, smap.apply(p), **options)
        finite = result.mp_K if regime == HARD else result.mp_phi
        values.append(complex(finite / coefficient))
    _LOGGER.info(f"Rescaled row: [regime={regime}] [N={spec.N}] [points={len(points)}]")
    return tuple(values)


def _expect_options(method, precision, quad, draws, seed):
    return {"method": method, "precision": precision, "quad": quad, "draws": draws, "seed": seed}


def _rows(N_list, task, workers):
    N_list = [int(N) for N in N_list]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return N_list, list(pool.map(task, N_list))
    return N_list, [task(N) for N in N_list]


def convergence_report(
    spec,
    regime,
    points,
    N_list=None,
    u=None,
    method="auto",
    align_phase=None,
    precision=None,
    quad=None,
    draws=100000,
    seed=0,
    airy_spec=None,
    truncation=None,
    workers=1,
    centering="standard",
):
    """Compares rescaled finite-N values with the regime's limit.

    The rescaled value is ``K_N(B s) / xi`` at the hard edge,
    ``phi_N(A + B s) / Phi`` at the soft edge and
    ``phi_N(A (u + s/(rho N))) / Psi`` in the bulk.

    :type spec: :py:class:`~betacharpoly.rmt.ensembles.EnsembleSpec`
    :param spec: the ensemble; ``spec.N`` is replaced by each entry of
        ``N_list``.

    :type points: sequence of sequences of :py:class:`float`
    :param points: the s-grid, each point of dimension ``n``.

    :type N_list: (Optional) sequence of :py:class:`int`
    :param N_list: defaults to ``(20, 40, 80)`` for series routes and
        ``(50, 100, 200)`` otherwise.

    :type align_phase: (Optional) :py:class:`bool`
    :param align_phase: divide out a constant phase per ``N``; defaults to
        ``True`` except at the hard edge.

    :type centering: :py:class:`str`
    :param centering: passed to :func:`scaling_map`.

    :rtype: :py:class:`ConvergenceReport`
    """
    _check_regime(regime)
    points = _grid(points)
    if N_list is None:
        exact = spec.kind is not EnsembleKind.HERMITE and method in ("auto", "exact_series")
        N_list = DEFAULT_EXACT_N if exact else DEFAULT_QUADRATURE_N
    if align_phase is None:
        align_phase = regime != HARD
    scaling_map(spec, regime, u, centering)
    limits = _limit_values(spec, regime, points, airy_spec, truncation)
    options = _expect_options(method, precision, quad, draws, seed)

    def task(N):
        return _rescaled_row(spec.with_N(N), regime, u, points, options, centering)

    N_values, rescaled = _rows(N_list, task, workers)
    phases, point_errors = [], []
    for values in rescaled:
        theta, errors = _aligned_errors(values, limits, align_phase)
        phases.append(theta)
        point_errors.append(errors)
    rel_errors = tuple(max(e) for e in point_errors)
    order, residual = fit_order(N_values, rel_errors)
    _LOGGER.info(
        f"Convergence report: [ensemble={spec.kind.name.lower()}] [regime={regime}] "
        f"[errors={[f'{e:.3e}' for e in rel_errors]}] [order={order:.3f}]"
    )
    return ConvergenceReport(
        regime,
        tuple(N_values),
        tuple(tuple(p) for p in points),
        tuple(rescaled),
        limits,
        rel_errors,
        tuple(point_errors),
        tuple(phases),
        order,
        residual,
    )


def kernel_convergence(
    spec,
    m,
    pairs,
    N_list,
    u,
    method="auto",
    precision=None,
    quad=None,
    draws=100000,
    seed=0,
    truncation=None,
    workers=1,
):
    """The odd bulk combination
    ``(phi_N(x_s) phi_{N-1}(x_t) - phi_N(x_t) phi_{N-1}(x_s)) / (Psi^(0) Psi^(1))``
    with ``x_s = A (u + s/(rho N))``, compared with :func:`bulk_kernel_odd`
    after phase alignment over the ``(s, t)`` grid.

    :type pairs: sequence of ``(s, t)``
    :param pairs: points of dimension ``2m - 1`` each.

    :rtype: :py:class:`ConvergenceReport`
    """
    n = 2 * m - 1
    pairs = [(_grid([s], n)[0], _grid([t], n)[0]) for s, t in pairs]
    limits = tuple(complex(bulk_kernel_odd(spec.beta, m, s, t, truncation)) for s, t in pairs)
    options = _expect_options(method, precision, quad, draws, seed)

    def task(N):
        current = spec.with_N(N)
        previous = spec.with_N(N - 1)
        smap = scaling_map(current, BULK, u)
        psi0 = coefficient_Psi_odd(
            spec.kind, N, m, 0, spec.beta, smap.rho, u, spec.lambda1, spec.lambda2
        ).mp_value
        psi1 = coefficient_Psi_odd(
            spec.kind, N, m, 1, spec.beta, smap.rho, u, spec.lambda1, spec.lambda2
        ).mp_value
        values = []
        for s, t in pairs:
            xs, xt = smap.apply(s), smap.apply(t)
            a = expect(current, xs, **options).mp_phi * expect(previous, xt, **options).mp_phi
            b = expect(current, xt, **options).mp_phi * expect(previous, xs, **options).mp_phi
            values.append(complex((a - b) / (psi0 * psi1)))
        _LOGGER.info(f"Kernel row: [N={N}] [pairs={len(pairs)}]")
        return tuple(values)

    if any(int(N) < 2 for N in N_list):
        raise fail(DomainError("kernel_convergence needs N >= 2", "limits"))
    N_values, rescaled = _rows(N_list, task, workers)
    phases, point_errors = [], []
    for values in rescaled:
        theta, errors = _aligned_errors(values, limits, True)
        phases.append(theta)
        point_errors.append(errors)
    rel_errors = tuple(max(e) for e in point_errors)
    order, residual = fit_order(N_values, rel_errors)
    return ConvergenceReport(
        BULK,
        tuple(N_values),
        tuple(tuple(s) + tuple(t) for s, t in pairs),
        tuple(rescaled),
        limits,
        rel_errors,
        tuple(point_errors),
        tuple(phases),
        order,
        residual,
    )
