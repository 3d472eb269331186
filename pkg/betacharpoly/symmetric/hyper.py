"""
betacharpoly.symmetric.hyper
~~~~~~~~~~~~~~~~~~~~~~~~~~~~

Multivariate hypergeometric series in Jack polynomials, in one set of
variables (``pFq``) and in two sets (the two-set series ``pFq(x; y)``), plus
the exponential-type functions ``E_j`` and the reduction of a two-set
``0F0`` with two distinct second-set values to a one-set ``1F1``.

Series are summed shell by shell (all partitions of one weight together) with
compensated summation. Terminating series, those with an upper parameter equal
to ``-N``, are summed over the whole ``n x N`` box. When cancellation is
expected (a terminating parameter larger than 40 in modulus, or many digits
lost in a double precision pass), summation moves to mpmath at a working
precision chosen from the observed loss.

.. code:: python

    from betacharpoly.symmetric.hyper import HyperSeriesSpec, eval_pFq
    spec = HyperSeriesSpec(alpha=2.0, upper=(-3,), lower=(1.5,))
    eval_pFq(spec, [0.2, -0.4]).value

"""
import functools
import logging
import math
from dataclasses import dataclass
from dataclasses import field

import mpmath
import numpy as np
import scipy.special

from betacharpoly.errors import DomainError
from betacharpoly.errors import TruncationNotConvergedError
from betacharpoly.errors import fail
from betacharpoly.symmetric.jack import MonomialTable
from betacharpoly.symmetric.jack import jack_at_ones
from betacharpoly.symmetric.jack import jack_derivatives
from betacharpoly.symmetric.jack import jack_expansion
from betacharpoly.symmetric.partitions import enumerate_partitions
from betacharpoly.symmetric.partitions import gen_pochhammer
from betacharpoly.symmetric.partitions import hook_product

_LOGGER = logging.getLogger(__name__)

AUTO_EXTENDED_THRESHOLD = 40
DOUBLE_LOSS_LIMIT = 8.0
MAX_DPS = 600
_INTEGER_TOL = 1e-12


@dataclass(frozen=True)
class TruncationPolicy:
    """When to stop summing a non-terminating series.

    :type max_weight: :py:class:`int`
    :param max_weight: largest partition weight included.

    :type rel_tol: :py:class:`float`
    :param rel_tol: stop once two consecutive shells are each below
        ``rel_tol * |value|``.

    :type require_convergence: :py:class:`bool`
    :param require_convergence: raise
        :py:class:`~betacharpoly.errors.TruncationNotConvergedError` when
        ``max_weight`` is reached first.
    """

    max_weight: int = 60
    rel_tol: float = 1e-14
    require_convergence: bool = True

    def __post_init__(self):
        if self.max_weight < 1:
            raise fail(DomainError(f"max_weight must be >= 1: {self.max_weight}", "hyper"))
        if not self.rel_tol > 0:
            raise fail(DomainError(f"rel_tol must be positive: {self.rel_tol}", "hyper"))


@dataclass(frozen=True)
class PrecisionPolicy:
    """Arithmetic used for summation.

    ``extended=None`` lets the evaluator decide; ``True`` forces mpmath at
    ``dps`` digits (raised adaptively when ``adaptive``), ``False`` forces
    double precision.
    """

    extended: bool = None
    dps: int = 32
    adaptive: bool = True


@dataclass(frozen=True)
class HyperSeriesSpec:
    alpha: float
    upper: tuple = ()
    lower: tuple = ()
    truncation: TruncationPolicy = field(default_factory=TruncationPolicy)
    precision: PrecisionPolicy = field(default_factory=PrecisionPolicy)

    def __post_init__(self):
        if not self.alpha > 0:
            raise fail(DomainError(f"alpha must be positive, got {self.alpha}", "hyper"))
        object.__setattr__(self, "upper", tuple(complex(a) for a in self.upper))
        object.__setattr__(self, "lower", tuple(complex(b) for b in self.lower))

    @property
    def p(self):
        return len(self.upper)

    @property
    def q(self):
        return len(self.lower)

    def terminating_degree(self):
        """``N`` if an upper parameter equals ``-N`` for a nonnegative
        integer ``N`` (the smallest such), else ``None``."""
        found = None
        for a in self.upper:
            if abs(a.imag) < _INTEGER_TOL and a.real < _INTEGER_TOL:
                k = round(-a.real)
                if abs(a.real + k) < _INTEGER_TOL:
                    found = k if found is None else min(found, k)
        return found

    def validate(self, n):
        """Rejects lower parameters ``b`` with ``(i-1)/alpha - b`` a nonnegative
        integer for some ``i <= n``."""
        for b in self.lower:
            for i in range(1, n + 1):
                d = (i - 1) / self.alpha - b
                if abs(d.imag) < _INTEGER_TOL and d.real > -_INTEGER_TOL:
                    if abs(d.real - round(d.real)) < _INTEGER_TOL:
                        raise fail(
                            DomainError(
                                f"Lower parameter {b} hits a pole at row {i} "
                                f"(alpha={self.alpha}, n={n}).",
                                "hyper",
                                details={"lower": str(b), "row": i},
                            )
                        )

    def with_policy(self, truncation=None, precision=None):
        return HyperSeriesSpec(
            self.alpha,
            self.upper,
            self.lower,
            truncation or self.truncation,
            precision or self.precision,
        )


@dataclass(frozen=True)
class SeriesValue:
    """Result of a series evaluation.

    ``value`` is always a Python complex; ``mp_value`` keeps the mpmath result
    when the extended path was used.
    """

    value: complex
    last_shell: float
    terminated: bool
    weight_used: int
    extended: bool = False
    dps: int = None
    lost_digits: float = 0.0
    mp_value: object = None

    @property
    def exact(self):
        return self.mp_value if self.mp_value is not None else mpmath.mpc(self.value)


def _coefficient(spec, kappa, num, real):
    """``[a_1]...[a_p] / ([b_1]...[b_q] h_kappa)`` in the working field."""
    alpha = real(spec.alpha) if not math.isinf(spec.alpha) else spec.alpha
    top = 1
    for a in spec.upper:
        top = top * gen_pochhammer(num(a), kappa, alpha)
        if not top:
            return top
    bottom = hook_product(kappa, alpha)
    for b in spec.lower:
        bottom = bottom * gen_pochhammer(num(b), kappa, alpha)
    return top / bottom


@functools.lru_cache(maxsize=200000)
def _cached_coefficient(alpha, upper, lower, kappa, dps):
    spec = HyperSeriesSpec(alpha, upper, lower)
    if dps:
        with mpmath.workdps(dps):
            return mpmath.mpc(_coefficient(spec, kappa, mpmath.mpc, mpmath.mpf))
    return complex(_coefficient(spec, kappa, complex, float))


def series_coefficient(spec, kappa, dps=None):
    return _cached_coefficient(spec.alpha, spec.upper, spec.lower, kappa, dps)


def _shell_partitions(spec, weight, n):
    degree = spec.terminating_degree()
    return enumerate_partitions(weight, n, degree)


def _weight_bound(spec, n):
    degree = spec.terminating_degree()
    if degree is None:
        return spec.truncation.max_weight, False
    return n * degree, True


def _wants_extended(spec):
    if spec.precision.extended is not None:
        return spec.precision.extended
    degree = spec.terminating_degree()
    return degree is not None and degree > AUTO_EXTENDED_THRESHOLD


def _check_domain(spec, x, y=None):
    spec.validate(len(x))
    if spec.p == spec.q + 1 and spec.terminating_degree() is None:
        norm = max((abs(complex(v)) for v in x), default=0.0)
        if y is not None:
            norm *= max((abs(complex(v)) for v in y), default=0.0)
        if norm >= 1:
            raise fail(
                DomainError(
                    f"{spec.p}F{spec.q} series requires a point of norm < 1, got {norm}",
                    "hyper",
                )
            )


def _sum(spec, n, term_fn, dps, label):
    """Shell-wise summation. ``term_fn(kappa, dps)`` returns the full summand."""
    bound, terminating = _weight_bound(spec, n)
    policy = spec.truncation
    re_terms, im_terms = [], []
    peak = 0.0
    quiet = 0
    last_shell = 0.0
    weight = 0
    value = 0
    for weight in range(0, bound + 1):
        shell_re, shell_im = [], []
        for kappa in _shell_partitions(spec, weight, n):
            t = term_fn(kappa, dps)
            shell_re.append(t.real)
            shell_im.append(t.imag)
            peak = max(peak, float(abs(t)))
        if dps:
            shell = mpmath.mpc(mpmath.fsum(shell_re), mpmath.fsum(shell_im))
        else:
            shell = complex(math.fsum(shell_re), math.fsum(shell_im))
        re_terms.extend(shell_re)
        im_terms.extend(shell_im)
        if dps:
            value = mpmath.mpc(mpmath.fsum(re_terms), mpmath.fsum(im_terms))
        else:
            value = complex(math.fsum(re_terms), math.fsum(im_terms))
        last_shell = float(abs(shell))
        _LOGGER.debug(f"{label}: [weight={weight}] [shell={last_shell:.3e}]")
        if terminating:
            continue
        if weight >= 1 and last_shell <= policy.rel_tol * float(abs(value)):
            quiet += 1
            if quiet >= 2:
                break
        else:
            quiet = 0
    else:
        if not terminating and policy.require_convergence:
            raise fail(
                TruncationNotConvergedError(
                    f"{label} did not converge by weight {weight} "
                    f"(last shell {last_shell:.3e}).",
                    last_shell,
                    weight,
                )
            )
    magnitude = float(abs(value))
    if peak == 0.0:
        lost = 0.0
    elif magnitude == 0.0:
        lost = math.inf
    else:
        lost = max(0.0, math.log10(peak / magnitude))
    return value, last_shell, terminating, weight, lost


def _evaluate(spec, n, term_fn, label):
    extended = _wants_extended(spec)
    if not extended:
        value, last, terminated, weight, lost = _sum(spec, n, term_fn, None, label)
        if lost <= DOUBLE_LOSS_LIMIT or spec.precision.extended is False:
            return SeriesValue(complex(value), last, terminated, weight, lost_digits=lost)
        _LOGGER.warning(
            f"{label}: [{lost:.1f}] digits lost in double precision, "
            "switching to extended precision."
        )
    dps = spec.precision.dps
    while True:
        with mpmath.workdps(dps):
            value, last, terminated, weight, lost = _sum(spec, n, term_fn, dps, label)
        if not spec.precision.adaptive or lost <= dps - 20 or dps >= MAX_DPS:
            break
        new_dps = min(MAX_DPS, int(math.ceil(lost)) + 30 if math.isfinite(lost) else MAX_DPS)
        if new_dps <= dps:
            break
        _LOGGER.info(f"{label}: [lost={lost:.1f}] raising precision to [{new_dps}] digits")
        dps = new_dps
    return SeriesValue(
        complex(value), last, terminated, weight, True, dps, lost, mpmath.mpc(value)
    )


def _as_field(x, dps):
    if dps:
        return [mpmath.mpmathify(v) for v in x]
    return [complex(v) for v in x]


def eval_pFq(spec, x):
    """Evaluates ``pFq^(alpha)(a; b; x)`` in ``n = len(x)`` variables.

    :type spec: :py:class:`HyperSeriesSpec`
    :param spec: parameters and policies.

    :type x: sequence of :py:class:`complex`
    :param x: the point.

    :rtype: :py:class:`SeriesValue`
    """
    x = list(x)
    n = len(x)
    _check_domain(spec, x)
    tables = {}

    def term(kappa, dps):
        if dps not in tables:
            tables[dps] = MonomialTable(_as_field(x, dps))
        coef = series_coefficient(spec, kappa, dps)
        if not coef:
            return coef
        return coef * tables[dps].jack(jack_expansion(kappa, spec.alpha, n, dps))

    _LOGGER.debug(f"Evaluating {spec.p}F{spec.q}: [alpha={spec.alpha}] [n={n}]")
    return _evaluate(spec, n, term, f"{spec.p}F{spec.q}")


def _at_ones(kappa, alpha, n, dps):
    if dps and not math.isinf(alpha):
        return jack_at_ones(kappa, mpmath.mpf(alpha), n)
    return jack_at_ones(kappa, alpha, n)


def eval_two_set(spec, x, y, n=None):
    """Evaluates the two-set series
    ``sum [a]/([b] h) P_kappa(x) P_kappa(y) / P_kappa(1^n)``.

    :type x: sequence of :py:class:`complex`
    :param x: first set of variables.

    :type y: sequence of :py:class:`complex`
    :param y: second set, same length.

    :type n: (Optional) :py:class:`int`
    :param n: number of variables; defaults to ``len(x)``.

    :rtype: :py:class:`SeriesValue`
    """
    x, y = list(x), list(y)
    n = len(x) if n is None else n
    if len(x) != n or len(y) != n:
        raise fail(
            DomainError(
                f"Two-set series needs dim(x) = dim(y) = n, got {len(x)}, {len(y)}, {n}",
                "hyper",
            )
        )
    _check_domain(spec, x, y)
    tables = {}

    def term(kappa, dps):
        if dps not in tables:
            tables[dps] = (
                MonomialTable(_as_field(x, dps)),
                MonomialTable(_as_field(y, dps)),
            )
        coef = series_coefficient(spec, kappa, dps)
        if not coef:
            return coef
        ones = _at_ones(kappa, spec.alpha, n, dps)
        if not ones:
            raise fail(
                DomainError(
                    f"P_{tuple(kappa)}(1^{n}) vanishes with a nonzero numerator.",
                    "hyper",
                )
            )
        expansion = jack_expansion(kappa, spec.alpha, n, dps)
        tx, ty = tables[dps]
        return coef * tx.jack(expansion) * ty.jack(expansion) / ones

    _LOGGER.debug(f"Evaluating two-set {spec.p}F{spec.q}: [alpha={spec.alpha}] [n={n}]")
    return _evaluate(spec, n, term, f"two-set {spec.p}F{spec.q}")


def eval_E(j, alpha, x, n=None, truncation=None):
    """``E_j^(alpha)(x)``, the two-set ``0F0`` with ``j`` second-set entries equal
    to ``-1`` and ``n - j`` equal to ``1``.

    :rtype: :py:class:`complex`
    """
    x = list(x)
    n = len(x) if n is None else n
    if not 0 <= j <= n:
        raise fail(DomainError(f"E_j needs 0 <= j <= n, got j={j}, n={n}", "hyper"))
    spec = HyperSeriesSpec(alpha, (), (), truncation or TruncationPolicy())
    y = [-1.0] * j + [1.0] * (n - j)
    return eval_two_set(spec, x, y, n).value


def reduce_0F0(x, a, b, k, n, alpha, truncation=None, precision=None):
    """Two-set ``0F0(x; a^k, b^(n-k))`` through
    ``exp(b p_1(x)) 1F1(k/alpha; n/alpha; (a - b) x)``.

    :rtype: :py:class:`SeriesValue`
    """
    x = list(x)
    if not 0 <= k <= n or len(x) != n:
        raise fail(DomainError(f"Need 0 <= k <= n = dim(x), got k={k}, n={n}", "hyper"))
    spec = HyperSeriesSpec(
        alpha,
        (k / alpha,),
        (n / alpha,),
        truncation or TruncationPolicy(),
        precision or PrecisionPolicy(),
    )
    inner = eval_pFq(spec, [(a - b) * complex(v) for v in x])
    prefactor = mpmath.exp(b * mpmath.fsum(complex(v) for v in x))
    exact = prefactor * inner.exact
    return SeriesValue(
        complex(exact),
        inner.last_shell * float(abs(prefactor)),
        inner.terminated,
        inner.weight_used,
        inner.extended,
        inner.dps,
        inner.lost_digits,
        exact if inner.extended else None,
    )


def two_set_grid(alpha, x, grid, max_weight=40, rel_tol=1e-16, upper=(), lower=()):
    """Vectorized two-set series ``pFq(x; y)`` for a fixed point ``x`` and many
    points ``y``, in double precision.

    :type x: sequence of :py:class:`complex`
    :param x: the fixed first set.

    :type grid: sequence of :py:class:`numpy.ndarray`
    :param grid: ``n`` equally shaped arrays, the coordinates of ``y``.

    :type max_weight: :py:class:`int`
    :param max_weight: last shell included.

    :rtype: :py:class:`numpy.ndarray`
    """
    spec = HyperSeriesSpec(alpha, upper, lower)
    n = len(x)
    grid = [np.asarray(g, dtype=complex) for g in grid]
    tx = MonomialTable([complex(v) for v in x])
    ty = MonomialTable(grid)
    value = np.zeros(np.broadcast(*grid).shape, dtype=complex)
    quiet = 0
    for weight in range(0, max_weight + 1):
        shell = np.zeros_like(value)
        for kappa in enumerate_partitions(weight, n):
            coef = series_coefficient(spec, kappa)
            if not coef:
                continue
            expansion = jack_expansion(kappa, alpha, n)
            px = tx.jack(expansion)
            if not px:
                continue
            shell = shell + (coef * px / jack_at_ones(kappa, alpha, n)) * ty.jack(expansion)
        value = value + shell
        size = float(np.max(np.abs(shell))) if shell.size else 0.0
        if weight >= 1 and size <= rel_tol * float(np.max(np.abs(value))):
            quiet += 1
            if quiet >= 2:
                break
        else:
            quiet = 0
    _LOGGER.debug(f"two_set_grid: [alpha={alpha}] [n={n}] [weight={weight}]")
    return value


def two_set_n2_closed_form(alpha, x, y):
    """Closed form of the two-set ``0F0`` in two variables:
    ``exp(p_1(x) p_1(y) / 2) 0F1(1/alpha + 1/2; ((x1-x2)(y1-y2))^2 / 16)``.

    Works elementwise on numpy arrays.
    """
    x1, x2 = (np.asarray(v, dtype=complex) for v in x)
    y1, y2 = (np.asarray(v, dtype=complex) for v in y)
    z = ((x1 - x2) * (y1 - y2)) ** 2 / 16.0
    b = 0.5 if math.isinf(alpha) else 1.0 / alpha + 0.5
    return np.exp((x1 + x2) * (y1 + y2) / 2.0) * scipy.special.hyp0f1(b, z)


def eval_derivatives(spec, x, weight, y=None):
    """Value, gradient and diagonal Hessian in ``x`` of the series truncated
    after shell ``weight``, differentiating each monomial analytically.
    Double precision.

    :type y: (Optional) sequence
    :param y: second set; when given the two-set series is differentiated.

    :rtype: :py:class:`tuple`
    :returns: ``(value, grad, hess)`` with ``grad``/``hess`` lists of length n.
    """
    x = [complex(v) for v in x]
    n = len(x)
    spec.validate(n)
    ty = MonomialTable([complex(v) for v in y]) if y is not None else None
    degree = spec.terminating_degree()
    value = 0j
    grad = [0j] * n
    hess = [0j] * n
    for w in range(0, weight + 1):
        for kappa in enumerate_partitions(w, n, degree):
            coef = series_coefficient(spec, kappa)
            if not coef:
                continue
            expansion = jack_expansion(kappa, spec.alpha, n)
            if ty is not None:
                coef = coef * ty.jack(expansion) / jack_at_ones(kappa, spec.alpha, n)
            v, g, h = jack_derivatives(expansion, x)
            value += coef * v
            for k in range(n):
                grad[k] += coef * g[k]
                hess[k] += coef * h[k]
    return value, grad, hess
