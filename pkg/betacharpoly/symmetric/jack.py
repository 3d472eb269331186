"""
betacharpoly.symmetric.jack
~~~~~~~~~~~~~~~~~~~~~~~~~~~

Jack polynomials ``P_kappa^(alpha)`` in the monomial basis.

The expansion is the unique monic symmetric polynomial that is triangular in
dominance order below ``kappa`` and an eigenfunction of
``D_2 - (2/alpha)(n-1)E_1``, where ``E_1 = sum x_i d_i`` and
``D_2 = sum x_i^2 d_i^2 + (2/alpha) sum_{i != j} x_i^2/(x_i - x_j) d_i``.
Coefficients are solved by back-substitution down the dominance order.

"""
import functools
import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass
from dataclasses import field

import mpmath

from betacharpoly.errors import DegenerateParameterError
from betacharpoly.errors import DomainError
from betacharpoly.errors import VanishingPolynomialError
from betacharpoly.errors import fail
from betacharpoly.symmetric.partitions import Dominance
from betacharpoly.symmetric.partitions import Partition
from betacharpoly.symmetric.partitions import as_partition
from betacharpoly.symmetric.partitions import box_stats
from betacharpoly.symmetric.partitions import dominance_leq
from betacharpoly.symmetric.partitions import enumerate_partitions
from betacharpoly.symmetric.partitions import gen_pochhammer
from betacharpoly.symmetric.partitions import monomial_count

_LOGGER = logging.getLogger(__name__)

DEGENERACY_TOL = 1e-9
DIRECT_SYMMETRIZATION_MAX_VARS = 4


@dataclass(frozen=True)
class EigenData:
    kappa: Partition
    alpha: float
    epsilon: float


@dataclass(frozen=True)
class JackExpansion:
    """Monomial expansion ``P_kappa = sum_mu coeffs[mu] m_mu``.

    ``coeffs`` is ordered reverse-lexicographically, starting with ``kappa``
    itself (coefficient 1). Values are floats, or mpmath numbers when the
    expansion was built at an explicit precision.
    """

    kappa: Partition
    alpha: float
    n: int
    coeffs: dict = field(compare=False)
    epsilon: float = 0.0
    dps: int = None

    def eigen_data(self):
        return EigenData(self.kappa, self.alpha, self.epsilon)

    def support(self):
        return list(self.coeffs)


def eigenvalue(kappa, alpha):
    """Eigenvalue of ``D_2 - (2/alpha)(n-1)E_1`` on ``P_kappa``; it does not
    depend on ``n``.

    :rtype: :py:class:`float`
    """
    kappa = as_partition(kappa)
    diag = sum(k * (k - 1) for k in kappa)
    shift = sum(i * k for i, k in enumerate(kappa))
    if math.isinf(alpha):
        return float(diag)
    return diag - (2.0 / alpha) * shift


def _interaction(source, target, n):
    """Off-diagonal coefficient of ``m_target`` in ``(alpha/2) D_2 m_source``.

    Sums ``a - b`` over position pairs ``i < j`` of ``target`` such that
    removing them leaves a sub-multiset of ``source`` whose complement
    ``{a, b}`` straddles ``target_i`` strictly.
    """
    src = Counter(source.padded(n))
    tgt = target.padded(n)
    total = 0
    positive = [i for i, t in enumerate(tgt) if t > 0]
    for i, j in itertools.combinations(positive, 2):
        rest = Counter(tgt[:i] + tgt[i + 1 : j] + tgt[j + 1 :])
        remainder = src - rest
        if sum(remainder.values()) != 2 or rest - src:
            continue
        values = sorted(remainder.elements(), reverse=True)
        a, b = values
        if b < tgt[i] < a:
            total += a - b
    return total


@functools.lru_cache(maxsize=None)
def _interaction_table(weight, n):
    """For every target of the given weight, its nonzero sources and weights."""
    parts = enumerate_partitions(weight, n)
    table = {}
    for nu in parts:
        table[nu] = tuple(
            (mu, w) for mu in parts if mu != nu for w in (_interaction(mu, nu, n),) if w
        )
    return table


def _validate(kappa, alpha, n):
    if not alpha > 0:
        raise fail(DomainError(f"alpha must be positive, got {alpha}", "jack"))
    if kappa.length > n:
        raise fail(
            VanishingPolynomialError(
                f"P_{tuple(kappa)} vanishes in {n} variables "
                f"(length {kappa.length} > {n}).",
                "jack",
            )
        )


@functools.lru_cache(maxsize=None)
def _expansion(kappa, alpha, n, dps):
    if math.isinf(alpha):
        one = mpmath.mpf(1) if dps else 1.0
        return {kappa: one}, eigenvalue(kappa, alpha)

    # strip full columns: P_kappa = (x_1...x_n)^c P_{kappa - c}
    if kappa.length == n and n > 0 and kappa[-1] > 0:
        c = kappa[-1]
        reduced = Partition(k - c for k in kappa)
        inner, _ = _expansion(reduced, alpha, n, dps)
        shifted = {Partition(p + c for p in mu.padded(n)): v for mu, v in inner.items()}
        return shifted, eigenvalue(kappa, alpha)

    if dps:
        with mpmath.workdps(dps):
            return _solve(kappa, mpmath.mpf(alpha), n, mpmath.mpf), eigenvalue(
                kappa, alpha
            )
    return _solve(kappa, float(alpha), n, float), eigenvalue(kappa, alpha)


def _solve(kappa, alpha, n, num):
    candidates = [
        mu
        for mu in enumerate_partitions(kappa.weight, n)
        if dominance_leq(mu, kappa) is Dominance.LEQ
    ]
    table = _interaction_table(kappa.weight, n)
    eps_kappa = num(eigenvalue(kappa, alpha))
    two_over_alpha = 2 / alpha
    coeffs = {kappa: num(1)}
    for nu in candidates:
        if nu == kappa:
            continue
        total = num(0)
        for mu, weight in table[nu]:
            c_mu = coeffs.get(mu)
            if c_mu:
                total += c_mu * weight
        if not total:
            coeffs[nu] = num(0)
            continue
        gap = eps_kappa - num(eigenvalue(nu, alpha))
        if abs(gap) < DEGENERACY_TOL * (1 + abs(eps_kappa)):
            raise fail(
                DegenerateParameterError(
                    f"Eigenvalue collision between {tuple(kappa)} and {tuple(nu)} "
                    f"at alpha={float(alpha)}",
                    "jack",
                    details={
                        "kappa": list(kappa),
                        "mu": list(nu),
                        "alpha": float(alpha),
                    },
                )
            )
        coeffs[nu] = two_over_alpha * total / gap
    return {mu: c for mu, c in coeffs.items() if c}


def jack_expansion(kappa, alpha, n, dps=None):
    """Builds ``P_kappa^(alpha)`` in ``n`` variables.

    .. code:: python

        from betacharpoly.symmetric.jack import jack_expansion
        jack_expansion((2,), 2.0, 2).coeffs
        # {Partition((2,)): 1.0, Partition((1, 1)): 0.666...}

    :type kappa: :py:class:`~betacharpoly.symmetric.partitions.Partition`
    :param kappa: the index partition.

    :type alpha: :py:class:`float`
    :param alpha: Jack parameter, positive or ``math.inf``.

    :type n: :py:class:`int`
    :param n: number of variables, at least the length of ``kappa``.

    :type dps: (Optional) :py:class:`int`
    :param dps: if given, coefficients are mpmath numbers computed with this
        many decimal digits.

    :rtype: :py:class:`JackExpansion`
    """
    kappa = as_partition(kappa)
    _validate(kappa, alpha, n)
    # expansions are stable once n reaches the weight
    n_eff = max(min(n, kappa.weight), kappa.length)
    coeffs, eps = _expansion(kappa, float(alpha), n_eff, dps)
    return JackExpansion(kappa, alpha, n, dict(coeffs), eps, dps)


class MonomialTable:
    """Memoized monomial symmetric functions ``m_mu(x)`` at a fixed point.

    ``x`` is a sequence of ``n`` scalars or of equally shaped numpy arrays (a
    grid of points evaluated at once).
    """

    def __init__(self, x):
        self.x = list(x)
        self.n = len(self.x)
        self._powers = [[1, xi] for xi in self.x]
        self._cache = {}

    def power(self, i, k):
        row = self._powers[i]
        while len(row) <= k:
            row.append(row[-1] * self.x[i])
        return row[k]

    def m(self, mu):
        mu = as_partition(mu)
        if mu.length > self.n:
            return 0
        if mu not in self._cache:
            if self.n <= DIRECT_SYMMETRIZATION_MAX_VARS:
                self._cache[mu] = self._direct(mu)
            else:
                self._cache[mu] = self._convolution(mu)
        return self._cache[mu]

    def _direct(self, mu):
        total = 0
        for exps in sorted(set(itertools.permutations(mu.padded(self.n)))):
            term = 1
            for i, e in enumerate(exps):
                if e:
                    term = term * self.power(i, e)
            total = total + term
        return total

    def _convolution(self, mu):
        parts = mu.padded(self.n)
        values = sorted(set(parts))
        layer = {tuple(parts.count(v) for v in values): 1}
        for i in range(self.n):
            nxt = {}
            for state, acc in layer.items():
                for k, v in enumerate(values):
                    if not state[k]:
                        continue
                    new = state[:k] + (state[k] - 1,) + state[k + 1 :]
                    term = acc * self.power(i, v) if v else acc
                    nxt[new] = nxt[new] + term if new in nxt else term
            layer = nxt
        return layer[(0,) * len(values)]

    def jack(self, expansion):
        total = 0
        for mu, c in expansion.coeffs.items():
            if mu.length <= self.n:
                total = total + c * self.m(mu)
        return total


def jack_eval(expansion, x):
    """Evaluates an expansion at the point ``x``.

    :type expansion: :py:class:`JackExpansion`
    :param expansion: the polynomial.

    :type x: sequence
    :param x: the point; terms of length beyond ``len(x)`` vanish.
    """
    return MonomialTable(x).jack(expansion)


def jack_at_ones(kappa, alpha, n):
    """``P_kappa^(alpha)(1, ..., 1)`` with ``n`` ones, from the principal
    specialization ``alpha^|kappa| [n/alpha]_kappa / prod(alpha*a + l + 1)``.

    :rtype: :py:class:`float`
    """
    kappa = as_partition(kappa)
    if not alpha > 0:
        raise fail(DomainError(f"alpha must be positive, got {alpha}", "jack"))
    if kappa.length > n:
        return 0.0
    if math.isinf(alpha):
        return float(monomial_count(kappa, n))
    denom = 1.0
    for box in box_stats(kappa):
        denom *= alpha * box.arm + box.leg + 1
    return alpha ** kappa.weight * gen_pochhammer(n / alpha, kappa, alpha) / denom


def monomial_derivatives(mu, x):
    """Value, gradient and diagonal second derivatives of ``m_mu`` at ``x``.

    :rtype: :py:class:`tuple`
    :returns: ``(value, [d_k m], [d_k^2 m])``.
    """
    mu = as_partition(mu)
    n = len(x)
    value = 0
    grad = [0] * n
    hess = [0] * n
    if mu.length > n:
        return value, grad, hess
    for exps in sorted(set(itertools.permutations(mu.padded(n)))):
        term = 1
        for i, e in enumerate(exps):
            term = term * x[i] ** e
        value = value + term
        for k, e in enumerate(exps):
            if e == 0:
                continue
            rest = 1
            for i, f in enumerate(exps):
                if i != k:
                    rest = rest * x[i] ** f
            grad[k] = grad[k] + e * x[k] ** (e - 1) * rest
            if e > 1:
                hess[k] = hess[k] + e * (e - 1) * x[k] ** (e - 2) * rest
    return value, grad, hess


def jack_derivatives(expansion, x):
    """Value, gradient and diagonal Hessian of ``P_kappa`` at ``x``."""
    n = len(x)
    value = 0
    grad = [0] * n
    hess = [0] * n
    for mu, c in expansion.coeffs.items():
        v, g, h = monomial_derivatives(mu, x)
        value = value + c * v
        for k in range(n):
            grad[k] = grad[k] + c * g[k]
            hess[k] = hess[k] + c * h[k]
    return value, grad, hess


def eigen_residual(expansion, x):
    """Relative residual of ``(D_2 - (2/alpha)(n-1)E_1 - epsilon) P`` at a point
    with pairwise distinct coordinates, using analytic monomial derivatives.

    :rtype: :py:class:`float`
    """
    n = len(x)
    alpha = expansion.alpha
    value, grad, hess = jack_derivatives(expansion, x)
    d2 = sum(x[i] ** 2 * hess[i] for i in range(n))
    scale = abs(d2)
    if not math.isinf(alpha):
        cross = 0
        for i in range(n):
            for j in range(n):
                if i != j:
                    cross = cross + x[i] ** 2 / (x[i] - x[j]) * grad[i]
        d2 = d2 + (2.0 / alpha) * cross
        e1 = sum(x[i] * grad[i] for i in range(n))
        d2 = d2 - (2.0 / alpha) * (n - 1) * e1
        scale += abs((2.0 / alpha) * cross) + abs((2.0 / alpha) * (n - 1) * e1)
    residual = d2 - expansion.epsilon * value
    scale += abs(expansion.epsilon * value)
    return abs(residual) / scale if scale else abs(residual)
