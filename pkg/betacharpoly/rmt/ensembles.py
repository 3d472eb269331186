"""
betacharpoly.rmt.ensembles
~~~~~~~~~~~~~~~~~~~~~~~~~~

Expectations of products of characteristic polynomials

.. math::

    K_N(s) = \\Big\\langle \\prod_{i=1}^N \\prod_{j=1}^n (x_i - s_j) \\Big\\rangle

for the Hermite, Laguerre and Jacobi beta ensembles with densities
proportional to ``exp(-beta/2 sum V(x)) |Delta(x)|^beta``, and the weighted
quantity ``phi_N = exp(-1/2 sum V(s_j)) K_N``.

Three routes are offered: terminating hypergeometric series (Laguerre,
Jacobi), a duality integral in ``n`` variables (Hermite, ``n <= 2``) and
Monte Carlo on tridiagonal matrix models (all three).

Random streams are Philox generators keyed by ``(seed, block)`` with a fixed
block size, so draws do not depend on how blocks are spread over threads.

"""
import cmath
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import mpmath
import numpy as np
import scipy.linalg
from numpy.polynomial.legendre import leggauss

from betacharpoly.errors import DomainError
from betacharpoly.errors import UnsupportedError
from betacharpoly.errors import fail
from betacharpoly.special.constants import EnsembleKind
from betacharpoly.special.constants import coefficient_xi
from betacharpoly.special.constants import gamma_beta_n
from betacharpoly.special.constants import normalization
from betacharpoly.symmetric.hyper import HyperSeriesSpec
from betacharpoly.symmetric.hyper import PrecisionPolicy
from betacharpoly.symmetric.hyper import eval_pFq
from betacharpoly.symmetric.hyper import two_set_n2_closed_form

_LOGGER = logging.getLogger(__name__)

EXACT_SERIES = "exact_series"
DUALITY_QUADRATURE = "duality_quadrature"
MONTE_CARLO = "monte_carlo"

BLOCK_SIZE = 1024
MIN_DRAWS = 1000
JACKKNIFE_GROUPS = 50
DOUBLE_SERIES_MAX_N = 80
# batched dense eigen-solves up to this size, tridiagonal solver beyond
_DENSE_MAX_N = 32


@dataclass(frozen=True)
class EnsembleSpec:
    """One of the three classical ensembles.

    :type kind: :py:class:`~betacharpoly.special.constants.EnsembleKind`
    :param kind: Hermite, Laguerre or Jacobi; strings ``'h'``, ``'l'``,
        ``'j'`` are accepted.

    :type N: :py:class:`int`
    :param N: matrix size.

    :type beta: :py:class:`float`
    :param beta: Dyson index.

    :type lambda1: :py:class:`float`
    :param lambda1: exponent of ``x`` (Laguerre, Jacobi), ``> -1``.

    :type lambda2: :py:class:`float`
    :param lambda2: exponent of ``1 - x`` (Jacobi), ``> -1``.
    """

    kind: EnsembleKind
    N: int
    beta: float
    lambda1: float = 0.0
    lambda2: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", EnsembleKind.parse(self.kind))
        if int(self.N) != self.N or self.N < 1:
            raise fail(DomainError(f"N must be a positive integer: {self.N}", "ensembles"))
        object.__setattr__(self, "N", int(self.N))
        if not self.beta > 0 or math.isinf(self.beta):
            raise fail(DomainError(f"beta must be positive and finite: {self.beta}", "ensembles"))
        if self.kind is not EnsembleKind.HERMITE and not self.lambda1 > -1:
            raise fail(DomainError(f"lambda1 must exceed -1: {self.lambda1}", "ensembles"))
        if self.kind is EnsembleKind.JACOBI and not self.lambda2 > -1:
            raise fail(DomainError(f"lambda2 must exceed -1: {self.lambda2}", "ensembles"))

    def with_N(self, N):
        return EnsembleSpec(self.kind, N, self.beta, self.lambda1, self.lambda2)

    def _endpoint_exponents(self):
        """``(exponent of x, exponent of 1 - x)`` carried by the weight."""
        if self.kind is EnsembleKind.HERMITE:
            return 0.0, 0.0
        if self.kind is EnsembleKind.LAGUERRE:
            return self.lambda1 / self.beta, 0.0
        return self.lambda1 / self.beta, self.lambda2 / self.beta

    def potential(self, x):
        """``V(x)``; complex logarithms on the principal branch. Infinite at
        an endpoint whose exponent is nonzero.

        :rtype: :py:class:`complex`
        """
        x = complex(x)
        if self.kind is EnsembleKind.HERMITE:
            return x * x
        if (x == 0 and self.lambda1) or (self.kind is EnsembleKind.JACOBI and x == 1 and self.lambda2):
            raise fail(DomainError(f"V is singular at the endpoint x = {x.real}", "ensembles"))
        log_x = cmath.log(x) if self.lambda1 else 0.0
        if self.kind is EnsembleKind.LAGUERRE:
            return x - (2 / self.beta) * self.lambda1 * log_x
        log_1mx = cmath.log(1 - x) if self.lambda2 else 0.0
        return -(2 / self.beta) * (self.lambda1 * log_x + self.lambda2 * log_1mx)

    def weight_is_finite(self, s):
        """``False`` when some ``s_j`` sits on an endpoint with a negative
        exponent."""
        for v in s:
            a, b = self._endpoint_exponents()
            if (complex(v) == 0 and a < 0) or (complex(v) == 1 and b < 0):
                return False
        return True

    def weight(self, s):
        """``exp(-1/2 sum V(s_j))`` as an mpmath number, built factor by factor
        as ``x^(lambda1/beta) (1-x)^(lambda2/beta) e^(-x/2)`` so endpoints with
        a positive exponent give 0.

        :raises DomainError: at an endpoint with a negative exponent.
        """
        if not self.weight_is_finite(s):
            raise fail(DomainError(f"The weight is infinite at s = {list(s)}", "ensembles"))
        total = mpmath.mpc(1)
        for v in s:
            x = mpmath.mpc(complex(v))
            if self.kind is EnsembleKind.HERMITE:
                total *= mpmath.exp(-x * x / 2)
                continue
            a, b = self._endpoint_exponents()
            if a:
                total *= mpmath.power(x, a)
            if self.kind is EnsembleKind.LAGUERRE:
                total *= mpmath.exp(-x / 2)
            elif b:
                total *= mpmath.power(1 - x, b)
        return total


@dataclass(frozen=True)
class CharpolyResult:
    """``K_N(s)`` and ``phi_N(s)``.

    ``K`` and ``phi`` are Python complex numbers and may overflow for large
    ``N``; ``mp_K`` and ``mp_phi`` keep the full range.
    """

    K: complex
    phi: complex
    method: str
    stderr: Optional[float] = None
    mp_K: object = None
    mp_phi: object = None

    def __post_init__(self):
        if (self.stderr is not None) != (self.method == MONTE_CARLO):
            raise fail(DomainError("stderr is reported for Monte Carlo results only", "ensembles"))


def _result(spec, s, mp_K, method, stderr=None):
    mp_K = mpmath.mpc(mp_K)
    if spec.weight_is_finite(s):
        mp_phi = spec.weight(s) * mp_K
    else:
        _LOGGER.warning(f"phi is infinite on a singular endpoint: [s={list(s)}]")
        mp_phi = mpmath.mpc(mpmath.inf)
    return CharpolyResult(complex(mp_K), complex(mp_phi), method, stderr, mp_K, mp_phi)


def _check_kind(spec, kind, name):
    if spec.kind is not kind:
        raise fail(
            DomainError(f"{name} needs a {kind.name.lower()} ensemble, got {spec.kind.name.lower()}", "ensembles")
        )


def _series_precision(spec, precision):
    precision = precision or PrecisionPolicy()
    if spec.N > DOUBLE_SERIES_MAX_N and precision.extended is False:
        raise fail(
            DomainError(
                f"series cancellation overflow at N = {spec.N} in double precision; "
                "use extended precision (PrecisionPolicy(extended=True))",
                "ensembles",
            )
        )
    return precision


def expect_laguerre_exact(spec, s, precision=None):
    """``K_N(s) = xi_{N,n} 1F1^(beta/2)(-N; (2/beta)(lambda1 + n); s)``.

    .. code:: python

        from betacharpoly.rmt.ensembles import EnsembleSpec, expect_laguerre_exact
        expect_laguerre_exact(EnsembleSpec("l", 1, 2.0), [0.5]).K   # 0.5

    :type spec: :py:class:`EnsembleSpec`
    :param spec: a Laguerre ensemble.

    :type s: sequence of :py:class:`complex`
    :param s: the points ``s_1, ..., s_n``.

    :type precision: :py:class:`~betacharpoly.symmetric.hyper.PrecisionPolicy`
    :param precision: (Optional) extended precision settings.

    :rtype: :py:class:`CharpolyResult`
    """
    _check_kind(spec, EnsembleKind.LAGUERRE, "expect_laguerre_exact")
    s = [complex(v) for v in s]
    n = len(s)
    if n == 0:
        return _result(spec, s, 1, EXACT_SERIES)
    series = HyperSeriesSpec(
        spec.beta / 2,
        (-spec.N,),
        ((2 / spec.beta) * (spec.lambda1 + n),),
        precision=_series_precision(spec, precision),
    )
    value = eval_pFq(series, s)
    xi = coefficient_xi(EnsembleKind.LAGUERRE, spec.N, n, spec.beta, spec.lambda1)
    _LOGGER.info(
        f"Laguerre K_N: [N={spec.N}] [n={n}] [beta={spec.beta}] [extended={value.extended}]"
    )
    return _result(spec, s, xi.mp_value * value.exact, EXACT_SERIES)


def expect_jacobi_exact(spec, s, precision=None):
    """``K_N(s) = xi_{N,n} 2F1^(beta/2)(-N, (2/beta)(lambda1 + lambda2 + n + 1) + N - 1;
    (2/beta)(lambda1 + n); s)``. The upper parameter ``-N`` terminates the
    series for every ``s``.

    :rtype: :py:class:`CharpolyResult`
    """
    _check_kind(spec, EnsembleKind.JACOBI, "expect_jacobi_exact")
    s = [complex(v) for v in s]
    n = len(s)
    if n == 0:
        return _result(spec, s, 1, EXACT_SERIES)
    two_over_beta = 2 / spec.beta
    series = HyperSeriesSpec(
        spec.beta / 2,
        (-spec.N, two_over_beta * (spec.lambda1 + spec.lambda2 + n + 1) + spec.N - 1),
        (two_over_beta * (spec.lambda1 + n),),
        precision=_series_precision(spec, precision),
    )
    value = eval_pFq(series, s)
    xi = coefficient_xi(EnsembleKind.JACOBI, spec.N, n, spec.beta, spec.lambda1, spec.lambda2)
    _LOGGER.info(
        f"Jacobi K_N: [N={spec.N}] [n={n}] [beta={spec.beta}] [extended={value.extended}]"
    )
    return _result(spec, s, xi.mp_value * value.exact, EXACT_SERIES)


@dataclass(frozen=True)
class HermiteQuadConfig:
    """Gauss-Legendre settings of the Hermite duality integral.

    :type order: :py:class:`int`
    :param order: (Optional) nodes per axis; defaults to ``6N + 120``.

    :type half_width: :py:class:`float`
    :param half_width: (Optional) the interval ``[-L, L]``; defaults to
        ``sqrt(N/2) + 10``.
    """

    order: Optional[int] = None
    half_width: Optional[float] = None

    def __post_init__(self):
        if self.order is not None and self.order < 8:
            raise fail(DomainError(f"order too small: {self.order}", "ensembles"))
        if self.half_width is not None and not self.half_width > 0:
            raise fail(DomainError(f"half_width must be positive: {self.half_width}", "ensembles"))

    def resolve(self, N):
        order = self.order or 6 * N + 120
        half_width = self.half_width or math.sqrt(N / 2) + 10
        return order, half_width


def expect_hermite_dual(spec, s, quad=None):
    """``K_N(s)`` for the Hermite ensemble from the duality integral in ``n``
    variables with Vandermonde power ``beta' = 4/beta``.

    Writing ``s = s_0 + s~`` with ``s_0`` the mean, the contour is shifted to
    ``Im t = -s_0/2``:

    ``K_N = C e^(p_2(s~) + n s_0^2/4) int prod (t_j - i s_0/2)^N e^(-t_j^2 - i s_0 t_j)
    Delta(t)^beta' 0F0^(beta/2)(-2i s~; t) dt``,
    ``C = (-i)^(nN) 2^(beta' n(n-1)/4 + n/2) / Gamma_{beta',n}``.

    The sum over nodes is taken in log-sum-exp form.

    :type quad: :py:class:`HermiteQuadConfig`
    :param quad: (Optional) node settings.

    :raises UnsupportedError: for ``n > 2``, or ``n = 2`` with ``4/beta`` not
        an even integer (the shifted integrand must be analytic).

    :rtype: :py:class:`CharpolyResult`
    """
    _check_kind(spec, EnsembleKind.HERMITE, "expect_hermite_dual")
    s = [complex(v) for v in s]
    n = len(s)
    if n == 0:
        return _result(spec, s, 1, DUALITY_QUADRATURE)
    beta_dual = 4 / spec.beta
    if n > 2:
        raise fail(
            UnsupportedError(
                f"Hermite duality quadrature supports n <= 2, got n = {n}; use Monte Carlo",
                "ensembles",
            )
        )
    if n == 2 and abs(beta_dual - 2 * round(beta_dual / 2)) > 1e-12:
        raise fail(
            UnsupportedError(
                f"non-analytic Vandermonde power |Delta|^{beta_dual:g}: the shifted duality "
                "integral needs 4/beta even for n = 2",
                "ensembles",
            )
        )
    N = spec.N
    order, half_width = (quad or HermiteQuadConfig()).resolve(N)
    nodes, weights = leggauss(order)
    nodes, weights = half_width * nodes, half_width * weights
    s0 = sum(s) / n
    shifted = [v - s0 for v in s]

    def log_one(t):
        return N * np.log(t - 0.5j * s0) - t * t - 1j * s0 * t

    if n == 1:
        logs = log_one(nodes) + np.log(weights)
        rest = np.ones_like(logs)
    else:
        t1, t2 = np.meshgrid(nodes, nodes, indexing="ij")
        w = np.outer(weights, weights)
        logs = log_one(t1) + log_one(t2) + np.log(w)
        power = int(round(beta_dual))
        rest = (t1 - t2) ** power * two_set_n2_closed_form(
            spec.beta / 2, [-2j * v for v in shifted], [t1, t2]
        )
    peak = float(np.max(logs.real))
    total = np.sum(np.exp(logs - peak) * rest)

    log_c = n * N * (-0.5j * math.pi) + (beta_dual * n * (n - 1) / 4 + n / 2) * math.log(2)
    log_c -= gamma_beta_n(beta_dual, n).log_value
    log_c += sum(v * v for v in shifted) + n * s0 * s0 / 4
    mp_K = mpmath.exp(mpmath.mpc(log_c + peak)) * mpmath.mpc(complex(total))
    _LOGGER.info(f"Hermite K_N by duality: [N={N}] [n={n}] [beta={spec.beta}] [order={order}]")
    return _result(spec, s, mp_K, DUALITY_QUADRATURE)


def _chi(rng, dof, size):
    return np.sqrt(rng.gamma(np.asarray(dof) / 2, 2.0, size=size))


def _tridiagonal(spec, rng, size):
    """Diagonal and off-diagonal of ``size`` tridiagonal models whose
    eigenvalues follow the ensemble's density."""
    N, beta = spec.N, spec.beta
    shape = (size, N)
    if spec.kind is EnsembleKind.HERMITE:
        diag = rng.standard_normal(shape)
        dof = beta * np.arange(N - 1, 0, -1)
        off = _chi(rng, dof, (size, N - 1)) / math.sqrt(2.0)
        scale = 1 / math.sqrt(beta)
        return diag * scale, off * scale
    if spec.kind is EnsembleKind.LAGUERRE:
        a = spec.lambda1 + 1 + beta * (N - 1) / 2
        d = _chi(rng, 2 * a - beta * np.arange(N), shape)
        e = _chi(rng, beta * np.arange(N - 1, 0, -1), (size, N - 1))
        diag = d ** 2
        diag[:, 1:] += e ** 2
        off = d[:, :-1] * e
        return diag / beta, off / beta
    a = 2 * (spec.lambda1 + 1) / beta - 1
    b = 2 * (spec.lambda2 + 1) / beta - 1
    half = beta / 2
    idx = np.arange(N, 0, -1)
    c = np.sqrt(rng.beta(half * (a + idx), half * (b + idx), size=shape))
    sn = np.sqrt(1 - c ** 2)
    idx_p = np.arange(N - 1, 0, -1)
    cp = np.sqrt(rng.beta(half * idx_p, half * (a + b + 1 + idx_p), size=(size, N - 1)))
    sp = np.sqrt(1 - cp ** 2)
    # upper bidiagonal block of the CS form
    d = np.empty(shape)
    d[:, 0] = c[:, 0]
    d[:, 1:] = c[:, 1:] * sp
    e = -sn[:, :-1] * cp
    diag = d ** 2
    diag[:, 1:] += e ** 2
    off = d[:, :-1] * e
    return diag, off


def _generator(seed, block):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(block)])))


def _eigenvalues(diag, off):
    size, N = diag.shape
    if N == 1:
        return diag.copy()
    if N <= _DENSE_MAX_N:
        dense = np.zeros((size, N, N))
        rows = np.arange(N)
        dense[:, rows, rows] = diag
        dense[:, rows[:-1], rows[1:]] = off
        dense[:, rows[1:], rows[:-1]] = off
        return np.linalg.eigvalsh(dense)
    return np.array([scipy.linalg.eigvalsh_tridiagonal(d, o) for d, o in zip(diag, off)])


def sample_ensemble(spec, seed, draws=1):
    """Eigenvalues of ``draws`` independent tridiagonal models.

    - Hermite: Gaussian diagonal, ``chi_{beta(N-i)}`` off-diagonal.
    - Laguerre: ``B B^T`` with ``B`` lower bidiagonal, ``chi_{2a - beta i}``
      on the diagonal, ``a = lambda1 + 1 + beta(N-1)/2``.
    - Jacobi: squared singular values of the upper-left block of the CS
      form, with ``a = 2(lambda1 + 1)/beta - 1``, ``b = 2(lambda2 + 1)/beta - 1``.

    :type seed: :py:class:`int`
    :param seed: 64-bit seed.

    :rtype: :py:class:`numpy.ndarray`
    :returns: shape ``(N,)`` for one draw, ``(draws, N)`` otherwise.
    """
    rows = []
    remaining, block = draws, 0
    while remaining > 0:
        size = min(BLOCK_SIZE, remaining)
        diag, off = _tridiagonal(spec, _generator(seed, block), size)
        rows.append(_eigenvalues(diag, off))
        remaining -= size
        block += 1
    values = np.concatenate(rows)
    return values[0] if draws == 1 else values


def _continuant(diag, off, s):
    """``det(T - s)`` for a batch of tridiagonal ``T``."""
    prev = np.ones(diag.shape[0], dtype=complex)
    cur = diag[:, 0] - s
    for k in range(1, diag.shape[1]):
        prev, cur = cur, (diag[:, k] - s) * cur - off[:, k - 1] ** 2 * prev
    return cur


def _block_products(spec, s, seed, block, size):
    diag, off = _tridiagonal(spec, _generator(seed, block), size)
    value = np.ones(size, dtype=complex)
    for sj in s:
        value = value * _continuant(diag, off, sj)
    return value


def mc_expect(spec, s, draws=100000, seed=0, workers=1):
    """Monte Carlo estimate of ``K_N(s)`` with a block jackknife error.

    Each draw contributes ``prod_j det(T - s_j)`` evaluated by the continuant
    recursion, so no eigenvalues are computed.

    :type draws: :py:class:`int`
    :param draws: number of matrices, at least 1000.

    :type workers: :py:class:`int`
    :param workers: threads; the result does not depend on it.

    :rtype: :py:class:`CharpolyResult`
    """
    s = [complex(v) for v in s]
    if not s:
        return _result(spec, s, 1, MONTE_CARLO, 0.0)
    if draws < MIN_DRAWS:
        raise fail(DomainError(f"Monte Carlo needs at least {MIN_DRAWS} draws, got {draws}", "ensembles"))
    sizes = [min(BLOCK_SIZE, draws - start) for start in range(0, draws, BLOCK_SIZE)]

    def run(block):
        return _block_products(spec, s, seed, block, sizes[block])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    else:
        parts = [run(b) for b in range(len(sizes))]
    values = np.concatenate(parts)
    mean = complex(math.fsum(values.real), math.fsum(values.imag)) / values.size
    groups = np.array([g.sum() for g in np.array_split(values, JACKKNIFE_GROUPS)])
    sizes_g = np.array([g.size for g in np.array_split(values, JACKKNIFE_GROUPS)], dtype=float)
    leave_out = (groups.sum() - groups) / (values.size - sizes_g)
    spread = float(np.sum(np.abs(leave_out - leave_out.mean()) ** 2))
    stderr = math.sqrt((JACKKNIFE_GROUPS - 1) / JACKKNIFE_GROUPS * spread)
    _LOGGER.info(
        f"Monte Carlo K_N: [kind={spec.kind.name.lower()}] [N={spec.N}] [draws={draws}] "
        f"[mean={mean:.6g}] [stderr={stderr:.3g}]"
    )
    return _result(spec, s, mean, MONTE_CARLO, stderr)


def expect(spec, s, method="auto", draws=100000, seed=0, precision=None, quad=None, workers=1):
    """Dispatches to the exact route of the ensemble, or to Monte Carlo.

    ``auto`` picks the series for Laguerre and Jacobi, the duality integral
    for Hermite with ``n <= 2``, and Monte Carlo otherwise.

    :rtype: :py:class:`CharpolyResult`
    """
    n = len(s)
    if method == "auto":
        if spec.kind is EnsembleKind.HERMITE:
            method = DUALITY_QUADRATURE if n <= 2 else MONTE_CARLO
        else:
            method = EXACT_SERIES
    if method == MONTE_CARLO:
        return mc_expect(spec, s, draws, seed, workers)
    if method == DUALITY_QUADRATURE:
        return expect_hermite_dual(spec, s, quad)
    if method == EXACT_SERIES:
        if spec.kind is EnsembleKind.LAGUERRE:
            return expect_laguerre_exact(spec, s, precision)
        if spec.kind is EnsembleKind.JACOBI:
            return expect_jacobi_exact(spec, s, precision)
        raise fail(UnsupportedError("No terminating series for the Hermite ensemble", "ensembles"))
    raise fail(DomainError(f"Unknown method: [{method}]", "ensembles"))


def correlation_from_phi(spec, x, precision=None, quad=None):
    """The ``k``-point correlation of ``N + k`` eigenvalues from ``phi_N`` with
    ``n = k beta`` points:

    ``R_{k,N}(x) = (N+k)!/N! Z_N/Z_{N+k} prod_{i<j} (x_i - x_j)^beta phi_N(s)``,
    ``s`` holding each ``x_i`` repeated ``beta`` times.

    :raises DomainError: unless ``beta`` is an even integer.

    :rtype: :py:class:`float`
    """
    beta = spec.beta
    if abs(beta - 2 * round(beta / 2)) > 1e-12:
        raise fail(DomainError(f"correlation requires even beta, got {beta}", "ensembles"))
    x = [float(v) for v in x]
    k = len(x)
    reps = int(round(beta))
    s = [v for v in x for _ in range(reps)]
    phi = expect(spec, s, precision=precision, quad=quad).mp_phi
    Z = normalization(spec.kind, beta, spec.N, spec.lambda1, spec.lambda2)
    Z_big = normalization(spec.kind, beta, spec.N + k, spec.lambda1, spec.lambda2)
    log = mpmath.loggamma(spec.N + k + 1) - mpmath.loggamma(spec.N + 1)
    log += mpmath.mpc(Z.log_value) - mpmath.mpc(Z_big.log_value)
    vander = mpmath.mpf(1)
    for i in range(k):
        for j in range(i + 1, k):
            vander *= mpmath.mpf(x[i] - x[j]) ** reps
    value = mpmath.exp(log) * vander * phi
    _LOGGER.debug(f"Correlation: [k={k}] [N={spec.N}] [value={value}]")
    return float(mpmath.re(value))
