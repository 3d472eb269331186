"""
betacharpoly.special.constants
~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

Closed-form constants: Selberg's integral and the normalizations derived
from it, the Mehta and Morris constants, and the coefficients that rescale
finite-N expectations onto their limits.

Everything is carried as a :py:class:`ScalingCoefficient`, a principal-branch
logarithm, because factors such as ``exp(m N ln N)`` overflow doubles well
before N reaches the sizes used in convergence checks.

.. code:: python

    from betacharpoly.special.constants import selberg_S
    selberg_S(2, 0, 0, 1).value
    # (0.16666666666666666+0j)

"""
import cmath
import enum
import logging
import math
from dataclasses import dataclass

import mpmath
import numpy as np
import scipy.special

from betacharpoly.errors import CoefficientUndefinedError
from betacharpoly.errors import DomainError
from betacharpoly.errors import fail

_LOGGER = logging.getLogger(__name__)

_LN2 = math.log(2.0)
_LNPI = math.log(math.pi)
_POLE_TOL = 1e-12


class EnsembleKind(enum.Enum):
    HERMITE = "h"
    LAGUERRE = "l"
    JACOBI = "j"

    @classmethod
    def parse(cls, value):
        """Accepts a member, its one-letter code or its name (any case)."""
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        for member in cls:
            if key in (member.value, member.name.lower()):
                return member
        raise fail(DomainError(f"Unknown ensemble: [{value}]", "constants"))


def _wrap(phase):
    """Reduces an angle to ``(-pi, pi]``."""
    wrapped = math.remainder(phase, 2 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2 * math.pi
    return wrapped


@dataclass(frozen=True)
class ScalingCoefficient:
    """A constant stored by its logarithm. The imaginary part of
    ``log_value`` is kept in ``(-pi, pi]``.

    :type log_value: :py:class:`complex`
    :param log_value: principal logarithm of the constant.
    """

    log_value: complex

    def __post_init__(self):
        lv = complex(self.log_value)
        object.__setattr__(self, "log_value", complex(lv.real, _wrap(lv.imag)))

    @classmethod
    def from_value(cls, value):
        value = complex(value)
        if value == 0:
            raise fail(DomainError("Cannot take the logarithm of zero.", "constants"))
        return cls(cmath.log(value))

    @property
    def value(self):
        """The constant as a Python complex; ``inf`` modulus on overflow."""
        if self.log_value.real > 709.0:
            return complex(mpmath.exp(mpmath.mpc(self.log_value)))
        return cmath.exp(self.log_value)

    @property
    def mp_value(self):
        return mpmath.exp(mpmath.mpc(self.log_value.real, self.log_value.imag))

    @property
    def modulus_log(self):
        return self.log_value.real

    @property
    def phase(self):
        return self.log_value.imag

    def __mul__(self, other):
        if not isinstance(other, ScalingCoefficient):
            other = ScalingCoefficient.from_value(other)
        return ScalingCoefficient(self.log_value + other.log_value)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, ScalingCoefficient):
            other = ScalingCoefficient.from_value(other)
        return ScalingCoefficient(self.log_value - other.log_value)

    def __pow__(self, exponent):
        return ScalingCoefficient(self.log_value * exponent)

    def inverse(self):
        return ScalingCoefficient(-self.log_value)


def _is_pole(x):
    return x <= _POLE_TOL and abs(x - round(x)) < _POLE_TOL


def _lgamma(x, name):
    """``log Gamma(x)``: real for ``x > 0``, principal complex otherwise."""
    x = float(x)
    if _is_pole(x):
        raise fail(
            DomainError(f"{name}: Gamma pole at argument {x}", "constants", {"arg": x})
        )
    if x > 0:
        return complex(scipy.special.gammaln(x))
    return complex(scipy.special.loggamma(complex(x)))


def _check_N(N, name):
    if int(N) != N or N < 0:
        raise fail(DomainError(f"{name}: N must be a nonnegative integer, got {N}", "constants"))
    return int(N)


def _check_beta(beta, name):
    if not beta > 0 or math.isinf(beta):
        raise fail(DomainError(f"{name}: beta must be positive and finite, got {beta}", "constants"))


def _check_lambda(value, name, label):
    if not value > -1:
        raise fail(DomainError(f"{name}: {label} must exceed -1, got {value}", "constants"))


def selberg_S(N, lambda1, lambda2, lambda3):
    """Selberg's integral
    ``int_[0,1]^N prod x^l1 (1-x)^l2 prod |x_k - x_j|^(2 l3) dx``.

    :type N: :py:class:`int`
    :param N: dimension.

    :type lambda1: :py:class:`float`
    :param lambda1: exponent at 0, ``> -1``.

    :type lambda2: :py:class:`float`
    :param lambda2: exponent at 1, ``> -1``.

    :type lambda3: :py:class:`float`
    :param lambda3: half the Vandermonde power, ``> 0``.

    :rtype: :py:class:`ScalingCoefficient`
    """
    N = _check_N(N, "selberg_S")
    _check_lambda(lambda1, "selberg_S", "lambda1")
    _check_lambda(lambda2, "selberg_S", "lambda2")
    if not lambda3 > 0:
        raise fail(DomainError(f"selberg_S: lambda3 must be positive, got {lambda3}", "constants"))
    total = 0j
    g3 = _lgamma(1 + lambda3, "selberg_S")
    for j in range(N):
        total += _lgamma(1 + lambda3 + j * lambda3, "selberg_S")
        total += _lgamma(1 + lambda1 + j * lambda3, "selberg_S")
        total += _lgamma(1 + lambda2 + j * lambda3, "selberg_S")
        total -= g3
        total -= _lgamma(2 + lambda1 + lambda2 + (N + j - 1) * lambda3, "selberg_S")
    return ScalingCoefficient(total)


def _log_gamma_product(beta, count):
    """``sum_{j=1}^count log Gamma(1 + j beta/2) - count log Gamma(1 + beta/2)``."""
    g = _lgamma(1 + beta / 2, "gamma product")
    return sum(_lgamma(1 + j * beta / 2, "gamma product") - g for j in range(1, count + 1))


def laguerre_W(lambda1, beta, N):
    """Normalization ``int_(0,inf)^N prod x^l1 e^(-beta x/2) |Delta|^beta dx``.

    :rtype: :py:class:`ScalingCoefficient`
    """
    N = _check_N(N, "laguerre_W")
    _check_beta(beta, "laguerre_W")
    _check_lambda(lambda1, "laguerre_W", "lambda1")
    total = ((1 + lambda1) * N + beta * N * (N - 1) / 2) * math.log(2 / beta)
    total += _log_gamma_product(beta, N)
    total += sum(_lgamma(1 + lambda1 + j * beta / 2, "laguerre_W") for j in range(N))
    return ScalingCoefficient(total)


def gaussian_G(beta, N):
    """Normalization ``int_R^N prod e^(-beta x^2/2) |Delta|^beta dx``.

    :rtype: :py:class:`ScalingCoefficient`
    """
    N = _check_N(N, "gaussian_G")
    _check_beta(beta, "gaussian_G")
    total = -(N / 2 + beta * N * (N - 1) / 4) * math.log(beta)
    total += (N / 2) * math.log(2 * math.pi)
    total += _log_gamma_product(beta, N)
    return ScalingCoefficient(total)


def gamma_beta_n(beta, n):
    """Mehta's constant: ``int e^(-z |x|^2/2) |Delta|^beta dx`` equals this
    times ``z^(-(n + beta n(n-1)/2)/2)``. ``beta = 0`` is allowed and gives
    ``(2 pi)^(n/2)``.

    :rtype: :py:class:`ScalingCoefficient`
    """
    n = _check_N(n, "gamma_beta_n")
    if beta < 0 or math.isinf(beta):
        raise fail(DomainError(f"gamma_beta_n: beta must be >= 0, got {beta}", "constants"))
    return ScalingCoefficient((n / 2) * math.log(2 * math.pi) + _log_gamma_product(beta, n))


def morris_M(n, a, b, alpha):
    """The Morris constant
    ``prod_j Gamma(1+alpha+j alpha) Gamma(1+a+b+j alpha) /
    (Gamma(1+alpha) Gamma(1+a+j alpha) Gamma(1+b+j alpha))``.
    Negative gamma values keep their sign through the phase.

    :rtype: :py:class:`ScalingCoefficient`
    """
    n = _check_N(n, "morris_M")
    total = 0j
    g = _lgamma(1 + alpha, "morris_M")
    for j in range(n):
        total += _lgamma(1 + alpha + j * alpha, "morris_M") - g
        total += _lgamma(1 + a + b + j * alpha, "morris_M")
        total -= _lgamma(1 + a + j * alpha, "morris_M")
        total -= _lgamma(1 + b + j * alpha, "morris_M")
    return ScalingCoefficient(total)


def bulk_density(ensemble, u):
    """Limiting density ``rho(u)`` used by the bulk scaling: semicircle,
    Marchenko-Pastur with ratio one, and arcsine.

    :rtype: :py:class:`float`
    """
    kind = EnsembleKind.parse(ensemble)
    if kind is EnsembleKind.HERMITE:
        if not -1 < u < 1:
            raise fail(DomainError(f"Hermite bulk point must lie in (-1, 1): {u}", "constants"))
        return (2 / math.pi) * math.sqrt(1 - u * u)
    if not 0 < u < 1:
        raise fail(DomainError(f"Bulk point must lie in (0, 1): {u}", "constants"))
    if kind is EnsembleKind.LAGUERRE:
        return (2 / math.pi) * math.sqrt((1 - u) / u)
    return 1 / (math.pi * math.sqrt(u * (1 - u)))


def coefficient_Phi(ensemble, N, n, beta, lambda1=0.0):
    """Soft-edge coefficient ``Phi_{N,n}`` for the Hermite and Laguerre
    ensembles.

    :raises CoefficientUndefinedError: for the Jacobi ensemble, which has no
        soft edge at fixed parameters.

    :rtype: :py:class:`ScalingCoefficient`
    """
    kind = EnsembleKind.parse(ensemble)
    _check_beta(beta, "coefficient_Phi")
    bp = 4 / beta
    lnN = math.log(N)
    if kind is EnsembleKind.HERMITE:
        log = (bp * n * (n - 1) / 12 + n / 6) * lnN
        log += -n * N * (1 + _LN2 - lnN) / 2 + 1j * math.pi * ((n * N) % 2)
        return ScalingCoefficient(log)
    if kind is EnsembleKind.LAGUERRE:
        log = (-bp * n * (n - 1) / 6 - bp * n / 2 + 2 * n / 3) * _LN2
        log += (bp * n * (n - 1) / 12 + bp * n * lambda1 / 4 + n / 6) * lnN
        log += -n * N * (1 - lnN) + 1j * math.pi * ((n * N) % 2)
        return ScalingCoefficient(log)
    raise fail(
        CoefficientUndefinedError(
            "Phi coefficient undefined for ensemble [jacobi]", "constants"
        )
    )


def coefficient_Psi_even(ensemble, N, m, beta, rho, lambda1=0.0, lambda2=0.0):
    """Bulk coefficient ``Psi_{N,2m}`` at density ``rho``.

    :type rho: :py:class:`float`
    :param rho: the bulk density at the point, see :func:`bulk_density`.

    :rtype: :py:class:`ScalingCoefficient`
    """
    kind = EnsembleKind.parse(ensemble)
    _check_beta(beta, "coefficient_Psi_even")
    bp = 4 / beta
    lnN = math.log(N)
    power = bp * m * (m + 1) / 2 - m
    if kind is EnsembleKind.HERMITE:
        log = power * math.log(math.pi * rho) + (bp * m * m / 2) * lnN
        log += -m * N * (1 + _LN2 - lnN)
    elif kind is EnsembleKind.LAGUERRE:
        log = power * math.log(math.pi * rho / 2) + (bp * m * (m + lambda1) / 2) * lnN
        log += -2 * m * N * (1 - lnN)
    else:
        log = power * math.log(math.pi * rho) + (bp * m * m / 2) * lnN
        log += (
            -bp * m * m / 2 - bp * m * (lambda1 + lambda2 + 1) + 2 * m * (1 - 2 * N)
        ) * _LN2
    return ScalingCoefficient(log)


def _odd_prefactor(m, bp):
    log = math.log(scipy.special.comb(2 * m - 1, m, exact=True))
    log += gamma_beta_n(bp, m - 1).log_value + gamma_beta_n(bp, m).log_value
    log -= gamma_beta_n(bp, 2 * m - 1).log_value
    return log


def coefficient_Psi_odd(ensemble, N, m, l, beta, rho, u, lambda1=0.0, lambda2=0.0):
    """Bulk coefficient ``Psi^(l)_{N,2m-1}`` for odd ``n = 2m - 1``.
    ``l`` is 0 for the N-particle factor and 1 for the (N-1)-particle factor
    of the kernel combination. Complex factors use the principal branch.

    :rtype: :py:class:`ScalingCoefficient`
    """
    kind = EnsembleKind.parse(ensemble)
    _check_beta(beta, "coefficient_Psi_odd")
    if m < 1:
        raise fail(DomainError(f"coefficient_Psi_odd needs m >= 1, got {m}", "constants"))
    bp = 4 / beta
    n = 2 * m - 1
    lnN = math.log(N)
    log = _odd_prefactor(m, bp)
    if kind is EnsembleKind.HERMITE:
        log += (bp * (m * m - 1) / 2 - n / 2) * math.log(math.pi * rho)
        log += (bp * m * (m - 1) / 2) * lnN
        log += -n * N * (1 + _LN2 - lnN) / 2
        log += -n * l * 0.5 * (lnN - _LN2)
        log += _LN2 + 0.5 * math.log(math.pi * rho / 2) + 0.5j * math.pi
    elif kind is EnsembleKind.LAGUERRE:
        log += (bp * (m * m - 1) / 2 - m + 1) * math.log(math.pi * rho / 2)
        log += 0.5 * _LN2 + (1 - bp / 2) * math.log(2 * math.sqrt(u))
        log += (bp * m * (m - 1) / 2 + bp * n * lambda1 / 4) * lnN
        log += -n * N * (1 - lnN) + 1j * math.pi * ((n * N) % 2)
        log += -n * l * complex(lnN, math.pi)
    else:
        log += (bp * (m - 1) ** 2 / 2 + (bp - 2 * m + 1) / 2) * math.log(math.pi * rho)
        log += 0.5 * _LN2 + (1 - bp / 2) * math.log(2 * math.sqrt(u))
        log += (bp * m * (m - 1) / 2) * lnN
        log += -0.5j * math.pi + 1j * math.pi * ((n * (N - 1)) % 2)
        log += (
            -bp * m * (m + 1) / 2
            - bp * n * (lambda1 + lambda2) / 2
            + n * (1 - 2 * N + 2 * l)
            + 1
        ) * _LN2
        log += (n * l / 2) * math.log(1 - u) + 0.25 * math.log(u)
    return ScalingCoefficient(log)


def coefficient_xi(ensemble, N, n, beta, lambda1=0.0, lambda2=0.0):
    """Hard-edge coefficient ``xi_{N,n}``, the value of ``K_N`` at ``s = 0``:
    ``W_{l1+n}/W_{l1}`` (Laguerre) or ``S_N(l1+n, l2, beta/2)/S_N(l1, l2, beta/2)``
    (Jacobi). Computed as a ratio term by term.

    :rtype: :py:class:`ScalingCoefficient`
    """
    kind = EnsembleKind.parse(ensemble)
    N = _check_N(N, "coefficient_xi")
    _check_beta(beta, "coefficient_xi")
    _check_lambda(lambda1, "coefficient_xi", "lambda1")
    half = beta / 2
    if kind is EnsembleKind.LAGUERRE:
        log = n * N * math.log(2 / beta)
        for j in range(N):
            log += _lgamma(1 + lambda1 + n + j * half, "xi")
            log -= _lgamma(1 + lambda1 + j * half, "xi")
        return ScalingCoefficient(log)
    if kind is EnsembleKind.JACOBI:
        _check_lambda(lambda2, "coefficient_xi", "lambda2")
        log = 0j
        for j in range(N):
            log += _lgamma(1 + lambda1 + n + j * half, "xi")
            log -= _lgamma(1 + lambda1 + j * half, "xi")
            base = 2 + lambda1 + lambda2 + (N + j - 1) * half
            log -= _lgamma(base + n, "xi")
            log += _lgamma(base, "xi")
        return ScalingCoefficient(log)
    raise fail(
        CoefficientUndefinedError(
            "xi coefficient undefined for ensemble [hermite]", "constants"
        )
    )


def coefficient_a_k(beta, k):
    """Soft-edge correlation constant ``a_k(beta)``.

    :rtype: :py:class:`ScalingCoefficient`
    """
    _check_beta(beta, "coefficient_a_k")
    half = beta / 2
    log = (beta * k + 1) * k * math.log(half) + k * _lgamma(1 + half, "a_k")
    g = _lgamma(1 + 2 / beta, "a_k")
    for j in range(1, 2 * k + 1):
        log += half * g - _lgamma(1 + beta * j / 2, "a_k")
    return ScalingCoefficient(log)


def coefficient_b_k(beta, k):
    """Bulk correlation constant ``b_k(beta)``; ``b_1(2) = 1``.

    :rtype: :py:class:`ScalingCoefficient`
    """
    _check_beta(beta, "coefficient_b_k")
    half = beta / 2
    log = beta * k * (k - 1) / 2 * math.log(half) + k * _lgamma(1 + half, "b_k")
    for j in range(k):
        log += _lgamma(1 + beta * j / 2, "b_k") - _lgamma(1 + beta * (k + j) / 2, "b_k")
    return ScalingCoefficient(log)


def coefficient_gamma_m(beta_prime, m):
    """Even bulk constant
    ``gamma_m(b') = C(2m, m) prod_{j<=m} Gamma(1+b'j/2)/Gamma(1+b'(m+j)/2)``.
    ``beta_prime = 0`` (``beta = inf``) gives ``C(2m, m)``.

    :rtype: :py:class:`ScalingCoefficient`
    """
    if beta_prime < 0:
        raise fail(DomainError(f"beta' must be >= 0, got {beta_prime}", "constants"))
    log = math.log(scipy.special.comb(2 * m, m, exact=True))
    for j in range(1, m + 1):
        log += _lgamma(1 + beta_prime * j / 2, "gamma_m")
        log -= _lgamma(1 + beta_prime * (m + j) / 2, "gamma_m")
    return ScalingCoefficient(log)


def gamma_m_gauss(beta, k):
    """``gamma_m(4/beta)`` with ``2m = beta k`` through Gauss's multiplication
    formula: ``(beta/2)^(beta k^2/2) prod_{j<k} Gamma(1+beta j/2)/Gamma(1+beta(k+j)/2)``.
    Only meaningful for even ``beta``.

    :rtype: :py:class:`ScalingCoefficient`
    """
    if beta % 2:
        raise fail(DomainError(f"gamma_m_gauss needs even beta, got {beta}", "constants"))
    log = beta * k * k / 2 * math.log(beta / 2)
    for j in range(k):
        log += _lgamma(1 + beta * j / 2, "gamma_m") - _lgamma(1 + beta * (k + j) / 2, "gamma_m")
    return ScalingCoefficient(log)


def gaussian_ratio_asymptotic(beta, N, k):
    """Leading large-N form of ``G_{beta,N} / G_{beta,N+k}``:
    ``(2 pi^2)^(-k/2) 2^(beta k(k+1)/4) beta^(-beta k/2) Gamma(1+beta/2)^k
    (2e)^(beta k N/2) N^(-beta k N/2 - beta k(k+1)/4 - k/2)``.

    :rtype: :py:class:`ScalingCoefficient`
    """
    _check_beta(beta, "gaussian_ratio_asymptotic")
    lnN = math.log(N)
    log = -(k / 2) * (_LN2 + 2 * _LNPI)
    log += (beta * k * (k + 1) / 4) * _LN2 - (beta * k / 2) * math.log(beta)
    log += k * _lgamma(1 + beta / 2, "ratio")
    log += (beta * k * N / 2) * (_LN2 + 1)
    log += -(beta * k * N / 2 + beta * k * (k + 1) / 4 + k / 2) * lnN
    return ScalingCoefficient(log)


def laguerre_ratio_asymptotic(lambda1, beta, N, k):
    """Leading large-N form of ``W_{l1,beta,N} / W_{l1,beta,N+k}``.

    :rtype: :py:class:`ScalingCoefficient`
    """
    _check_beta(beta, "laguerre_ratio_asymptotic")
    lnN = math.log(N)
    log = -k * (_LN2 + _LNPI) - (beta * k / 2) * math.log(beta / 2)
    log += k * _lgamma(1 + beta / 2, "ratio") + beta * k * N
    log += -(beta * k * N + beta * k * k / 2 + (lambda1 + 1) * k) * lnN
    return ScalingCoefficient(log)


def selberg_ratio_asymptotic(lambda1, lambda2, beta, N, k):
    """Leading large-N form of
    ``S_N(l1, l2, beta/2) / S_{N+k}(l1, l2, beta/2)``.

    :rtype: :py:class:`ScalingCoefficient`
    """
    _check_beta(beta, "selberg_ratio_asymptotic")
    log = -k * _LNPI + k * _lgamma(1 + beta / 2, "ratio")
    log += (beta * (2 * N - 1 + k) * k + 2 * (lambda1 + lambda2 + 1) * k) * _LN2
    log += -(beta * k / 2) * math.log(beta * N)
    return ScalingCoefficient(log)


def normalization(ensemble, beta, N, lambda1=0.0, lambda2=0.0):
    """The normalization ``Z_N`` of the ensemble's density: ``G``, ``W`` or
    ``S`` with ``lambda3 = beta/2``."""
    kind = EnsembleKind.parse(ensemble)
    if kind is EnsembleKind.HERMITE:
        return gaussian_G(beta, N)
    if kind is EnsembleKind.LAGUERRE:
        return laguerre_W(lambda1, beta, N)
    return selberg_S(N, lambda1, lambda2, beta / 2)


def literal_product(name, **params):
    """Evaluates a constant as a plain product of gamma values, with no
    logarithms. Supports ``S``, ``W``, ``G`` and ``Gamma`` for small
    dimensions; used to audit the log route.

    :rtype: :py:class:`float`
    """
    gamma = scipy.special.gamma
    if name == "S":
        N, l1, l2, l3 = params["N"], params["lambda1"], params["lambda2"], params["lambda3"]
        return float(
            np.prod(
                [
                    gamma(1 + l3 + j * l3)
                    * gamma(1 + l1 + j * l3)
                    * gamma(1 + l2 + j * l3)
                    / (gamma(1 + l3) * gamma(2 + l1 + l2 + (N + j - 1) * l3))
                    for j in range(N)
                ]
            )
        )
    if name == "W":
        l1, beta, N = params["lambda1"], params["beta"], params["N"]
        value = (2 / beta) ** ((1 + l1) * N + beta * N * (N - 1) / 2)
        for j in range(N):
            value *= gamma(1 + beta / 2 + j * beta / 2) * gamma(1 + l1 + j * beta / 2)
            value /= gamma(1 + beta / 2)
        return float(value)
    if name == "G":
        beta, N = params["beta"], params["N"]
        value = beta ** (-N / 2 - beta * N * (N - 1) / 4) * (2 * math.pi) ** (N / 2)
        for j in range(N):
            value *= gamma(1 + beta / 2 + j * beta / 2) / gamma(1 + beta / 2)
        return float(value)
    if name == "Gamma":
        beta, n = params["beta"], params["n"]
        value = (2 * math.pi) ** (n / 2)
        for j in range(1, n + 1):
            value *= gamma(1 + j * beta / 2) / gamma(1 + beta / 2)
        return float(value)
    raise fail(DomainError(f"No literal product for constant [{name}]", "constants"))
