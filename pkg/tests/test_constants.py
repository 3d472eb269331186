import math

import mpmath
import pytest
import scipy.integrate
import scipy.special

from betacharpoly.errors import CoefficientUndefinedError
from betacharpoly.errors import DomainError
from betacharpoly.special.constants import EnsembleKind
from betacharpoly.special.constants import ScalingCoefficient
from betacharpoly.special.constants import bulk_density
from betacharpoly.special.constants import coefficient_a_k
from betacharpoly.special.constants import coefficient_b_k
from betacharpoly.special.constants import coefficient_gamma_m
from betacharpoly.special.constants import coefficient_Phi
from betacharpoly.special.constants import coefficient_Psi_even
from betacharpoly.special.constants import coefficient_Psi_odd
from betacharpoly.special.constants import coefficient_xi
from betacharpoly.special.constants import gamma_beta_n
from betacharpoly.special.constants import gamma_m_gauss
from betacharpoly.special.constants import gaussian_G
from betacharpoly.special.constants import gaussian_ratio_asymptotic
from betacharpoly.special.constants import laguerre_ratio_asymptotic
from betacharpoly.special.constants import laguerre_W
from betacharpoly.special.constants import literal_product
from betacharpoly.special.constants import morris_M
from betacharpoly.special.constants import selberg_ratio_asymptotic
from betacharpoly.special.constants import selberg_S


def test_scaling_coefficient_phase_is_wrapped():
    c = ScalingCoefficient(complex(1.0, 3 * math.pi))
    assert c.phase == pytest.approx(math.pi)
    assert (c * c).phase == pytest.approx(0.0, abs=1e-12)
    assert (c / c).value == pytest.approx(1)


def test_scaling_coefficient_survives_overflow():
    big = ScalingCoefficient(1000.0)
    assert float(mpmath.log(big.mp_value).real) == pytest.approx(1000.0)
    assert (big / big).value == pytest.approx(1)
    with pytest.raises(DomainError):
        ScalingCoefficient.from_value(0)


@pytest.mark.parametrize("lambda1, lambda2", [(0.0, 0.0), (1.5, 0.3), (-0.5, 2.0)])
def test_selberg_one_variable_is_beta(lambda1, lambda2):
    expected = scipy.special.beta(lambda1 + 1, lambda2 + 1)
    assert selberg_S(1, lambda1, lambda2, 0.7).value.real == pytest.approx(expected, rel=1e-13)


def test_selberg_two_variables():
    assert selberg_S(2, 0, 0, 1).value.real == pytest.approx(1 / 6, rel=1e-13)


def test_selberg_three_variables_against_quadrature():
    def f(z, y, x):
        return x * y * z * (x - y) * (x - z) * (y - z)

    # ordered region z < y < x, times 3!
    value, _ = scipy.integrate.tplquad(f, 0, 1, 0, lambda x: x, 0, lambda x, y: y, epsabs=1e-13)
    assert selberg_S(3, 1, 0, 0.5).value.real == pytest.approx(6 * value, rel=1e-7)


@pytest.mark.parametrize("N, l1, l2, l3", [(2, 0.5, 1.0, 0.5), (4, 0.0, 0.0, 1.0), (5, 2.0, -0.5, 2.0)])
def test_selberg_log_route_matches_literal_product(N, l1, l2, l3):
    literal = literal_product("S", N=N, lambda1=l1, lambda2=l2, lambda3=l3)
    assert selberg_S(N, l1, l2, l3).value.real == pytest.approx(literal, rel=1e-12)


def test_selberg_domain():
    with pytest.raises(DomainError):
        selberg_S(2, -1.0, 0, 1)
    with pytest.raises(DomainError):
        selberg_S(2, 0, 0, 0)


@pytest.mark.parametrize("lambda1", [0.0, 0.5, 3.0])
def test_laguerre_W_one_variable(lambda1):
    assert laguerre_W(lambda1, 2.0, 1).value.real == pytest.approx(math.gamma(1 + lambda1), rel=1e-13)


@pytest.mark.parametrize("beta, N, lambda1", [(1.0, 3, 0.5), (2.0, 4, 0.0), (4.0, 2, 1.0)])
def test_laguerre_W_literal(beta, N, lambda1):
    literal = literal_product("W", lambda1=lambda1, beta=beta, N=N)
    assert laguerre_W(lambda1, beta, N).value.real == pytest.approx(literal, rel=1e-12)


@pytest.mark.parametrize("beta", [0.5, 1.0, 2.0, 4.0])
def test_gaussian_G_one_variable(beta):
    assert gaussian_G(beta, 1).value.real == pytest.approx(math.sqrt(2 * math.pi / beta), rel=1e-13)


def test_gaussian_G_two_variables_against_quadrature():
    value, _ = scipy.integrate.dblquad(
        lambda y, x: math.exp(-(x * x + y * y)) * (x - y) ** 2, -9, 9, -9, 9, epsabs=1e-12
    )
    assert gaussian_G(2.0, 2).value.real == pytest.approx(value, rel=1e-6)
    assert value == pytest.approx(math.pi, rel=1e-6)


@pytest.mark.parametrize("beta", [0.0, 1.0, 2.0, 4.0])
def test_gamma_beta_one_variable(beta):
    assert gamma_beta_n(beta, 1).value.real == pytest.approx(math.sqrt(2 * math.pi), rel=1e-13)


def test_gamma_beta_two_variables():
    assert gamma_beta_n(2.0, 2).value.real == pytest.approx(4 * math.pi, rel=1e-13)
    # E[(x - y)^4] = 12 for independent standard normals
    assert gamma_beta_n(4.0, 2).value.real == pytest.approx(24 * math.pi, rel=1e-13)


def test_gamma_beta_against_quadrature():
    value, _ = scipy.integrate.dblquad(
        lambda y, x: math.exp(-(x * x + y * y) / 2) * (x - y) ** 4, -12, 12, -12, 12, epsabs=1e-10
    )
    assert gamma_beta_n(4.0, 2).value.real == pytest.approx(value, rel=1e-6)


@pytest.mark.parametrize("a, b", [(0.5, 1.5), (2.0, 0.0), (1.0, 1.0)])
def test_morris_one_variable(a, b):
    expected = math.gamma(1 + a + b) / (math.gamma(1 + a) * math.gamma(1 + b))
    assert morris_M(1, a, b, 0.7).value.real == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize("n, alpha", [(1, 0.5), (3, 1.0), (4, 2.5)])
def test_morris_trivial_exponents_telescope(n, alpha):
    expected = math.gamma(1 + n * alpha) / math.gamma(1 + alpha) ** n
    assert morris_M(n, 0, 0, alpha).value == pytest.approx(expected, rel=1e-12)


def test_morris_three_variables_at_alpha_one():
    assert morris_M(3, 0, 0, 1.0).value == pytest.approx(6.0, rel=1e-13)


def test_morris_direct_product():
    gamma = math.gamma
    expected = 1.0
    for j in range(2):
        expected *= gamma(1.5 + 0.5 * j) * gamma(3 + 0.5 * j)
        expected /= gamma(1.5) * gamma(2 + 0.5 * j) ** 2
    value = morris_M(2, 1, 1, 0.5).value
    assert value.real > 0
    assert value.real == pytest.approx(expected, rel=1e-13)


def test_bulk_densities():
    assert bulk_density("h", 0.0) == pytest.approx(2 / math.pi)
    assert bulk_density("l", 0.5) == pytest.approx(2 / math.pi)
    assert bulk_density("j", 0.5) == pytest.approx(2 / math.pi)
    with pytest.raises(DomainError):
        bulk_density("l", 1.2)


@pytest.mark.parametrize("ensemble", ["h", "l", "j"])
def test_bulk_densities_integrate_to_one(ensemble):
    lo, hi = (-1, 1) if ensemble == "h" else (0, 1)
    value, _ = scipy.integrate.quad(lambda u: bulk_density(ensemble, u), lo, hi, limit=200)
    assert value == pytest.approx(1, rel=1e-6)


def test_coefficient_examples():
    assert coefficient_gamma_m(2.0, 1).value.real == pytest.approx(1)
    assert coefficient_gamma_m(0.0, 2).value.real == pytest.approx(6)
    assert coefficient_xi("l", 1, 1, 2.0, 0.0).value.real == pytest.approx(1)
    assert coefficient_b_k(2.0, 1).value.real == pytest.approx(1)
    assert coefficient_a_k(2.0, 1).value.real == pytest.approx(0.5)


@pytest.mark.parametrize("beta, k", [(2.0, 1), (2.0, 2), (4.0, 1), (4.0, 2), (6.0, 1)])
def test_gamma_m_gauss_multiplication(beta, k):
    m = round(beta * k / 2)
    direct = coefficient_gamma_m(4 / beta, m).value.real
    assert gamma_m_gauss(beta, k).value.real == pytest.approx(direct, rel=1e-10)


def test_xi_is_a_ratio_of_normalizations():
    N, n, beta, l1, l2 = 4, 2, 2.5, 0.5, 1.0
    laguerre = laguerre_W(l1 + n, beta, N) / laguerre_W(l1, beta, N)
    assert coefficient_xi("l", N, n, beta, l1).value == pytest.approx(laguerre.value, rel=1e-12)
    jacobi = selberg_S(N, l1 + n, l2, beta / 2) / selberg_S(N, l1, l2, beta / 2)
    assert coefficient_xi("j", N, n, beta, l1, l2).value == pytest.approx(jacobi.value, rel=1e-12)


def test_undefined_coefficients():
    with pytest.raises(CoefficientUndefinedError):
        coefficient_Phi("j", 10, 1, 2.0)
    with pytest.raises(CoefficientUndefinedError):
        coefficient_xi("h", 10, 1, 2.0)


def test_psi_coefficients_are_finite_at_large_N():
    rho = bulk_density("l", 0.5)
    even = coefficient_Psi_even(EnsembleKind.LAGUERRE, 500, 2, 2.0, rho)
    odd = coefficient_Psi_odd("l", 500, 2, 1, 2.0, rho, 0.5)
    assert math.isfinite(even.log_value.real)
    assert math.isfinite(odd.log_value.real)
    assert coefficient_Phi("h", 10 ** 6, 2, 2.0).log_value.real > 1e6


@pytest.mark.parametrize("beta, k", [(2.0, 1), (1.0, 2), (4.0, 1)])
def test_gaussian_ratio_asymptotic(beta, k):
    N = 2000
    exact = (gaussian_G(beta, N) / gaussian_G(beta, N + k)).log_value.real
    approx = gaussian_ratio_asymptotic(beta, N, k).log_value.real
    assert approx - exact == pytest.approx(0, abs=5e-3)


@pytest.mark.parametrize("beta, k", [(2.0, 1), (1.0, 2)])
def test_laguerre_ratio_asymptotic(beta, k):
    N = 2000
    exact = (laguerre_W(0.5, beta, N) / laguerre_W(0.5, beta, N + k)).log_value.real
    approx = laguerre_ratio_asymptotic(0.5, beta, N, k).log_value.real
    assert approx - exact == pytest.approx(0, abs=5e-3)


def test_selberg_ratio_asymptotic():
    N = 2000
    exact = (selberg_S(N, 0.5, 1.0, 1.0) / selberg_S(N + 1, 0.5, 1.0, 1.0)).log_value.real
    approx = selberg_ratio_asymptotic(0.5, 1.0, 2.0, N, 1).log_value.real
    assert approx - exact == pytest.approx(0, abs=5e-3)


def test_ensemble_kind_parse():
    assert EnsembleKind.parse("Laguerre") is EnsembleKind.LAGUERRE
    assert EnsembleKind.parse("j") is EnsembleKind.JACOBI
    with pytest.raises(DomainError):
        EnsembleKind.parse("x")
