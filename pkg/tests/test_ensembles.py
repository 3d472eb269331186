import math

import numpy as np
import pytest
import scipy.special

from betacharpoly.errors import DomainError
from betacharpoly.errors import UnsupportedError
from betacharpoly.rmt.ensembles import DUALITY_QUADRATURE
from betacharpoly.rmt.ensembles import EXACT_SERIES
from betacharpoly.rmt.ensembles import MONTE_CARLO
from betacharpoly.rmt.ensembles import EnsembleSpec
from betacharpoly.rmt.ensembles import correlation_from_phi
from betacharpoly.rmt.ensembles import expect
from betacharpoly.rmt.ensembles import expect_hermite_dual
from betacharpoly.rmt.ensembles import expect_jacobi_exact
from betacharpoly.rmt.ensembles import expect_laguerre_exact
from betacharpoly.rmt.ensembles import mc_expect
from betacharpoly.rmt.ensembles import sample_ensemble
from betacharpoly.special.constants import coefficient_xi
from betacharpoly.symmetric.hyper import PrecisionPolicy


def test_laguerre_one_eigenvalue():
    spec = EnsembleSpec("l", 1, 2.0)
    assert expect_laguerre_exact(spec, [0.5]).K == pytest.approx(0.5)
    s1, s2 = 0.3, -1.2
    expected = 2 - (s1 + s2) + s1 * s2
    assert expect_laguerre_exact(spec, [s1, s2]).K == pytest.approx(expected, rel=1e-13)


def test_laguerre_weighted_value():
    result = expect_laguerre_exact(EnsembleSpec("l", 1, 2.0), [0.5])
    assert result.phi == pytest.approx(math.exp(-0.25) * 0.5, rel=1e-13)
    assert result.method == EXACT_SERIES
    assert result.stderr is None


@pytest.mark.parametrize("N, lambda1, s", [(5, 0.5, 1.3), (8, 0.0, 2.7), (3, 2.0, -0.4)])
def test_laguerre_beta2_is_a_laguerre_polynomial(N, lambda1, s):
    expected = math.factorial(N) * scipy.special.eval_genlaguerre(N, lambda1, s)
    K = expect_laguerre_exact(EnsembleSpec("l", N, 2.0, lambda1), [s]).K
    assert K.real == pytest.approx(expected, rel=1e-10)


@pytest.mark.parametrize("beta, n", [(1.0, 2), (2.0, 3), (4.0, 1)])
def test_laguerre_at_origin_is_xi(beta, n):
    N, lambda1 = 4, 0.5
    K = expect_laguerre_exact(EnsembleSpec("l", N, beta, lambda1), [0.0] * n).K
    xi = coefficient_xi("l", N, n, beta, lambda1).value
    assert K == pytest.approx(xi, rel=1e-11)


def test_jacobi_one_eigenvalue():
    assert expect_jacobi_exact(EnsembleSpec("j", 1, 2.0), [0.2]).K == pytest.approx(0.3)


@pytest.mark.parametrize("N, lambda1, lambda2, s", [(3, 0.5, 1.5, 0.3), (6, 0.0, 0.0, 0.8)])
def test_jacobi_beta2_is_a_jacobi_polynomial(N, lambda1, lambda2, s):
    lead = math.gamma(2 * N + lambda1 + lambda2 + 1) / (
        math.factorial(N) * math.gamma(N + lambda1 + lambda2 + 1)
    )
    monic = scipy.special.eval_jacobi(N, lambda2, lambda1, 2 * s - 1) / lead
    K = expect_jacobi_exact(EnsembleSpec("j", N, 2.0, lambda1, lambda2), [s]).K
    assert K.real == pytest.approx((-1) ** N * monic, rel=1e-10)


def test_no_points_gives_one():
    for spec in (EnsembleSpec("l", 3, 1.0), EnsembleSpec("j", 3, 1.0), EnsembleSpec("h", 3, 1.0)):
        assert expect(spec, []).K == 1


@pytest.mark.parametrize("N", [1, 4, 7])
def test_hermite_beta2_is_a_hermite_polynomial(N):
    s = 0.7
    expected = (-1) ** N * scipy.special.eval_hermite(N, s) / 2 ** N
    result = expect_hermite_dual(EnsembleSpec("h", N, 2.0), [s])
    assert result.method == DUALITY_QUADRATURE
    assert result.K.real == pytest.approx(expected, rel=1e-9)
    assert abs(result.K.imag) <= 1e-9 * max(1.0, abs(expected))


def test_hermite_two_points_one_eigenvalue():
    s1, s2 = 0.3, -0.8
    result = expect_hermite_dual(EnsembleSpec("h", 1, 2.0), [s1, s2])
    assert result.K.real == pytest.approx(0.5 + s1 * s2, rel=1e-9)


def test_hermite_dual_domain():
    with pytest.raises(UnsupportedError):
        expect_hermite_dual(EnsembleSpec("h", 3, 2.0), [0.1, 0.2, 0.3])
    with pytest.raises(UnsupportedError):
        expect_hermite_dual(EnsembleSpec("h", 3, 3.0), [0.1, 0.2])
    with pytest.raises(DomainError):
        expect_hermite_dual(EnsembleSpec("l", 3, 2.0), [0.1])
    with pytest.raises(UnsupportedError):
        expect(EnsembleSpec("h", 3, 2.0), [0.1], method=EXACT_SERIES)


def test_spec_validation():
    with pytest.raises(DomainError):
        EnsembleSpec("l", 0, 2.0)
    with pytest.raises(DomainError):
        EnsembleSpec("h", 3, math.inf)
    with pytest.raises(DomainError):
        EnsembleSpec("j", 3, 2.0, 0.0, -1.0)
    assert EnsembleSpec("l", 3, 2.0).with_N(5).N == 5


def test_double_precision_limit():
    spec = EnsembleSpec("l", 100, 2.0)
    with pytest.raises(DomainError):
        expect_laguerre_exact(spec, [0.5], PrecisionPolicy(extended=False))


def test_sample_shapes_and_supports():
    assert sample_ensemble(EnsembleSpec("h", 4, 2.0), seed=1).shape == (4,)
    laguerre = sample_ensemble(EnsembleSpec("l", 4, 1.0, 0.5), seed=1, draws=300)
    assert laguerre.shape == (300, 4)
    assert np.all(laguerre > 0)
    jacobi = sample_ensemble(EnsembleSpec("j", 4, 1.0, 0.5, 1.0), seed=1, draws=300)
    assert np.all((jacobi > 0) & (jacobi < 1))


def test_hermite_sample_second_moment():
    N, beta = 3, 2.0
    values = sample_ensemble(EnsembleSpec("h", N, beta), seed=7, draws=20000)
    expected = (N + beta * N * (N - 1) / 2) / beta
    assert np.mean(np.sum(values ** 2, axis=1)) == pytest.approx(expected, rel=2e-2)


def test_laguerre_sample_first_moment():
    N, beta, lambda1 = 3, 1.0, 0.5
    values = sample_ensemble(EnsembleSpec("l", N, beta, lambda1), seed=7, draws=20000)
    expected = (2 / beta) * (N * (lambda1 + 1) + beta * N * (N - 1) / 2)
    assert np.mean(np.sum(values, axis=1)) == pytest.approx(expected, rel=2e-2)


@pytest.mark.parametrize(
    "spec, s",
    [
        (EnsembleSpec("l", 4, 1.0, 0.5), [0.5]),
        (EnsembleSpec("j", 3, 4.0, 0.5, 1.0), [0.3, 0.6]),
        (EnsembleSpec("l", 2, 2.0), [1.0 + 0.5j]),
    ],
)
def test_monte_carlo_matches_series(spec, s):
    exact = expect(spec, s).K
    mc = mc_expect(spec, s, draws=20000, seed=3)
    assert mc.method == MONTE_CARLO
    assert abs(mc.K - exact) <= 4 * mc.stderr


def test_monte_carlo_matches_hermite_duality():
    spec = EnsembleSpec("h", 3, 1.0)
    exact = expect(spec, [0.3]).K
    mc = mc_expect(spec, [0.3], draws=20000, seed=11)
    assert abs(mc.K - exact) <= 4 * mc.stderr


def test_monte_carlo_is_deterministic():
    spec = EnsembleSpec("j", 5, 1.5, 0.2, 0.4)
    first = mc_expect(spec, [0.4], draws=3000, seed=42)
    again = mc_expect(spec, [0.4], draws=3000, seed=42, workers=3)
    other = mc_expect(spec, [0.4], draws=3000, seed=43)
    assert first.K == again.K
    assert first.stderr == again.stderr
    assert first.K != other.K


def test_monte_carlo_needs_enough_draws():
    with pytest.raises(DomainError):
        mc_expect(EnsembleSpec("l", 3, 2.0), [0.1], draws=10)


def test_auto_route_for_many_hermite_points():
    result = expect(EnsembleSpec("h", 2, 2.0), [0.1, 0.2, 0.3], draws=2000, seed=1)
    assert result.method == MONTE_CARLO


def test_laguerre_density_from_phi():
    x = 0.8
    value = correlation_from_phi(EnsembleSpec("l", 1, 2.0), [x])
    assert value == pytest.approx((1 + (1 - x) ** 2) * math.exp(-x), rel=1e-10)


def test_hermite_density_from_phi():
    x = 0.4
    value = correlation_from_phi(EnsembleSpec("h", 1, 2.0), [x])
    expected = (1 + 2 * x * x) * math.exp(-x * x) / math.sqrt(math.pi)
    assert value == pytest.approx(expected, rel=1e-8)


def test_correlation_needs_even_beta():
    with pytest.raises(DomainError):
        correlation_from_phi(EnsembleSpec("l", 3, 1.0), [0.5])


@pytest.mark.parametrize(
    "spec, s",
    [
        (EnsembleSpec("l", 2, 2.0, 0.5), [0.0]),
        (EnsembleSpec("j", 2, 2.0, 0.5, 0.5), [0.0]),
        (EnsembleSpec("j", 2, 2.0, 0.5, 0.5), [1.0]),
    ],
)
def test_weight_vanishes_on_endpoints(spec, s):
    result = expect(spec, s)
    assert math.isfinite(abs(result.K))
    assert result.phi == 0


def test_jacobi_endpoint_values():
    spec = EnsembleSpec("j", 1, 2.0, 0.5, 0.5)
    assert expect(spec, [0.0]).K == pytest.approx(0.5)
    assert expect(spec, [1.0]).K == pytest.approx(-0.5)


def test_negative_exponent_endpoint(caplog):
    spec = EnsembleSpec("l", 2, 2.0, -0.5)
    result = expect(spec, [0.0])
    assert result.K == pytest.approx(coefficient_xi("l", 2, 1, 2.0, -0.5).value, rel=1e-11)
    assert math.isinf(abs(result.phi))
    assert "phi is infinite" in caplog.text
    with pytest.raises(DomainError):
        spec.weight([0.0])
    with pytest.raises(DomainError):
        spec.potential(0.0)


def test_weight_matches_potential_inside_support():
    spec = EnsembleSpec("j", 3, 1.5, 0.7, -0.3)
    s = [0.2, 0.65]
    expected = math.exp(-sum(spec.potential(v).real for v in s) / 2)
    assert complex(spec.weight(s)) == pytest.approx(expected, rel=1e-13)
