import cmath
import math

import pytest
import scipy.special

from betacharpoly.errors import DomainError
from betacharpoly.errors import UnsupportedError
from betacharpoly.special.asymptotics import PhaseFunction
from betacharpoly.special.asymptotics import SelbergIntegralSpec
from betacharpoly.special.asymptotics import abs_power_via_Hnu
from betacharpoly.special.asymptotics import branch_phase
from betacharpoly.special.asymptotics import brute_selberg
from betacharpoly.special.asymptotics import c_nu
from betacharpoly.special.asymptotics import h_nu
from betacharpoly.special.asymptotics import laplace_one_saddle
from betacharpoly.special.asymptotics import leading_coefficient_closed_form
from betacharpoly.special.asymptotics import leading_coefficient_quadrature
from betacharpoly.special.asymptotics import log_root
from betacharpoly.special.asymptotics import watson_coefficient_quadrature
from betacharpoly.special.asymptotics import watson_leading
from betacharpoly.special.asymptotics import worked_case


def test_branch_phase():
    assert branch_phase(1.0, 2, 0.0) == pytest.approx(0.0)
    assert branch_phase(-1.0, 2, math.pi / 2) == pytest.approx(-math.pi)
    assert branch_phase(1.0, 3, 2 * math.pi / 3) == pytest.approx(-2 * math.pi)


def test_branch_phase_rejects_ascent():
    with pytest.raises(DomainError):
        branch_phase(1.0, 2, math.pi / 2)


def test_log_root():
    assert log_root(4.0, 2, 0.0) == pytest.approx(math.log(2))
    assert cmath.exp(log_root(-4.0, 2, math.pi / 2)) == pytest.approx(-2j)


def test_saddle_must_be_a_critical_point():
    with pytest.raises(DomainError):
        PhaseFunction(lambda t: t ** 3 / 3 + t, (lambda t: t * t + 1, lambda t: 2 * t), saddle=0.0)


def test_saddle_is_polished():
    phase = PhaseFunction(lambda t: t * t / 2 - t, (lambda t: t - 1, lambda t: 1 + 0 * t), saddle=0.9)
    assert phase.saddle == pytest.approx(1.0, abs=1e-14)
    assert phase.slope == pytest.approx(0.0)


def test_exactly_one_saddle_declaration():
    derivs = (lambda t: t, lambda t: 1 + 0 * t)
    with pytest.raises(DomainError):
        PhaseFunction(lambda t: t * t / 2, derivs)
    with pytest.raises(DomainError):
        PhaseFunction(lambda t: t * t / 2, derivs, saddle=0.0, saddles=(0.0, 0.0))


def test_gaussian_closed_form():
    assert leading_coefficient_closed_form(1.0, 2, 0.0, 1) == pytest.approx(math.sqrt(math.pi))
    # Mehta: int e^(-|w|^2/2) (w1 - w2)^2 dw = 4 pi
    assert leading_coefficient_closed_form(0.5, 2, 2.0, 2) == pytest.approx(4 * math.pi)


def test_cubic_closed_form_matches_quadrature():
    slope_in = 2 * math.pi / 3
    closed = leading_coefficient_closed_form(1.0, 3, 0.0, 1, 0.0, slope_in)
    assert closed == pytest.approx(math.gamma(4 / 3) * (1 - cmath.exp(2j * math.pi / 3)))
    quad = leading_coefficient_quadrature(1.0, 3, 0.0, 1, slope_out=0.0, slope_in=slope_in)
    assert quad.value == pytest.approx(closed, rel=1e-7)


def test_mehta_closed_form_matches_quadrature():
    quad = leading_coefficient_quadrature(0.5, 2, 2.0, 2)
    assert quad.value == pytest.approx(4 * math.pi, rel=1e-7)


def test_quadrature_rejects_divergent_rays():
    with pytest.raises(DomainError):
        leading_coefficient_quadrature(1.0, 2, 0.0, 1, slope_out=math.pi / 2)


def test_quadrature_dimension_limit():
    with pytest.raises(UnsupportedError):
        leading_coefficient_quadrature(0.5, 2, 2.0, 4)


def test_watson_leading():
    term = watson_leading(1.0, 2.0, 2)
    assert term.coefficient == pytest.approx(2)
    assert term.exponent == 4
    assert term.at(2.0) == pytest.approx(2 / 16)
    one = watson_leading(2.5, 0.0, 1)
    assert one.coefficient == pytest.approx(math.gamma(2.5))


def test_watson_nonuniform_lambda_unsupported():
    with pytest.raises(UnsupportedError):
        watson_leading([1.0, 2.0], 2.0, 2)


def test_watson_coefficient_by_quadrature():
    result = watson_coefficient_quadrature(1.0, 2.0, 2)
    assert result.value.real == pytest.approx(2.0, rel=1e-7)
    mixed = watson_coefficient_quadrature([1.0, 2.0], 0.0, 2)
    assert mixed.value.real == pytest.approx(1.0, rel=1e-7)


def test_watson_worked_case_is_exact():
    for N in (5, 10):
        row = worked_case("watson2", N)
        assert row["brute_re"] == pytest.approx(2 / (N + 0.1) ** 4, rel=1e-7)
        assert row["ratio_re"] == pytest.approx((N / (N + 0.1)) ** 4, rel=1e-7)


def test_watson_worked_case_ratio_tends_to_one():
    at_50 = worked_case("watson2", 50)
    at_100 = worked_case("watson2", 100)
    assert at_50["brute_re"] == pytest.approx(2 / 50 ** 4, rel=2e-2)
    assert abs(at_50["ratio_re"] - 1) < 0.02
    assert abs(at_100["ratio_re"] - 1) < abs(at_50["ratio_re"] - 1)


def test_gauss_worked_case_has_unit_ratio():
    row = worked_case("gauss2", 20)
    assert row["ratio_re"] == pytest.approx(1.0, rel=1e-7)
    assert row["ratio_im"] == pytest.approx(0.0, abs=1e-7)


def test_airy_worked_case():
    rows = [worked_case("airy1", N) for N in (10, 20, 40)]
    for row in rows:
        N = row["N"]
        expected = 2 * math.pi * N ** (-1 / 3) * scipy.special.airy(N ** (2 / 3))[0]
        assert row["brute_re"] == pytest.approx(expected, rel=1e-7)
    errors = [abs(complex(r["ratio_re"], r["ratio_im"]) - 1) for r in rows]
    assert errors[0] > errors[1] > errors[2]
    assert errors[2] < 1e-2


@pytest.mark.slow
def test_two_saddle_worked_case():
    row = worked_case("twosaddle2", 20)
    assert abs(complex(row["ratio_re"], row["ratio_im"]) - 1) < 0.1


def test_unknown_worked_case():
    with pytest.raises(DomainError):
        worked_case("watson3", 10)


def test_laplace_matches_brute_for_a_shifted_gaussian():
    phase = PhaseFunction(lambda t: (t - 0.5) ** 2, (lambda t: 2 * (t - 0.5), lambda t: 2 + 0 * t), saddle=0.5)
    spec = SelbergIntegralSpec(phase, 1, 0.0, domain=(-4.0, 0.5, 5.0))
    N = 3.0
    assert laplace_one_saddle(spec, N=N) == pytest.approx(math.sqrt(math.pi / N), rel=1e-12)
    assert brute_selberg(spec, N).value == pytest.approx(math.sqrt(math.pi / N), rel=1e-8)


def test_c_nu_and_h_nu():
    assert c_nu(1.0) == pytest.approx(2 / math.pi)
    for r in (0.01, 0.5, 3.0):
        assert h_nu(1.0, r) == pytest.approx(1 - math.cos(r), rel=1e-10)
    assert h_nu(3.0, 0.2) == pytest.approx(1 - 0.02 - math.cos(0.2), rel=1e-8)


@pytest.mark.parametrize("nu", [2.0, 4.0, -1.0])
def test_degenerate_nu_rejected(nu):
    with pytest.raises(DomainError):
        c_nu(nu)


@pytest.mark.parametrize("nu, x", [(1.0, 0.7), (0.5, -1.3), (1.5, 2.0), (3.0, 0.9)])
def test_abs_power_via_Hnu(nu, x):
    assert abs_power_via_Hnu(nu, x) == pytest.approx(abs(x) ** nu, rel=1e-5)


def test_abs_power_at_zero():
    assert abs_power_via_Hnu(1.0, 0.0) == 0.0
    with pytest.raises(DomainError):
        abs_power_via_Hnu(-0.5, 0.0)
