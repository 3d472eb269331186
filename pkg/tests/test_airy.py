import logging
import math

import pytest
import scipy.special

from betacharpoly.errors import DomainError
from betacharpoly.errors import QuadratureError
from betacharpoly.errors import UnsupportedError
from betacharpoly.special.airy import AiryQuadSpec
from betacharpoly.special.airy import airy_asymptotic_left
from betacharpoly.special.airy import airy_asymptotic_right
from betacharpoly.special.airy import airy_equal_argument
from betacharpoly.special.airy import airy_infinite
from betacharpoly.special.airy import airy_multivariate
from betacharpoly.special.airy import classical_airy_derivatives


def _ai(u):
    return scipy.special.airy(u)[0]


def _aip(u):
    return scipy.special.airy(u)[1]


def _two_point_closed_form(s1, s2):
    """Ai^(1)(s1, s2) = -2 (Ai'(s1) Ai(s2) - Ai(s1) Ai'(s2)) / (s1 - s2)."""
    return -2 * (_aip(s1) * _ai(s2) - _ai(s1) * _aip(s2)) / (s1 - s2)


def test_classical_derivatives():
    u = 0.7
    values = classical_airy_derivatives(u, 3)
    assert values[0] == pytest.approx(_ai(u))
    assert values[1] == pytest.approx(_aip(u))
    assert values[2] == pytest.approx(u * _ai(u))
    assert values[3] == pytest.approx(_ai(u) + u * _aip(u))


@pytest.mark.parametrize("alpha", [0.5, 1.0, math.inf])
@pytest.mark.parametrize("s", [0.0, 1.3, -2.0])
def test_one_variable_is_classical_airy(alpha, s):
    value = airy_multivariate(AiryQuadSpec(alpha, 1), [s])
    assert value.method == "rays"
    assert value.value == pytest.approx(_ai(s), rel=1e-9, abs=1e-12)
    assert abs(value.im_residual) < 1e-10


def test_airy_at_zero():
    assert airy_multivariate(AiryQuadSpec(2.0, 1), [0.0]).value == pytest.approx(0.355028053887817, rel=1e-10)


@pytest.mark.parametrize("method", ["rays", "pair"])
def test_infinite_alpha_is_a_product(method):
    s = [0.4, -0.9]
    value = airy_multivariate(AiryQuadSpec(math.inf, 2, method=method), s).value
    assert value == pytest.approx(airy_infinite(s), rel=1e-8)
    assert airy_infinite(s) == pytest.approx(_ai(0.4) * _ai(-0.9))


@pytest.mark.parametrize("method", ["rays", "pair"])
def test_alpha_one_matches_wronskian_form(method):
    s1, s2 = 0.3, -0.2
    value = airy_multivariate(AiryQuadSpec(1.0, 2, method=method), [s1, s2]).value
    assert value == pytest.approx(_two_point_closed_form(s1, s2), rel=1e-7)


@pytest.mark.parametrize("u", [-1.5, 0.0, 0.8])
def test_equal_arguments(u):
    expected = 2 * (_aip(u) ** 2 - u * _ai(u) ** 2)
    assert airy_equal_argument(2, u) == pytest.approx(expected, rel=1e-12)
    assert airy_multivariate(AiryQuadSpec(1.0, 2), [u, u]).value == pytest.approx(expected, rel=1e-7)


def test_pair_and_rays_agree_for_even_powers():
    s = [0.1, 0.6]
    pair = airy_multivariate(AiryQuadSpec(0.5, 2, method="pair"), s)
    rays = airy_multivariate(AiryQuadSpec(0.5, 2, method="rays"), s)
    assert pair.value == pytest.approx(rays.value, rel=1e-6)


def test_auto_route_for_two_variables_is_pair():
    value = airy_multivariate(AiryQuadSpec(0.75, 2), [0.2, -0.3])
    assert value.method == "pair"
    assert not value.experimental
    assert math.isfinite(value.value)


def test_non_analytic_power_needs_the_pair_route():
    with pytest.raises(UnsupportedError):
        airy_multivariate(AiryQuadSpec(0.75, 2, method="rays"), [0.2, -0.3])
    with pytest.raises(UnsupportedError):
        airy_multivariate(AiryQuadSpec(1.0, 3, method="pair"), [0.1, 0.2, 0.3])


def test_damping_is_experimental(caplog):
    with caplog.at_level(logging.WARNING, logger="betacharpoly.special.airy"):
        value = airy_multivariate(AiryQuadSpec(1.0, 2, damping=0.2, nodes_per_axis=81), [0.3, -0.2])
    assert value.method == "damping"
    assert value.experimental
    assert "experimental" in caplog.text
    assert math.isfinite(value.value)


@pytest.mark.slow
def test_three_variables_at_infinite_alpha():
    s = [0.2, -0.5, 1.0]
    spec = AiryQuadSpec(math.inf, 3, nodes_per_axis=81, max_nodes_per_axis=161, rel_tol=1e-3)
    value = airy_multivariate(spec, s)
    assert value.value == pytest.approx(airy_infinite(s), rel=1e-6)
    assert value.est_error < 1e-3 * abs(value.value)


def test_rays_error_estimate_covers_the_error():
    value = airy_multivariate(AiryQuadSpec(2.0, 1), [0.4])
    exact = scipy.special.airy(0.4)[0]
    assert value.est_error <= 1e-8 * abs(value.value)
    assert abs(value.value - exact) <= max(10 * value.est_error, 1e-13)


def test_rays_give_up_without_agreement():
    spec = AiryQuadSpec(2.0, 1, nodes_per_axis=9, max_nodes_per_axis=9, rel_tol=1e-14)
    with pytest.raises(QuadratureError):
        airy_multivariate(spec, [0.4])
    with pytest.raises(DomainError):
        AiryQuadSpec(2.0, 1, nodes_per_axis=81, max_nodes_per_axis=41)


def test_spec_validation():
    with pytest.raises(UnsupportedError):
        AiryQuadSpec(1.0, 4)
    with pytest.raises(DomainError):
        AiryQuadSpec(0.0, 1)
    with pytest.raises(DomainError):
        AiryQuadSpec(1.0, 2, rotation_angle=1.0)
    with pytest.raises(DomainError):
        AiryQuadSpec(1.0, 2, method="simpson")
    with pytest.raises(DomainError):
        airy_multivariate(AiryQuadSpec(1.0, 2), [0.1])


def test_right_asymptotics_one_variable():
    x, s = 30.0, 0.5
    exact = _ai(x + s / math.sqrt(x))
    assert airy_asymptotic_right(2.0, 1, x, [s]) == pytest.approx(exact, rel=1e-2)
    assert airy_asymptotic_right(2.0, 1, 8.0, [0.0]) == pytest.approx(_ai(8.0), rel=2e-2)


def test_right_asymptotics_two_variables():
    x = 30.0
    assert airy_asymptotic_right(1.0, 2, x, [0.0, 0.0]) == pytest.approx(airy_equal_argument(2, x), rel=5e-2)


def test_left_asymptotics():
    x = 10.0
    s = [0.5, -0.5]
    shifted = [-x + v / math.sqrt(x) for v in s]
    exact = _two_point_closed_form(*shifted)
    approx = airy_asymptotic_left(1.0, 1, x, s)
    assert abs(approx.imag) < 1e-10
    assert approx.real == pytest.approx(exact, rel=0.1)
    # the leading term carries a sinc in the shifts
    assert approx.real == pytest.approx(2 * math.sqrt(x) / math.pi * math.sin(1.0), rel=1e-8)


def test_asymptotics_domain():
    with pytest.raises(DomainError):
        airy_asymptotic_right(1.0, 1, -1.0, [0.0])
    with pytest.raises(DomainError):
        airy_asymptotic_left(1.0, 1, 2.0, [0.0])
