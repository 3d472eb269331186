import cmath
import itertools
import math
import random

import pytest
import scipy.special

from betacharpoly.errors import DomainError
from betacharpoly.errors import TruncationNotConvergedError
from betacharpoly.symmetric.hyper import HyperSeriesSpec
from betacharpoly.symmetric.hyper import PrecisionPolicy
from betacharpoly.symmetric.hyper import TruncationPolicy
from betacharpoly.symmetric.hyper import eval_E
from betacharpoly.symmetric.hyper import eval_pFq
from betacharpoly.symmetric.hyper import eval_two_set
from betacharpoly.symmetric.hyper import reduce_0F0
from betacharpoly.symmetric.hyper import two_set_n2_closed_form


def _rand_complex(rng, scale):
    return complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale))


def test_0F0_one_variable_is_exponential():
    result = eval_pFq(HyperSeriesSpec(1.7), [0.8 - 0.3j])
    assert result.value == pytest.approx(cmath.exp(0.8 - 0.3j), rel=1e-13)
    assert not result.terminated


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_1F1_minus_one_in_one_variable_is_linear(alpha):
    c = 1.75
    result = eval_pFq(HyperSeriesSpec(alpha, (-1,), (c,)), [0.4])
    assert result.terminated
    assert result.value == pytest.approx(1 - 0.4 / c, rel=1e-13)


def test_1F1_minus_one_keeps_the_column_partitions():
    # alpha = 1: the (1^k) term is (-1)^k e_k / [c]_(1^k)
    x = [0.4, -1.1, 2.5]
    c = 1.75
    e1 = sum(x)
    e2 = x[0] * x[1] + x[0] * x[2] + x[1] * x[2]
    e3 = x[0] * x[1] * x[2]
    expected = 1 - e1 / c + e2 / (c * (c - 1)) - e3 / (c * (c - 1) * (c - 2))
    result = eval_pFq(HyperSeriesSpec(1.0, (-1,), (c,)), x)
    assert result.terminated
    assert result.value == pytest.approx(expected, rel=1e-12)
    assert result.value.real == pytest.approx(-5.0496, abs=1e-3)


@pytest.mark.parametrize("s", [0.1, 0.9, 2.3])
def test_0F1_one_variable_is_bessel(s):
    result = eval_pFq(HyperSeriesSpec(2.0, (), (1.0,)), [-s])
    assert result.value.real == pytest.approx(scipy.special.j0(2 * math.sqrt(s)), rel=1e-12)


def test_terminating_series_stays_in_box():
    spec = HyperSeriesSpec(2.0, (-3,), (1.5,))
    result = eval_pFq(spec, [0.2, -0.4])
    assert result.terminated
    assert result.weight_used == 6
    assert spec.terminating_degree() == 3


def test_large_terminating_parameter_goes_extended():
    spec = HyperSeriesSpec(1.0, (-60,), (2.0,))
    result = eval_pFq(spec, [1.5])
    assert result.extended
    # one variable: the Laguerre polynomial L_60^(1)(1.5) / C(61, 60)
    expected = scipy.special.eval_genlaguerre(60, 1.0, 1.5) / 61
    assert result.value.real == pytest.approx(expected, rel=1e-9)


def test_lower_parameter_pole_rejected():
    with pytest.raises(DomainError):
        eval_pFq(HyperSeriesSpec(1.0, (), (0.0,)), [0.3])
    with pytest.raises(DomainError):
        # (2 - 1)/alpha - b = 0 at row 2
        eval_pFq(HyperSeriesSpec(1.0, (), (1.0,)), [0.3, 0.1])


def test_1F0_outside_unit_ball_rejected():
    with pytest.raises(DomainError):
        eval_pFq(HyperSeriesSpec(1.0, (0.5,), ()), [1.2])


def test_truncation_not_converged():
    spec = HyperSeriesSpec(1.0, truncation=TruncationPolicy(max_weight=3))
    with pytest.raises(TruncationNotConvergedError):
        eval_pFq(spec, [4.0, 3.0])


def test_truncation_without_requirement_returns_partial_sum():
    spec = HyperSeriesSpec(1.0, truncation=TruncationPolicy(max_weight=3, require_convergence=False))
    result = eval_pFq(spec, [4.0])
    assert result.weight_used == 3
    assert result.value.real == pytest.approx(1 + 4 + 8 + 64 / 6)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_permutation_symmetry(alpha):
    x = [0.3 + 0.1j, -0.7, 0.45j]
    spec = HyperSeriesSpec(alpha, (0.6,), (1.3, 2.1))
    reference = eval_pFq(spec, x).value
    for perm in itertools.permutations(x):
        assert eval_pFq(spec, list(perm)).value == pytest.approx(reference, rel=1e-12)


def test_two_set_trivial_cases():
    spec = HyperSeriesSpec(1.5)
    assert eval_two_set(spec, [0.7], [-1.3]).value == pytest.approx(cmath.exp(-0.91), rel=1e-13)
    assert eval_two_set(spec, [0.7, 0.2, -0.4], [0, 0, 0]).value == 1


def test_two_set_dimension_mismatch():
    with pytest.raises(DomainError):
        eval_two_set(HyperSeriesSpec(1.0), [0.1, 0.2], [0.3])


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_two_set_is_symmetric_in_its_sets(alpha):
    x, y = [0.3, -0.8], [1.1, 0.25j]
    spec = HyperSeriesSpec(alpha, (0.4,), (1.2,))
    assert eval_two_set(spec, x, y).value == pytest.approx(eval_two_set(spec, y, x).value, rel=1e-12)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_two_set_n2_closed_form(alpha):
    x, y = [0.6, -0.9], [1.2, 0.3]
    series = eval_two_set(HyperSeriesSpec(alpha), x, y).value
    assert complex(two_set_n2_closed_form(alpha, x, y)) == pytest.approx(series, rel=1e-11)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_translation_of_two_set_0F0(alpha, n):
    rng = random.Random(100 * n + int(4 * alpha))
    spec = HyperSeriesSpec(alpha)
    for _ in range(3):
        a, b = _rand_complex(rng, 0.4), _rand_complex(rng, 0.4)
        x = [_rand_complex(rng, 0.5) for _ in range(n)]
        y = [_rand_complex(rng, 0.5) for _ in range(n)]
        shifted = eval_two_set(spec, [a + v for v in x], [b + v for v in y]).value
        factor = cmath.exp(n * a * b + a * sum(y) + b * sum(x))
        assert shifted == pytest.approx(factor * eval_two_set(spec, x, y).value, rel=1e-9)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_translation_of_two_set_1F0(alpha, n):
    rng = random.Random(7 * n)
    a = 0.7
    b = _rand_complex(rng, 0.2)
    x = [_rand_complex(rng, 0.2) for _ in range(n)]
    # equal second-set entries reduce both sides to one-set products
    y = [_rand_complex(rng, 0.25)] * n
    spec = HyperSeriesSpec(alpha, (a,))
    left = eval_two_set(spec, [b + v for v in x], y).value
    inner = eval_two_set(spec, x, [v / (1 - b * v) for v in y]).value
    factor = 1
    for v in y:
        factor *= (1 - b * v) ** (-a)
    assert left == pytest.approx(factor * inner, rel=1e-8)


def test_E_extremes():
    x = [0.3 - 0.2j, 0.9, -0.5j]
    assert eval_E(0, 2.0, x) == pytest.approx(cmath.exp(sum(x)), rel=1e-12)
    assert eval_E(3, 2.0, x) == pytest.approx(cmath.exp(-sum(x)), rel=1e-12)


def test_E_is_2pi_i_periodic():
    x = [0.4, -0.3]
    shifted = [v + 2j * math.pi for v in x]
    assert eval_E(1, 1.0, shifted) == pytest.approx(eval_E(1, 1.0, x), rel=1e-7)


def test_E1_two_variables_is_sinc():
    s = [0.35, -0.4]
    value = eval_E(1, 1.0, [1j * math.pi * v for v in s])
    d = math.pi * (s[0] - s[1])
    assert value == pytest.approx(math.sin(d) / d, rel=1e-11)


def test_E_index_out_of_range():
    with pytest.raises(DomainError):
        eval_E(3, 1.0, [0.1, 0.2])


@pytest.mark.parametrize("k", [0, 2])
def test_reduce_0F0_extremes(k):
    x = [0.4, -0.9]
    a, b = 1.5, -0.5
    expected = cmath.exp((a if k == 2 else b) * sum(x))
    assert reduce_0F0(x, a, b, k, 2, 1.0).value == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_reduce_0F0_matches_two_set(alpha):
    rng = random.Random(8)
    x = [_rand_complex(rng, 0.7) for _ in range(2)]
    two_set = eval_two_set(HyperSeriesSpec(alpha), x, [1j, -1j]).value
    assert reduce_0F0(x, 1j, -1j, 1, 2, alpha).value == pytest.approx(two_set, rel=1e-8)


def test_forced_double_precision():
    spec = HyperSeriesSpec(1.0, (-10,), (2.0,), precision=PrecisionPolicy(extended=False))
    result = eval_pFq(spec, [0.5])
    assert not result.extended
    assert result.value.real == pytest.approx(scipy.special.eval_genlaguerre(10, 1.0, 0.5) / 11, rel=1e-12)
