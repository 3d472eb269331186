import cmath
import itertools
import random

import pytest

from betacharpoly.errors import DomainError
from betacharpoly.errors import IncomparableWeightsError
from betacharpoly.symmetric.partitions import Dominance
from betacharpoly.symmetric.partitions import Partition
from betacharpoly.symmetric.partitions import box_stats
from betacharpoly.symmetric.partitions import conjugate
from betacharpoly.symmetric.partitions import dominance_leq
from betacharpoly.symmetric.partitions import enumerate_partitions
from betacharpoly.symmetric.partitions import gen_pochhammer
from betacharpoly.symmetric.partitions import gen_pochhammer_boxes
from betacharpoly.symmetric.partitions import hook_product
from betacharpoly.symmetric.partitions import monomial_count


def _all_upto(weight):
    return [k for w in range(weight + 1) for k in enumerate_partitions(w, w)]


def test_trailing_zeros_are_dropped():
    assert Partition((2, 1, 0, 0)) == Partition((2, 1))
    assert Partition((2, 1, 0)).length == 2
    assert Partition((3, 1)).weight == 4


@pytest.mark.parametrize("parts", [(1, 2), (2, -1)])
def test_invalid_parts_rejected(parts):
    with pytest.raises(DomainError):
        Partition(parts)


@pytest.mark.parametrize(
    "weight, max_length, expected",
    [
        (0, 5, [()]),
        (3, 2, [(3,), (2, 1)]),
        (4, 4, [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]),
    ],
)
def test_enumerate_partitions(weight, max_length, expected):
    assert [tuple(k) for k in enumerate_partitions(weight, max_length)] == expected


def test_enumerate_respects_max_part():
    assert [tuple(k) for k in enumerate_partitions(4, 4, max_part=2)] == [(2, 2), (2, 1, 1), (1, 1, 1, 1)]


def test_enumerate_counts_match_partition_numbers():
    assert [len(enumerate_partitions(w, w)) for w in range(9)] == [1, 1, 2, 3, 5, 7, 11, 15, 22]


def test_negative_weight_rejected():
    with pytest.raises(DomainError):
        enumerate_partitions(-1, 3)


@pytest.mark.parametrize("kappa, expected", [((), ()), ((2, 1), (2, 1)), ((3, 1), (2, 1, 1))])
def test_conjugate(kappa, expected):
    assert conjugate(kappa) == Partition(expected)


def test_conjugate_is_an_involution():
    for kappa in _all_upto(8):
        assert conjugate(conjugate(kappa)) == kappa
        assert conjugate(kappa).weight == kappa.weight


@pytest.mark.parametrize(
    "kappa, sigma, expected",
    [
        ((1, 1), (2,), Dominance.LEQ),
        ((2, 2), (3, 1), Dominance.LEQ),
        ((3, 1), (2, 2), Dominance.GEQ_STRICT),
        ((3, 1, 1, 1), (2, 2, 2), Dominance.INCOMPARABLE),
    ],
)
def test_dominance(kappa, sigma, expected):
    assert dominance_leq(kappa, sigma) is expected


def test_dominance_unequal_weights():
    with pytest.raises(IncomparableWeightsError):
        dominance_leq((2,), (1,))


def test_dominance_reverses_under_conjugation():
    rng = random.Random(3)
    for _ in range(200):
        weight = rng.randint(1, 8)
        pool = enumerate_partitions(weight, weight)
        kappa, sigma = rng.choice(pool), rng.choice(pool)
        forward = dominance_leq(kappa, sigma) is Dominance.LEQ
        backward = dominance_leq(conjugate(sigma), conjugate(kappa)) is Dominance.LEQ
        assert forward == backward


def test_box_stats():
    stats = {(b.row, b.col): b for b in box_stats((3, 1))}
    assert (stats[1, 1].arm, stats[1, 1].leg) == (2, 1)
    assert (stats[1, 3].arm, stats[1, 3].leg) == (0, 0)
    assert (stats[2, 1].coarm, stats[2, 1].coleg) == (0, 1)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_hook_product(alpha):
    assert hook_product((), alpha) == 1
    assert hook_product((2,), alpha) == pytest.approx(2)
    assert hook_product((1, 1), alpha) == pytest.approx(1 + 1 / alpha)


def test_hook_product_rejects_nonpositive_alpha():
    with pytest.raises(DomainError):
        hook_product((1,), 0.0)


def test_gen_pochhammer_examples():
    x = 0.3 + 0.7j
    assert gen_pochhammer(x, (1,), 2.0) == x
    assert gen_pochhammer(x, (1, 1), 2.0) == pytest.approx(x * (x - 0.5))
    assert gen_pochhammer(1, (1, 1), 1.0) == 0


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_row_and_box_pochhammer_agree(alpha):
    rng = random.Random(11)
    for kappa in _all_upto(8):
        x = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        rows = gen_pochhammer(x, kappa, alpha)
        boxes = gen_pochhammer_boxes(x, kappa, alpha)
        assert abs(rows - boxes) <= 1e-12 * max(1.0, abs(rows))


def test_pochhammer_vanishes_beyond_length():
    for alpha, k in itertools.product((0.5, 1.0, 2.0), range(5)):
        for kappa in _all_upto(6):
            value = gen_pochhammer(k / alpha, kappa, alpha)
            if kappa.length > k:
                assert cmath.isclose(value, 0, abs_tol=1e-9)
            else:
                assert value != 0


def test_monomial_count():
    assert monomial_count((1,), 3) == 3
    assert monomial_count((1, 1), 3) == 3
    assert monomial_count((2, 1), 3) == 6
    assert monomial_count((1, 1, 1, 1), 3) == 0
