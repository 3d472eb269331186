"""
betacharpoly.symmetric.partitions
~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

Integer partitions and the combinatorial quantities attached to their
diagrams: conjugates, dominance order, arm/leg statistics, hook products and
generalized Pochhammer symbols. Every hypergeometric series in the package is
indexed by the partitions produced here.

"""
import enum
import functools
import logging
import math
from collections import Counter
from collections import namedtuple

from betacharpoly.errors import DomainError
from betacharpoly.errors import IncomparableWeightsError
from betacharpoly.errors import fail

_LOGGER = logging.getLogger(__name__)

BoxStats = namedtuple("BoxStats", ["row", "col", "arm", "leg", "coarm", "coleg"])


class Dominance(enum.Enum):
    LEQ = "leq"
    GEQ_STRICT = "geq_strict"
    INCOMPARABLE = "incomparable"


class Partition(tuple):
    """A nonincreasing tuple of positive integers. Trailing zeros are dropped on
    construction, so ``Partition((2, 1, 0)) == Partition((2, 1))``.

    .. code:: python

        from betacharpoly.symmetric.partitions import Partition
        kappa = Partition((3, 1))
        kappa.weight, kappa.length, kappa.conjugate()
        # (4, 2, Partition((2, 1, 1)))

    :type parts: iterable of :py:class:`int`
    :param parts: the parts, largest first.
    """

    def __new__(cls, parts=()):
        parts = tuple(int(p) for p in parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        for i, p in enumerate(parts):
            if p < 0:
                raise fail(
                    DomainError(f"Negative part in partition: {parts}", "partitions")
                )
            if i and p > parts[i - 1]:
                raise fail(
                    DomainError(f"Parts must be nonincreasing: {parts}", "partitions")
                )
        return super().__new__(cls, parts)

    def __repr__(self):
        return f"Partition({tuple(self)})"

    @property
    def weight(self):
        return sum(self)

    @property
    def length(self):
        return len(self)

    def part(self, i):
        """The ``i``-th part (1-based), zero past the length."""
        return self[i - 1] if i <= len(self) else 0

    def padded(self, n):
        """The parts padded with zeros to exactly ``n`` entries."""
        if n < len(self):
            raise fail(
                DomainError(f"Cannot pad {self} to {n} entries.", "partitions")
            )
        return tuple(self) + (0,) * (n - len(self))

    def conjugate(self):
        return conjugate(self)

    def boxes(self):
        """Diagram boxes ``(i, j)`` in row-major order, 1-based."""
        return [(i, j) for i, row in enumerate(self, 1) for j in range(1, row + 1)]

    def multiplicities(self):
        return Counter(self)


def as_partition(kappa):
    return kappa if isinstance(kappa, Partition) else Partition(kappa)


@functools.lru_cache(maxsize=None)
def _enumerate(weight, max_length, max_part):
    if weight == 0:
        return (Partition(),)
    top = weight if max_part is None else min(weight, max_part)
    found = []
    stack = [((), weight, top)]
    while stack:
        prefix, remaining, cap = stack.pop()
        if remaining == 0:
            found.append(Partition(prefix))
            continue
        slots = max_length - len(prefix)
        if slots == 0:
            continue
        # smallest first on the stack, so the largest next part is expanded first
        for part in range(1, min(cap, remaining) + 1):
            if part * slots < remaining:
                continue
            stack.append((prefix + (part,), remaining - part, part))
    return tuple(found)


def enumerate_partitions(weight, max_length, max_part=None):
    """All partitions of ``weight`` with at most ``max_length`` parts and
    (if given) largest part at most ``max_part``, in reverse lexicographic
    order. Results are memoized.

    :type weight: :py:class:`int`
    :param weight: the weight, ``>= 0``.

    :type max_length: :py:class:`int`
    :param max_length: upper bound on the number of nonzero parts.

    :type max_part: (Optional) :py:class:`int`
    :param max_part: upper bound on the first part.

    :rtype: :py:class:`list` of :py:class:`Partition`
    :returns: the partitions, largest first in reverse lex order.
    """
    if weight < 0:
        raise fail(DomainError(f"Negative weight: {weight}", "partitions"))
    if max_part is not None and weight > 0 and max_part <= 0:
        return []
    return list(_enumerate(int(weight), int(max_length), max_part))


def conjugate(kappa):
    kappa = as_partition(kappa)
    if not kappa:
        return Partition()
    return Partition(sum(1 for p in kappa if p >= j) for j in range(1, kappa[0] + 1))


def _partial_sums_leq(a, b):
    sa = sb = 0
    for i in range(max(len(a), len(b))):
        sa += a[i] if i < len(a) else 0
        sb += b[i] if i < len(b) else 0
        if sa > sb:
            return False
    return True


def dominance_leq(kappa, sigma):
    """Compares two partitions of equal weight in dominance order.

    :type kappa: :py:class:`Partition`
    :param kappa: left-hand partition.

    :type sigma: :py:class:`Partition`
    :param sigma: right-hand partition.

    :rtype: :py:class:`Dominance`
    :returns: ``LEQ`` if every partial sum of ``kappa`` is at most the
        corresponding one of ``sigma``, ``GEQ_STRICT`` if the reverse holds
        and they differ, ``INCOMPARABLE`` otherwise.
    """
    kappa, sigma = as_partition(kappa), as_partition(sigma)
    if kappa.weight != sigma.weight:
        raise fail(
            IncomparableWeightsError(
                f"Incomparable weights: |{tuple(kappa)}|={kappa.weight}, "
                f"|{tuple(sigma)}|={sigma.weight}",
                "partitions",
            )
        )
    if _partial_sums_leq(kappa, sigma):
        return Dominance.LEQ
    if _partial_sums_leq(sigma, kappa):
        return Dominance.GEQ_STRICT
    return Dominance.INCOMPARABLE


def box_stats(kappa):
    """Arm, leg, co-arm and co-leg lengths of every box of the diagram.

    :rtype: :py:class:`list` of :py:class:`BoxStats`
    """
    kappa = as_partition(kappa)
    conj = conjugate(kappa)
    return [
        BoxStats(i, j, kappa[i - 1] - j, conj[j - 1] - i, j - 1, i - 1)
        for i, j in kappa.boxes()
    ]


def _check_alpha(alpha):
    if not alpha > 0:
        raise fail(DomainError(f"alpha must be positive, got {alpha}", "partitions"))


def hook_product(kappa, alpha):
    """The hook product ``prod (1 + arm + leg/alpha)`` over the boxes of
    ``kappa``. ``alpha`` may be ``math.inf``.

    :rtype: :py:class:`float`
    """
    _check_alpha(alpha)
    value = 1.0
    for box in box_stats(kappa):
        value *= 1 + box.arm + box.leg / alpha
    return value


def gen_pochhammer(x, kappa, alpha):
    """Generalized Pochhammer symbol ``prod_i (x - (i-1)/alpha)_{kappa_i}``.

    :type x: :py:class:`complex`
    :param x: the base; any field element supporting ``+`` and ``*``
        (floats, complex numbers, mpmath numbers).

    :type kappa: :py:class:`Partition`
    :param kappa: the index.

    :type alpha: :py:class:`float`
    :param alpha: the Jack parameter, positive or ``math.inf``.
    """
    _check_alpha(alpha)
    value = 1
    for i, row in enumerate(as_partition(kappa)):
        shifted = x - i / alpha
        for j in range(row):
            value *= shifted + j
    return value


def gen_pochhammer_boxes(x, kappa, alpha):
    """Box form of :func:`gen_pochhammer`: ``prod (x + coarm - coleg/alpha)``."""
    _check_alpha(alpha)
    value = 1
    for box in box_stats(kappa):
        value *= x + box.coarm - box.coleg / alpha
    return value


def monomial_count(kappa, n):
    """Number of distinct monomials in ``m_kappa(x_1..x_n)``; equals
    ``m_kappa(1^n)``."""
    kappa = as_partition(kappa)
    if kappa.length > n:
        return 0
    counts = Counter(kappa.padded(n))
    denom = 1
    for c in counts.values():
        denom *= math.factorial(c)
    return math.factorial(n) // denom
