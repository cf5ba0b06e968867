"""Integer partitions and the scalar combinatorics built on them.

Partitions are stored as weakly decreasing tuples. Because every
partition of a fixed ``n`` is compared only against partitions of the
same ``n``, plain tuple comparison coincides with reverse-lexicographic
order, so ``sorted(..., reverse=True)`` lists ``(n)`` first and ``(1^n)``
last.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod


class Partition(tuple):
    """A weakly decreasing tuple of positive integers."""

    def __new__(cls, parts=()):
        parts = tuple(int(p) for p in parts)
        if any(p <= 0 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Inverse of ``str``: ``"3,1"`` or ``"-"`` for the empty partition."""
        text = text.strip()
        if text in ("-", ""):
            return cls(())
        return cls(int(p) for p in text.split(","))

    @classmethod
    def from_multiset(cls, parts) -> "Partition":
        return cls(sorted(parts, reverse=True))

    @property
    def n(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def __str__(self) -> str:
        return ",".join(map(str, self)) if self else "-"

    def __repr__(self) -> str:
        return f"Partition({tuple(self)!r})"

    def pretty(self) -> str:
        """Multiplicity notation, e.g. ``(2,1^2)``."""
        if not self:
            return "()"
        out = []
        for part, mult in sorted(Counter(self).items(), reverse=True):
            out.append(str(part) if mult == 1 else f"{part}^{mult}")
        return "(" + ",".join(out) + ")"

    def transpose(self) -> "Partition":
        return transpose(self)

    def doubled(self) -> "Partition":
        """The even partition ``2λ``."""
        return Partition(2 * p for p in self)

    def multiplicities(self) -> Counter:
        return Counter(self)

    def unit_parts(self) -> int:
        return sum(1 for p in self if p == 1)

    def cells(self):
        for i, row in enumerate(self):
            for j in range(row):
                yield i, j

    def contains(self, other: "Partition") -> bool:
        """True iff the diagram of ``other`` fits inside this one."""
        if len(other) > len(self):
            return False
        return all(o <= s for o, s in zip(other, self))


def as_partition(obj) -> Partition:
    if isinstance(obj, Partition):
        return obj
    if isinstance(obj, str):
        return Partition.parse(obj)
    return Partition(obj)


def _partitions_bounded(n: int, largest: int):
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions_bounded(n - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def enumerate_partitions(n: int) -> tuple[Partition, ...]:
    """All partitions of ``n`` in strictly decreasing reverse-lex order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return tuple(Partition(p) for p in _partitions_bounded(n, n))


def partition_count(n: int) -> int:
    return len(enumerate_partitions(n))


def transpose(lam) -> Partition:
    lam = as_partition(lam)
    if not lam:
        return lam
    return Partition(sum(1 for p in lam if p >= j) for j in range(1, lam[0] + 1))


def arm_leg(lam, i: int, j: int) -> tuple[int, int]:
    """Arm and leg lengths of cell ``(i, j)`` (0-based row, column)."""
    lam = as_partition(lam)
    conj = transpose(lam)
    return lam[i] - j - 1, conj[j] - i - 1


def hook_product(lam) -> int:
    lam = as_partition(lam)
    return prod(a + l + 1 for a, l in (arm_leg(lam, i, j) for i, j in lam.cells()))


def hook_dim(lam) -> int:
    """Number of standard tableaux of shape ``lam`` via the hook length formula."""
    lam = as_partition(lam)
    num = factorial(lam.n)
    den = hook_product(lam)
    q, r = divmod(num, den)
    assert r == 0, "hook product must divide n!"
    return q


def aut_weight(lam) -> int:
    """``z_λ = ∏ i^{m_i} m_i!``, the centralizer order of cycle type λ."""
    lam = as_partition(lam)
    return prod(i**m * factorial(m) for i, m in lam.multiplicities().items())


class FatKind:
    FAT = "fat"
    MEDIUM = "medium"


@dataclass(frozen=True)
class FatClass:
    kind: str
    k: int | None = None

    @property
    def is_fat(self) -> bool:
        return self.kind == FatKind.FAT

    def __str__(self) -> str:
        return f"Fat({self.k})" if self.is_fat else "Medium"


def check_t_range(n: int, t: int) -> None:
    if t < 1 or not 2 * t < n:
        raise ValueError(
            f"need 1 <= t < n/2 (got n={n}, t={t}): fat/medium trichotomy undefined"
        )


def classify_fat(lam, n: int, t: int) -> FatClass:
    lam = as_partition(lam)
    check_t_range(n, t)
    if lam.n != n:
        raise ValueError(f"{lam} is not a partition of {n}")
    if lam[0] >= n - t:
        return FatClass(FatKind.FAT, n - lam[0])
    return FatClass(FatKind.MEDIUM)


def fat_partitions(n: int, t: int) -> tuple[Partition, ...]:
    """Fat partitions of ``n`` in reverse-lex order; ``(n-t,1^t)`` is the last one."""
    check_t_range(n, t)
    return tuple(p for p in enumerate_partitions(n) if p[0] >= n - t)


def fat_count(t: int) -> int:
    """``F_t = p(0) + ... + p(t)``, independent of n once t < n/2."""
    return sum(partition_count(k) for k in range(t + 1))


def hook_partition(n: int, t: int) -> Partition:
    """``(n-t, 1^t)``."""
    return Partition((n - t,) + (1,) * t)


# --- double factorials -------------------------------------------------------


def double_factorial(k: int) -> int:
    """``k!!`` with ``(-1)!! = 0!! = 1``."""
    if k < -1:
        raise ValueError("double factorial undefined below -1")
    return prod(range(k, 0, -2)) if k > 0 else 1


def odd_falling(n: int, t: int) -> int:
    """``(2n-1)(2n-3)...(2(n-t+1)-1)``, t factors."""
    return prod(2 * (n - i) - 1 for i in range(t))


def even_falling(n: int, t: int) -> int:
    """``2n · 2(n-1) ... 2(n-t+1)``, t factors."""
    return prod(2 * (n - i) for i in range(t))


@dataclass(frozen=True)
class ScalarTable:
    n: int
    t: int
    odd_df: int
    even_df: int
    odd_falling: int
    even_falling: int


def scalar_table(n: int, t: int) -> ScalarTable:
    if n < 1 or not 0 <= t <= n:
        raise ValueError(f"need n >= 1 and 0 <= t <= n (got n={n}, t={t})")
    return ScalarTable(
        n=n,
        t=t,
        odd_df=double_factorial(2 * n - 1),
        even_df=double_factorial(2 * n),
        odd_falling=odd_falling(n, t),
        even_falling=even_falling(n, t),
    )


# --- t-derangements ----------------------------------------------------------


@lru_cache(maxsize=None)
def _derangements_rec(n: int) -> int:
    if n == 0:
        return 1
    if n == 1:
        return 0
    return 2 * (n - 1) * (_derangements_rec(n - 1) + _derangements_rec(n - 2))


def derangements_inclusion_exclusion(n: int) -> int:
    """Perfect matchings sharing no edge with a fixed one, by inclusion-exclusion
    over the ``n`` edges of the fixed matching."""
    return sum((-1) ** i * comb(n, i) * double_factorial(2 * (n - i) - 1) for i in range(n + 1))


def derangement_count(n: int, t: int = 1) -> int:
    """``D_2(n, t)``: matchings with fewer than ``t`` unit parts in their cycle type.

    Exactly ``i`` unit parts means ``i`` edges of the base matching are kept and
    the remaining ``n - i`` pairs are deranged, hence the binomial sum.
    """
    if n < 0 or t < 1:
        raise ValueError("need n >= 0 and t >= 1")
    by_rec = sum(comb(n, i) * _derangements_rec(n - i) for i in range(min(t, n + 1)))
    by_ie = sum(comb(n, i) * derangements_inclusion_exclusion(n - i) for i in range(min(t, n + 1)))
    if by_rec != by_ie:
        raise ArithmeticError(f"derangement counts disagree at n={n}, t={t}")
    return by_rec


# --- rational bounds for irrational constants --------------------------------

PI_UPPER = Fraction(355, 113)


def exp_interval(x: Fraction, width: Fraction = Fraction(1, 10**6)) -> tuple[Fraction, Fraction]:
    """Rational interval ``[lo, hi]`` containing ``exp(x)`` for ``|x| <= 1``,
    with ``hi - lo <= width``. Uses the Taylor remainder bound ``|x|^{k+1}·e/(k+1)!``.
    """
    x = Fraction(x)
    if abs(x) > 1:
        raise ValueError("exp_interval only supports |x| <= 1")
    s = Fraction(0)
    term = Fraction(1)
    k = 0
    while True:
        s += term
        k += 1
        term = term * x / k
        # remainder after k terms is bounded by |x|^k · 3 / k!
        bound = abs(term) * 3
        if 2 * bound <= width:
            return s - bound, s + bound
