"""The perfect matching association scheme.

The character table is available for any ``n`` the symmetric-function layer
can handle. Explicit associates, idempotents and functions on ``M_{2n}`` are
materialized only for ``n <= 5``; everything on that side is exact, using
integer numpy arrays paired with a common denominator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import permutations, product
from math import gcd, lcm
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .matchings import (
    PerfectMatching,
    ResourceError,
    _all_matchings,
    apply_permutation_raw,
    cycle_type_raw,
    hyperoctahedral_group,
    iter_partner_tuples,
    matching_index,
    sphere_representative,
    sphere_size,
)
from .partitions import Partition, as_partition, double_factorial, enumerate_partitions, hook_dim
from .symfunc import RationalMatrix, zonal_character_table

EXPLICIT_CAP = 5
ORACLE_CAP = 4
_INT64_SAFE = 2**62


def p_table(n: int) -> RationalMatrix:
    """Eigenvalue of associate ρ on eigenspace 2λ: ``|Ω_ρ| · ω^λ_ρ``."""
    return zonal_character_table(n).map(lambda lam, rho, w: w * sphere_size(rho, n))


# --- exact integer matrices with a shared denominator ------------------------


def _as_int_array(values) -> np.ndarray:
    arr = np.asarray(values, dtype=object)
    if arr.size and max(abs(int(x)) for x in arr.flat) >= 2**31:
        return arr
    return arr.astype(np.int64)


@dataclass(frozen=True, eq=False)
class ScaledMatrix:
    """The exact rational matrix ``numer / denom``."""

    numer: np.ndarray
    denom: int = 1

    @classmethod
    def from_fraction_grid(cls, grid) -> "ScaledMatrix":
        grid = [[Fraction(x) for x in r] for r in grid]
        d = reduce(lcm, (x.denominator for r in grid for x in r), 1)
        return cls(_as_int_array([[int(x * d) for x in r] for r in grid]), d).reduced()

    def reduced(self) -> "ScaledMatrix":
        g = reduce(gcd, (int(x) for x in self.numer.flat), self.denom)
        if g > 1:
            return ScaledMatrix(_as_int_array(self.numer // g), self.denom // g)
        return self

    def __matmul__(self, other: "ScaledMatrix") -> "ScaledMatrix":
        a, b = self.numer, other.numer
        bound = self.numer.shape[1] * _max_abs(a) * _max_abs(b)
        if a.dtype == object or b.dtype == object or bound >= _INT64_SAFE:
            prod_ = a.astype(object) @ b.astype(object)
        else:
            prod_ = a @ b
        return ScaledMatrix(_as_int_array(prod_), self.denom * other.denom).reduced()

    def __add__(self, other: "ScaledMatrix") -> "ScaledMatrix":
        d = lcm(self.denom, other.denom)
        num = self.numer.astype(object) * (d // self.denom) + other.numer.astype(object) * (d // other.denom)
        return ScaledMatrix(_as_int_array(num), d).reduced()

    def scale(self, c) -> "ScaledMatrix":
        c = Fraction(c)
        return ScaledMatrix(_as_int_array(self.numer.astype(object) * c.numerator), self.denom * c.denominator).reduced()

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScaledMatrix):
            return NotImplemented
        return bool(np.array_equal(self.numer.astype(object) * other.denom, other.numer.astype(object) * self.denom))

    def is_zero(self) -> bool:
        return not np.any(self.numer)

    def trace(self) -> Fraction:
        return Fraction(int(np.trace(self.numer.astype(object))), self.denom)

    def entry(self, i: int, j: int) -> Fraction:
        return Fraction(int(self.numer[i, j]), self.denom)

    def to_fractions(self) -> list[list[Fraction]]:
        return [[Fraction(int(x), self.denom) for x in r] for r in self.numer]

    @classmethod
    def identity(cls, size: int) -> "ScaledMatrix":
        return cls(np.eye(size, dtype=np.int64))


def _max_abs(a: np.ndarray) -> int:
    return max((abs(int(x)) for x in a.flat), default=0)


# --- cycle-type label matrix -------------------------------------------------


@lru_cache(maxsize=None)
def label_matrix(n: int) -> np.ndarray:
    """``L[i, j]`` = index (in reverse-lex order) of ``d(m_i, m_j)``."""
    if n > EXPLICIT_CAP:
        raise ResourceError(f"explicit scheme matrices are capped at n={EXPLICIT_CAP}")
    labels = {p: k for k, p in enumerate(enumerate_partitions(n))}
    ms = [m.partner for m in _all_matchings(n)]
    size = len(ms)
    out = np.zeros((size, size), dtype=np.int8)
    for i in range(size):
        a = ms[i]
        for j in range(i, size):
            k = labels[cycle_type_raw(a, ms[j])]
            out[i, j] = k
            out[j, i] = k
    out.setflags(write=False)
    return out


# --- the scheme --------------------------------------------------------------


@dataclass(frozen=True)
class AssociationScheme:
    n: int
    labels: tuple[Partition, ...]
    p_table: RationalMatrix
    valencies: dict
    dims: dict

    @property
    def explicit(self) -> bool:
        return self.n <= EXPLICIT_CAP

    @property
    def size(self) -> int:
        return double_factorial(2 * self.n - 1)

    def matchings(self) -> tuple[PerfectMatching, ...]:
        self._require_explicit()
        return _all_matchings(self.n)

    def _require_explicit(self) -> None:
        if not self.explicit:
            raise ResourceError(f"explicit matrices are capped at n={EXPLICIT_CAP}")

    def associate(self, lam) -> np.ndarray:
        """0/1 matrix of pairs at cycle type ``lam``."""
        self._require_explicit()
        k = self.labels.index(as_partition(lam))
        return (label_matrix(self.n) == k).astype(np.int64)

    def omega(self, lam, rho) -> Fraction:
        return self.p_table[lam, rho] / self.valencies[as_partition(rho)]


def build_scheme(n: int, verify: bool = True) -> AssociationScheme:
    if n < 1:
        raise ValueError("n must be positive")
    labels = enumerate_partitions(n)
    scheme = AssociationScheme(
        n=n,
        labels=labels,
        p_table=p_table(n),
        valencies={p: sphere_size(p, n) for p in labels},
        dims={p: hook_dim(p.doubled()) for p in labels},
    )
    if verify and n <= 4:
        problems = scheme_axiom_failures(scheme)
        if problems:
            raise AssertionError("scheme axioms failed: " + "; ".join(problems))
    return scheme


def scheme_axiom_failures(scheme: AssociationScheme) -> list[str]:
    """Check the four axioms on the explicit associates; returns failures."""
    n = scheme.n
    mats = {lam: scheme.associate(lam) for lam in scheme.labels}
    size = scheme.size
    failures = []
    if not np.array_equal(mats[Partition((1,) * n)], np.eye(size, dtype=np.int64)):
        failures.append("A_(1^n) is not the identity")
    if not np.array_equal(sum(mats.values()), np.ones((size, size), dtype=np.int64)):
        failures.append("associates do not sum to J")
    for lam, a in mats.items():
        if not np.array_equal(a, a.T):
            failures.append(f"A_{lam} is not symmetric")
    lab = label_matrix(n)
    for i, lam in enumerate(scheme.labels):
        for mu in scheme.labels[i:]:
            ab = mats[lam] @ mats[mu]
            if not np.array_equal(ab, mats[mu] @ mats[lam]):
                failures.append(f"A_{lam} and A_{mu} do not commute")
            # product lies in the span iff it is constant on every associate class
            for k in range(len(scheme.labels)):
                vals = np.unique(ab[lab == k])
                if len(vals) != 1:
                    failures.append(f"A_{lam}A_{mu} is not in the span")
                    break
    return failures


def idempotent(scheme: AssociationScheme, lam) -> ScaledMatrix:
    """``E_λ = (dim 2λ / (2n-1)!!) Σ_ρ ω^λ_ρ A_ρ``."""
    scheme._require_explicit()
    lam = as_partition(lam)
    lead = Fraction(scheme.dims[lam], scheme.size)
    coeffs = [lead * scheme.omega(lam, rho) for rho in scheme.labels]
    d = reduce(lcm, (c.denominator for c in coeffs), 1)
    table = _as_int_array([int(c * d) for c in coeffs])
    return ScaledMatrix(_as_int_array(table[label_matrix(scheme.n)]), d).reduced()


# --- functions on M_2n -------------------------------------------------------


@dataclass(frozen=True)
class MatchingFunction:
    """A rational-valued function on all of ``M_{2n}``, stored in enumeration order."""

    n: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) != double_factorial(2 * self.n - 1):
            raise ValueError("a matching function must be defined on every matching")

    @classmethod
    def from_mapping(cls, n: int, mapping: Mapping[PerfectMatching, object]) -> "MatchingFunction":
        return cls(n, tuple(Fraction(mapping.get(m, 0)) for m in _all_matchings(n)))

    @classmethod
    def indicator(cls, n: int, family: Iterable[PerfectMatching]) -> "MatchingFunction":
        index = matching_index(n)
        vals = [Fraction(0)] * len(index)
        for m in family:
            vals[index[m.partner]] = Fraction(1)
        return cls(n, tuple(vals))

    @classmethod
    def constant(cls, n: int, c=1) -> "MatchingFunction":
        return cls(n, (Fraction(c),) * double_factorial(2 * n - 1))

    def __call__(self, m: PerfectMatching) -> Fraction:
        return self.values[matching_index(self.n)[m.partner]]

    def __add__(self, other: "MatchingFunction") -> "MatchingFunction":
        return MatchingFunction(self.n, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "MatchingFunction") -> "MatchingFunction":
        return MatchingFunction(self.n, tuple(a - b for a, b in zip(self.values, other.values)))

    def inner(self, other: "MatchingFunction") -> Fraction:
        return sum((a * b for a, b in zip(self.values, other.values)), Fraction(0))

    def is_zero(self) -> bool:
        return not any(self.values)

    def scaled_integers(self) -> tuple[np.ndarray, int]:
        d = reduce(lcm, (v.denominator for v in self.values), 1)
        return _as_int_array([int(v * d) for v in self.values]), d


def _sphere_sums(f: MatchingFunction) -> tuple[list[list[int]], int]:
    """``S[m][k] = Σ_{m' : d(m,m') = label k} f(m')`` as integers over a denominator."""
    ints, d = f.scaled_integers()
    lab = label_matrix(f.n)
    size, nlab = lab.shape[0], int(lab.max()) + 1
    sums = np.zeros((size, nlab), dtype=object)
    rows = np.repeat(np.arange(size), 1)
    for value in {int(v) for v in ints.flat if v}:
        cols = np.nonzero(ints == value)[0]
        sub = lab[:, cols].astype(np.int64)
        flat = (rows[:, None] * nlab + sub).ravel()
        counts = np.bincount(flat, minlength=size * nlab).reshape(size, nlab)
        sums = sums + counts.astype(object) * value
    return sums.tolist(), d


def project(f: MatchingFunction, mu, scheme: AssociationScheme | None = None) -> MatchingFunction:
    """Orthogonal projection of ``f`` onto the eigenspace ``2μ``."""
    scheme = scheme or build_scheme(f.n, verify=False)
    scheme._require_explicit()
    return _project_from_sums(_sphere_sums(f), as_partition(mu), scheme)


def _project_from_sums(sums_d, mu: Partition, scheme: AssociationScheme) -> MatchingFunction:
    sums, d = sums_d
    lead = Fraction(scheme.dims[mu], scheme.size * d)
    omegas = [scheme.omega(mu, rho) for rho in scheme.labels]
    w_den = reduce(lcm, (w.denominator for w in omegas), 1)
    w_int = [int(w * w_den) for w in omegas]
    scale = lead / w_den
    vals = tuple(scale * sum(s * w for s, w in zip(row, w_int)) for row in sums)
    return MatchingFunction(scheme.n, vals)


def fourier_support(f: MatchingFunction, scheme: AssociationScheme | None = None) -> set[Partition]:
    """Every μ whose eigenspace ``2μ`` carries a nonzero component of ``f``."""
    scheme = scheme or build_scheme(f.n, verify=False)
    scheme._require_explicit()
    sums = _sphere_sums(f)
    return {mu for mu in scheme.labels if not _project_from_sums(sums, mu, scheme).is_zero()}


def projections(f: MatchingFunction, scheme: AssociationScheme | None = None) -> dict[Partition, MatchingFunction]:
    scheme = scheme or build_scheme(f.n, verify=False)
    sums = _sphere_sums(f)
    return {mu: _project_from_sums(sums, mu, scheme) for mu in scheme.labels}


# --- tabloids and polytabloids -----------------------------------------------


@dataclass(frozen=True)
class Tabloid:
    """Unordered rows of vertex labels."""

    rows: tuple[frozenset[int], ...]

    @classmethod
    def of(cls, rows: Iterable[Iterable[int]]) -> "Tabloid":
        rows = tuple(frozenset(r) for r in rows)
        seen = [v for r in rows for v in r]
        if len(seen) != len(set(seen)):
            raise ValueError("tabloid rows must be disjoint")
        if sorted(seen) != list(range(1, len(seen) + 1)):
            raise ValueError("tabloid rows must partition 1..N")
        return cls(rows)

    @property
    def shape(self) -> Partition:
        return Partition.from_multiset(len(r) for r in self.rows)

    def row_of(self) -> dict[int, int]:
        return {v: i for i, r in enumerate(self.rows) for v in r}


def covers(tab: Tabloid, m: PerfectMatching) -> bool:
    """True iff both endpoints of every edge of ``m`` share a row of ``tab``."""
    if sum(len(r) for r in tab.rows) != len(m.partner):
        raise ValueError("tabloid and matching have different vertex sets")
    row = tab.row_of()
    return all(row[u] == row[v] for u, v in m.edges())


@dataclass(frozen=True)
class Tableau:
    """Ordered rows of distinct vertex labels ``1..N``."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        Partition(len(r) for r in self.rows)
        Tabloid.of(self.rows)

    @property
    def shape(self) -> Partition:
        return Partition(len(r) for r in self.rows)

    def columns(self) -> list[tuple[int, ...]]:
        shape = self.shape
        return [tuple(self.rows[i][j] for i in range(len(shape)) if shape[i] > j) for j in range(shape[0] if shape else 0)]

    def tabloid(self) -> Tabloid:
        return Tabloid(tuple(frozenset(r) for r in self.rows))


def aligned_tableau(lam) -> Tableau:
    """A ``2λ``-tableau aligned with ``m*``: rows filled left to right with
    consecutive labels, so each pair ``(2i-1, 2i)`` sits in columns ``2j-1, 2j``."""
    lam = as_partition(lam)
    rows, nxt = [], 1
    for part in lam:
        rows.append(tuple(range(nxt, nxt + 2 * part)))
        nxt += 2 * part
    return Tableau(tuple(rows))


def _perm_sign(p: Sequence[int]) -> int:
    sign, seen = 1, [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def column_group(tab: Tableau, columns: Sequence[int] | None = None) -> Iterator[tuple[int, Tabloid]]:
    """``(sign σ, {σT})`` for σ permuting entries within the chosen columns
    (0-based indices; default all columns)."""
    cols = tab.columns()
    chosen = range(len(cols)) if columns is None else columns
    options = []
    for j in chosen:
        col = cols[j]
        options.append([(j, _perm_sign(p), tuple(col[k] for k in p)) for p in permutations(range(len(col)))])
    for combo in product(*options):
        grid = [list(r) for r in tab.rows]
        sign = 1
        for j, s, entries in combo:
            sign *= s
            for i, v in enumerate(entries):
                grid[i][j] = v
        yield sign, Tabloid(tuple(frozenset(r) for r in grid))


def covered_matchings(tab: Tabloid) -> Iterator[tuple[int, ...]]:
    """Partner tuples of every perfect matching covered by ``tab``."""
    size = sum(len(r) for r in tab.rows)
    if any(len(r) % 2 for r in tab.rows):
        return
    row_choices = [list(iter_partner_tuples([v - 1 for v in r], size)) for r in tab.rows]
    for combo in product(*row_choices):
        out = [-1] * size
        for part in combo:
            for v, u in enumerate(part):
                if u >= 0:
                    out[v] = u
        yield tuple(out)


def polytabloid_function(tab: Tableau) -> MatchingFunction:
    """``f_T = Σ_{σ ∈ C_T} sign(σ) 1_{σT}``: signed cover indicators over the
    column stabilizer."""
    size = sum(len(r) for r in tab.rows)
    if size % 2 or any(p % 2 for p in tab.shape):
        raise ValueError("polytabloid functions need an even shape")
    n = size // 2
    if n > EXPLICIT_CAP:
        raise ResourceError(f"matching functions are capped at n={EXPLICIT_CAP}")
    index = matching_index(n)
    vals = [0] * len(index)
    for sign, tabloid in column_group(tab):
        for p in covered_matchings(tabloid):
            vals[index[p]] += sign
    return MatchingFunction(n, tuple(Fraction(v) for v in vals))


def spherical_oracle(lam, rho, n: int) -> Fraction:
    """``ω^λ_ρ`` by group averaging: sum the signed cover indicators of an
    ``m*``-aligned ``2λ``-tableau over the odd-column group and the stabilizer
    of ``m*``, evaluate on a matching of cycle type ρ, normalize at ``m*``."""
    lam, rho = as_partition(lam), as_partition(rho)
    if n > ORACLE_CAP:
        raise ResourceError(f"the spherical oracle is capped at n={ORACLE_CAP}")
    if lam.n != n or rho.n != n:
        raise ValueError("labels must be partitions of n")
    return _oracle_row(lam, n)[rho]


@lru_cache(maxsize=None)
def _oracle_row(lam: Partition, n: int) -> dict[Partition, Fraction]:
    tab = aligned_tableau(lam)
    odd_cols = range(0, 2 * lam[0], 2)
    terms = [(s, tabloid.row_of()) for s, tabloid in column_group(tab, odd_cols)]
    group = list(hyperoctahedral_group(n))

    def value(m: PerfectMatching) -> int:
        total = 0
        for h in group:
            image = apply_permutation_raw(h, m.partner)
            edges = [(v + 1, u + 1) for v, u in enumerate(image) if v < u]
            for sign, row in terms:
                if all(row[a] == row[b] for a, b in edges):
                    total += sign
        return total

    base = value(PerfectMatching.identity(n))
    if base == 0:
        raise ArithmeticError(f"oracle vanishes at the base matching for {lam}")
    return {r: Fraction(value(sphere_representative(r)), base) for r in enumerate_partitions(n)}
