"""Exact transition matrices between bases of symmetric functions of degree n.

Every matrix is labelled by partitions in reverse-lex order, ``(n)`` first.
Conventions used throughout:

* ``perm_char_matrix``    D(n) = M(p, m), lower triangular.
* ``kostka_matrix``       K(n) = M(s, m), upper unitriangular.
* ``alpha_kostka_matrix`` K^(α)(n) = M(P^(α), m) for Jack P, upper unitriangular.
* ``sym_char_table``      rows are irreducibles λ, columns are classes ρ.
* ``zonal_character_table`` rows are eigenspaces λ, columns are spheres ρ.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator, Sequence

from .partitions import (
    Partition,
    arm_leg,
    as_partition,
    aut_weight,
    check_t_range,
    enumerate_partitions,
    fat_partitions,
    hook_partition,
)


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def format_rational(x) -> str:
    x = _frac(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class RationalMatrix:
    """Dense exact matrix with partition labels on rows and columns."""

    row_labels: tuple[Partition, ...]
    col_labels: tuple[Partition, ...]
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.entries) != len(self.row_labels):
            raise ValueError("row count does not match row labels")
        if any(len(r) != len(self.col_labels) for r in self.entries):
            raise ValueError("column count does not match column labels")

    @classmethod
    def build(cls, rows, cols, fn: Callable[[Partition, Partition], object]) -> "RationalMatrix":
        rows, cols = tuple(rows), tuple(cols)
        return cls(rows, cols, tuple(tuple(_frac(fn(r, c)) for c in cols) for r in rows))

    @classmethod
    def from_rows(cls, rows, cols, data: Sequence[Sequence]) -> "RationalMatrix":
        return cls(tuple(rows), tuple(cols), tuple(tuple(_frac(x) for x in r) for r in data))

    @classmethod
    def identity(cls, labels) -> "RationalMatrix":
        labels = tuple(labels)
        return cls.build(labels, labels, lambda r, c: int(r == c))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_labels), len(self.col_labels)

    def _ri(self, label) -> int:
        return self.row_labels.index(as_partition(label))

    def _ci(self, label) -> int:
        return self.col_labels.index(as_partition(label))

    def __getitem__(self, key) -> Fraction:
        r, c = key
        return self.entries[self._ri(r)][self._ci(c)]

    def row(self, label) -> tuple[Fraction, ...]:
        return self.entries[self._ri(label)]

    def column(self, label) -> tuple[Fraction, ...]:
        j = self._ci(label)
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(self.col_labels, self.row_labels, tuple(zip(*self.entries)))

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.col_labels != other.row_labels:
            raise ValueError("inner labels do not agree")
        cols = list(zip(*other.entries))
        data = tuple(
            tuple(sum((a * b for a, b in zip(r, c) if a and b), Fraction(0)) for c in cols)
            for r in self.entries
        )
        return RationalMatrix(self.row_labels, other.col_labels, data)

    def map(self, fn: Callable[[Partition, Partition, Fraction], object]) -> "RationalMatrix":
        return RationalMatrix.build(self.row_labels, self.col_labels, lambda r, c: fn(r, c, self[r, c]))

    def submatrix(self, rows, cols) -> "RationalMatrix":
        rows = tuple(as_partition(r) for r in rows)
        cols = tuple(as_partition(c) for c in cols)
        return RationalMatrix.build(rows, cols, lambda r, c: self[r, c])

    def leading(self, k: int) -> "RationalMatrix":
        return RationalMatrix(
            self.row_labels[:k], self.col_labels[:k], tuple(r[:k] for r in self.entries[:k])
        )

    def is_lower_triangular(self) -> bool:
        return all(self.entries[i][j] == 0 for i in range(len(self.entries)) for j in range(i + 1, len(self.entries[i])))

    def is_upper_triangular(self) -> bool:
        return self.transpose().is_lower_triangular()

    def is_upper_unitriangular(self) -> bool:
        return self.is_upper_triangular() and all(self.entries[i][i] == 1 for i in range(len(self.entries)))

    def determinant(self) -> Fraction:
        a = [list(r) for r in self.entries]
        size = len(a)
        det = Fraction(1)
        for col in range(size):
            pivot = next((r for r in range(col, size) if a[r][col] != 0), None)
            if pivot is None:
                return Fraction(0)
            if pivot != col:
                a[col], a[pivot] = a[pivot], a[col]
                det = -det
            det *= a[col][col]
            for r in range(col + 1, size):
                if a[r][col]:
                    f = a[r][col] / a[col][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        return det

    def inverse(self) -> "RationalMatrix":
        """Exact inverse; triangular inputs use substitution, others Gauss-Jordan.
        The inverse of a matrix with rows R and columns C has rows C and columns R."""
        size = len(self.entries)
        if len(self.col_labels) != size:
            raise ValueError("only square matrices are invertible")
        if self.is_lower_triangular():
            inv = _lower_inverse(self.entries)
        elif self.is_upper_triangular():
            inv = [list(r) for r in zip(*_lower_inverse(tuple(zip(*self.entries))))]
        else:
            inv = _gauss_jordan_inverse(self.entries)
        return RationalMatrix(self.col_labels, self.row_labels, tuple(tuple(r) for r in inv))

    def solve(self, rhs: Sequence) -> list[Fraction]:
        """Unique solution of ``self @ x = rhs``."""
        inv = self.inverse()
        rhs = [_frac(b) for b in rhs]
        return [sum((a * b for a, b in zip(r, rhs)), Fraction(0)) for r in inv.entries]

    def to_csv(self, corner: str = "") -> str:
        lines = [",".join([corner] + [f'"{c}"' for c in self.col_labels])]
        for label, r in zip(self.row_labels, self.entries):
            lines.append(",".join([f'"{label}"'] + [format_rational(x) for x in r]))
        return "\n".join(lines) + "\n"

    def to_nested(self) -> dict[str, dict[str, str]]:
        return {
            str(rl): {str(cl): format_rational(x) for cl, x in zip(self.col_labels, r)}
            for rl, r in zip(self.row_labels, self.entries)
        }

    @classmethod
    def from_nested(cls, doc: dict[str, dict[str, str]]) -> "RationalMatrix":
        rows = [Partition.parse(k) for k in doc]
        cols = [Partition.parse(k) for k in next(iter(doc.values()))]
        return cls.build(rows, cols, lambda r, c: Fraction(doc[str(r)][str(c)]))


def _lower_inverse(entries) -> list[list[Fraction]]:
    size = len(entries)
    inv = [[Fraction(0)] * size for _ in range(size)]
    for j in range(size):
        if entries[j][j] == 0:
            raise ZeroDivisionError("singular triangular matrix")
        inv[j][j] = 1 / _frac(entries[j][j])
        for i in range(j + 1, size):
            s = sum((entries[i][k] * inv[k][j] for k in range(j, i) if entries[i][k]), Fraction(0))
            inv[i][j] = -s / entries[i][i]
    return inv


def _gauss_jordan_inverse(entries) -> list[list[Fraction]]:
    size = len(entries)
    a = [list(map(_frac, r)) + [Fraction(int(i == j)) for j in range(size)] for i, r in enumerate(entries)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if a[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[pivot] = a[pivot], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(size):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [r[size:] for r in a]


# --- synchronized memoization ------------------------------------------------

_MEMO: dict[tuple, RationalMatrix] = {}
_MEMO_LOCK = threading.Lock()
_KEY_LOCKS: dict[tuple, threading.Lock] = {}
_STORE = None


def set_backing_store(store) -> None:
    """Optional second level behind the memo: any object with ``get(key)``
    returning a matrix or ``None`` and ``put(key, matrix)``."""
    global _STORE
    _STORE = store


def _memoized(key: tuple, build: Callable[[], RationalMatrix]) -> RationalMatrix:
    with _MEMO_LOCK:
        if key in _MEMO:
            return _MEMO[key]
        lock = _KEY_LOCKS.setdefault(key, threading.Lock())
    with lock:
        with _MEMO_LOCK:
            if key in _MEMO:
                return _MEMO[key]
        store = _STORE
        value = store.get(key) if store is not None else None
        if value is None:
            value = build()
            if store is not None:
                store.put(key, value)
        with _MEMO_LOCK:
            _MEMO[key] = value
        return value


def clear_memo() -> None:
    with _MEMO_LOCK:
        _MEMO.clear()


def seed_memo(key: tuple, value: RationalMatrix) -> None:
    with _MEMO_LOCK:
        _MEMO.setdefault(key, value)


# --- permutation characters D(n) ---------------------------------------------


def perm_char_entry(lam, mu) -> int:
    """Ordered set partitions ``(B_1..B_ℓ(μ))`` of the parts of λ with block sums μ_j."""
    lam, mu = as_partition(lam), as_partition(mu)

    @lru_cache(maxsize=None)
    def rec(i: int, caps: tuple[int, ...]) -> int:
        if i == len(lam):
            return int(not any(caps))
        total = 0
        for j, c in enumerate(caps):
            if c >= lam[i]:
                total += rec(i + 1, caps[:j] + (c - lam[i],) + caps[j + 1:])
        return total

    return rec(0, tuple(mu))


def perm_char_matrix(n: int) -> RationalMatrix:
    parts = enumerate_partitions(n)
    return _memoized(("perm", n), lambda: RationalMatrix.build(parts, parts, perm_char_entry))


# --- tableaux and horizontal strips ------------------------------------------


@dataclass(frozen=True)
class SemistandardTableau:
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for r in self.rows:
            if any(r[j] > r[j + 1] for j in range(len(r) - 1)):
                raise ValueError("rows must weakly increase")
        for i in range(len(self.rows) - 1):
            if len(self.rows[i + 1]) > len(self.rows[i]):
                raise ValueError("row lengths must weakly decrease")
            if any(self.rows[i][j] >= self.rows[i + 1][j] for j in range(len(self.rows[i + 1]))):
                raise ValueError("columns must strictly increase")

    @property
    def shape(self) -> Partition:
        return Partition(len(r) for r in self.rows)

    def weight(self) -> tuple[int, ...]:
        top = max((max(r) for r in self.rows if r), default=0)
        return tuple(sum(r.count(v) for r in self.rows) for v in range(1, top + 1))

    def chain(self) -> list[Partition]:
        """``∅ = λ^(0) ⊂ λ^(1) ⊂ ...``: λ^(i) is the shape of entries ≤ i."""
        top = len(self.weight())
        return [Partition(x for x in (sum(1 for e in r if e <= i) for r in self.rows) if x) for i in range(top + 1)]


def horizontal_strips_below(nu: Partition, size: int) -> Iterator[Partition]:
    """Every κ ⊆ ν with ν/κ a horizontal strip of ``size`` cells."""
    nu = tuple(nu)
    k = len(nu)

    def rec(i, remaining, acc):
        if i == k:
            if remaining == 0:
                yield Partition(x for x in acc if x)
            return
        low = nu[i + 1] if i + 1 < k else 0
        for kappa_i in range(nu[i], low - 1, -1):
            take = nu[i] - kappa_i
            if take > remaining:
                break
            yield from rec(i + 1, remaining - take, acc + [kappa_i])

    yield from rec(0, size, [])


def enumerate_ssyt(shape, weight: Sequence[int]) -> Iterator[SemistandardTableau]:
    """Semistandard tableaux of ``shape`` whose value ``i`` occurs ``weight[i-1]`` times."""
    shape = as_partition(shape)
    weight = tuple(weight)
    if sum(weight) != shape.n:
        return

    def rec(nu: Partition, i: int, fill: dict):
        if i == 0:
            if not nu:
                rows = tuple(tuple(fill[(r, c)] for c in range(shape[r])) for r in range(len(shape)))
                yield SemistandardTableau(rows)
            return
        if len(nu) > i:
            return
        for kappa in horizontal_strips_below(nu, weight[i - 1]):
            new = dict(fill)
            for r, length in enumerate(nu):
                start = kappa[r] if r < len(kappa) else 0
                for c in range(start, length):
                    new[(r, c)] = i
            yield from rec(kappa, i - 1, new)

    yield from rec(shape, len(weight), {})


# --- arm/leg data and Ψ weights ----------------------------------------------


@dataclass(frozen=True)
class ArmLegData:
    shape: Partition
    arms: dict
    legs: dict

    @classmethod
    def of(cls, lam) -> "ArmLegData":
        lam = as_partition(lam)
        arms, legs = {}, {}
        for cell in lam.cells():
            arms[cell], legs[cell] = arm_leg(lam, *cell)
        return cls(lam, arms, legs)

    def hook(self, cell) -> int:
        return self.arms[cell] + self.legs[cell] + 1


def b_factor(lam, cell, alpha) -> Fraction:
    """``b_λ(s) = (α a + l + 1) / (α a + l + α)``."""
    a, l = arm_leg(lam, *cell)
    alpha = _frac(alpha)
    return (alpha * a + l + 1) / (alpha * a + l + alpha)


@lru_cache(maxsize=None)
def psi_skew(lam: Partition, mu: Partition, alpha: Fraction) -> Fraction:
    """``Ψ_{λ/μ}`` for a horizontal strip: product of ``b_μ(s)/b_λ(s)`` over the
    cells ``s`` of μ lying in a row that meets λ/μ but in no column that does."""
    rows = set()
    cols = set()
    for i, li in enumerate(lam):
        mi = mu[i] if i < len(mu) else 0
        if li > mi:
            rows.add(i)
            cols.update(range(mi, li))
    out = Fraction(1)
    for i, j in mu.cells():
        if i in rows and j not in cols:
            out *= b_factor(mu, (i, j), alpha) / b_factor(lam, (i, j), alpha)
    return out


def psi_tableau(tab: SemistandardTableau, alpha) -> Fraction:
    alpha = _frac(alpha)
    chain = tab.chain()
    out = Fraction(1)
    for lo, hi in zip(chain, chain[1:]):
        out *= psi_skew(hi, lo, alpha)
    return out


def alpha_kostka_by_tableaux(lam, mu, alpha) -> Fraction:
    """``K^(α)_{λμ} = Σ_T Ψ_T`` by explicit enumeration of the tableaux."""
    return sum((psi_tableau(T, alpha) for T in enumerate_ssyt(lam, mu)), Fraction(0))


def _chain_sums(mu: Partition, weight: Callable[[Partition, Partition], object]):
    """Memoized sum over strip chains ∅ ⊂ ... ⊂ ν with strip sizes μ_1, μ_2, ...
    of the product of ``weight(outer, inner)``; ``rec(λ, ℓ(μ))`` is the tableau
    sum for shape λ and weight μ, with shared prefixes counted once."""

    @lru_cache(maxsize=None)
    def rec(nu: Partition, i: int):
        if i == 0:
            return 1 if not nu else 0
        if len(nu) > i:
            return 0
        total = 0
        for kappa in horizontal_strips_below(nu, mu[i - 1]):
            sub = rec(kappa, i - 1)
            if sub:
                total += sub * weight(nu, kappa)
        return total

    return rec


def _chain_matrix(n: int, weight) -> RationalMatrix:
    parts = enumerate_partitions(n)
    columns = {}
    for mu in parts:
        rec = _chain_sums(mu, weight)
        columns[mu] = {lam: rec(lam, len(mu)) for lam in parts}
    return RationalMatrix.build(parts, parts, lambda lam, mu: columns[mu][lam])


def kostka_number(lam, mu) -> int:
    mu = as_partition(mu)
    return _chain_sums(mu, lambda a, b: 1)(as_partition(lam), len(mu))


def alpha_kostka_entry(lam, mu, alpha) -> Fraction:
    alpha = _frac(alpha)
    mu = as_partition(mu)
    rec = _chain_sums(mu, lambda a, b: psi_skew(a, b, alpha))
    return Fraction(rec(as_partition(lam), len(mu)))


def kostka_matrix(n: int) -> RationalMatrix:
    return _memoized(("kostka", n), lambda: _chain_matrix(n, lambda a, b: 1))


def _check_alpha(alpha) -> Fraction:
    alpha = _frac(alpha)
    if alpha <= 0:
        raise ValueError(f"alpha must be positive (got {alpha})")
    return alpha


def alpha_kostka_matrix(n: int, alpha=2) -> RationalMatrix:
    alpha = _check_alpha(alpha)
    return _memoized(
        ("alpha-kostka", n, alpha),
        lambda: _chain_matrix(n, lambda a, b: psi_skew(a, b, alpha)),
    )


def power_sum_gram(n: int, alpha) -> dict[Partition, Fraction]:
    """Diagonal of ``⟨p_λ, p_μ⟩ = α^{ℓ(λ)} z_λ δ_{λμ}``."""
    alpha = _frac(alpha)
    return {p: alpha ** len(p) * aut_weight(p) for p in enumerate_partitions(n)}


def gram_schmidt_jack(n: int, alpha=2) -> RationalMatrix:
    """Jack P in the monomial basis from orthogonality alone.

    Monomials are expanded in power sums through ``D(n)^{-1}``; the P's are then
    produced by Gram-Schmidt in increasing reverse-lex order, which forces the
    upper-unitriangular shape.
    """
    alpha = _check_alpha(alpha)
    parts = enumerate_partitions(n)
    d_inv = perm_char_matrix(n).inverse()  # rows: m basis, cols: p basis
    gram = power_sum_gram(n, alpha)
    m_in_p = {lam: d_inv.row(lam) for lam in parts}
    p_weights = [gram[p] for p in parts]

    def inner(u: dict, v: dict) -> Fraction:
        # u, v map monomial labels to coefficients
        pu = [sum((c * m_in_p[l][k] for l, c in u.items()), Fraction(0)) for k in range(len(parts))]
        pv = [sum((c * m_in_p[l][k] for l, c in v.items()), Fraction(0)) for k in range(len(parts))]
        return sum((a * b * w for a, b, w in zip(pu, pv, p_weights)), Fraction(0))

    done: list[tuple[Partition, dict, Fraction]] = []
    rows = {}
    for lam in reversed(parts):
        vec = {lam: Fraction(1)}
        for mu, pvec, norm in done:
            coeff = inner({lam: Fraction(1)}, pvec) / norm
            for k, c in pvec.items():
                vec[k] = vec.get(k, Fraction(0)) - coeff * c
        done.append((lam, vec, inner(vec, vec)))
        rows[lam] = vec
    return RationalMatrix.build(parts, parts, lambda r, c: rows[r].get(c, 0))


# --- character tables --------------------------------------------------------


def sym_char_table(n: int) -> RationalMatrix:
    """Irreducible characters of ``S_n``: entry ``(λ, ρ) = χ^λ(ρ)``."""

    def build():
        return (perm_char_matrix(n) @ kostka_matrix(n).inverse()).transpose()

    return _memoized(("char", n), build)


def zonal_character_table(n: int) -> RationalMatrix:
    """Spherical functions: entry ``(λ, ρ) = ω^λ_ρ`` with ``ω^λ_{(1^n)} = 1``.

    ``D(n) · K^(2)(n)^{-1}`` expands power sums in Jack P at α = 2; its column λ
    is proportional to ω^λ and is rescaled so the entry at ``(1^n)`` is 1.
    """

    def build():
        raw = perm_char_matrix(n) @ alpha_kostka_matrix(n, 2).inverse()
        ones = Partition((1,) * n)
        scale = {lam: raw[ones, lam] for lam in raw.col_labels}
        return raw.map(lambda rho, lam, x: x / scale[lam]).transpose()

    return _memoized(("zonal", n), build)


def leading_minor(matrix: RationalMatrix, n: int, t: int) -> RationalMatrix:
    """The block on the fat partitions other than ``(n-t,1^t)``."""
    check_t_range(n, t)
    labels = fat_partitions(n, t)
    assert labels[-1] == hook_partition(n, t)
    size = len(labels) - 1
    if matrix.row_labels[:size] != labels[:size] or matrix.col_labels[:size] != labels[:size]:
        raise ValueError("matrix is not labelled by partitions of n in reverse-lex order")
    return matrix.leading(size)
