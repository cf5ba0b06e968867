"""Perfect and near-perfect matchings of complete graphs.

Vertices are labelled ``1..2n`` in every public surface (parsing, printing,
edges, permutations). Internally a matching is a ``partner`` tuple with
0-based entries, ``partner[v] = u`` meaning vertices ``v+1`` and ``u+1`` are
paired. A near-perfect matching pairs its single unmatched vertex with itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterable, Iterator, Sequence

from .partitions import (
    Partition,
    as_partition,
    aut_weight,
    double_factorial,
    enumerate_partitions,
)

MATCHING_CAP = 7


class ResourceError(RuntimeError):
    """Raised when a request exceeds an explicit enumeration cap."""


def _check_involution(partner: Sequence[int], fixed_points: int) -> None:
    size = len(partner)
    if sorted(partner) != list(range(size)):
        raise ValueError(f"not a permutation of the vertex set: {partner}")
    fixed = 0
    for v, u in enumerate(partner):
        if partner[u] != v:
            raise ValueError(f"not an involution: {partner}")
        fixed += u == v
    if fixed != fixed_points:
        raise ValueError(f"expected {fixed_points} unmatched vertices, found {fixed}")


def _edges_of(partner: Sequence[int]) -> tuple[tuple[int, int], ...]:
    return tuple((v + 1, u + 1) for v, u in enumerate(partner) if v < u)


def _parse_pairs(text: str) -> list[list[int]]:
    groups = [g.split() for g in text.split("|")]
    return [[int(x) for x in g] for g in groups if g]


@dataclass(frozen=True, order=True)
class PerfectMatching:
    partner: tuple[int, ...]

    def __post_init__(self):
        if len(self.partner) % 2:
            raise ValueError("a perfect matching needs an even number of vertices")
        _check_involution(self.partner, 0)

    @classmethod
    def from_edges(cls, edges: Iterable[Iterable[int]], size: int | None = None) -> "PerfectMatching":
        edges = [tuple(e) for e in edges]
        size = size if size is not None else 2 * len(edges)
        partner = [-1] * size
        for u, v in edges:
            if partner[u - 1] != -1 or partner[v - 1] != -1:
                raise ValueError(f"edges overlap at {u} or {v}")
            partner[u - 1], partner[v - 1] = v - 1, u - 1
        return cls(tuple(partner))

    @classmethod
    def parse(cls, text: str) -> "PerfectMatching":
        """Parse ``"1 2|3 4"``."""
        return cls.from_edges(_parse_pairs(text))

    @classmethod
    def identity(cls, n: int) -> "PerfectMatching":
        """The base matching ``m* = 1 2|3 4|...|2n-1 2n``."""
        return cls(tuple(v ^ 1 for v in range(2 * n)))

    @property
    def n(self) -> int:
        return len(self.partner) // 2

    def edges(self) -> tuple[tuple[int, int], ...]:
        return _edges_of(self.partner)

    def edge_set(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(e) for e in self.edges())

    def mate(self, v: int) -> int:
        """Partner of vertex ``v`` (1-based)."""
        return self.partner[v - 1] + 1

    def __str__(self) -> str:
        return "|".join(f"{u} {v}" for u, v in self.edges())


@dataclass(frozen=True, order=True)
class NearPerfectMatching:
    partner: tuple[int, ...]

    def __post_init__(self):
        if len(self.partner) % 2 == 0:
            raise ValueError("a near-perfect matching needs an odd number of vertices")
        _check_involution(self.partner, 1)

    @classmethod
    def parse(cls, text: str) -> "NearPerfectMatching":
        """Parse ``"1 2|3"``: the singleton group is the unmatched vertex."""
        groups = _parse_pairs(text)
        size = sum(len(g) for g in groups)
        partner = [-1] * size
        for g in groups:
            if len(g) == 1:
                partner[g[0] - 1] = g[0] - 1
            else:
                u, v = g
                partner[u - 1], partner[v - 1] = v - 1, u - 1
        return cls(tuple(partner))

    @property
    def n(self) -> int:
        """Half of ``2n``, where the matching lives on ``2n - 1`` vertices."""
        return (len(self.partner) + 1) // 2

    @property
    def unmatched(self) -> int:
        return next(v for v, u in enumerate(self.partner) if u == v) + 1

    def edges(self) -> tuple[tuple[int, int], ...]:
        return _edges_of(self.partner)

    def __str__(self) -> str:
        parts = [f"{u} {v}" for u, v in self.edges()]
        parts.append(str(self.unmatched))
        return "|".join(parts)


# --- enumeration -------------------------------------------------------------


def _matching_partners(vertices: list[int], partner: list[int]) -> Iterator[None]:
    if not vertices:
        yield
        return
    v = vertices[0]
    rest = vertices[1:]
    for idx, u in enumerate(rest):
        partner[v], partner[u] = u, v
        yield from _matching_partners(rest[:idx] + rest[idx + 1:], partner)


def iter_partner_tuples(vertices: Sequence[int], size: int) -> Iterator[tuple[int, ...]]:
    """Partner arrays of all perfect matchings of ``vertices`` (0-based) inside
    a vertex set of ``size``; entries outside ``vertices`` are -1."""
    partner = [-1] * size
    for _ in _matching_partners(sorted(vertices), partner):
        yield tuple(partner)


@lru_cache(maxsize=None)
def _all_matchings(n: int) -> tuple[PerfectMatching, ...]:
    return tuple(PerfectMatching(p) for p in iter_partner_tuples(range(2 * n), 2 * n))


def enumerate_matchings(n: int, cap: int = MATCHING_CAP) -> list[PerfectMatching]:
    """All ``(2n-1)!!`` perfect matchings of ``K_{2n}`` in lexicographic order of
    their partner arrays (smallest unmatched vertex paired first)."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > cap:
        raise ResourceError(f"n={n} exceeds the matching enumeration cap {cap}")
    return list(_all_matchings(n))


def matching_index(n: int) -> dict[tuple[int, ...], int]:
    return {m.partner: i for i, m in enumerate(_all_matchings(n))}


def enumerate_near_matchings(n: int, cap: int = MATCHING_CAP) -> list[NearPerfectMatching]:
    """All near-perfect matchings of ``K_{2n-1}``, sorted by partner array."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > cap:
        raise ResourceError(f"n={n} exceeds the matching enumeration cap {cap}")
    size = 2 * n - 1
    out = []
    for u in range(size):
        others = [v for v in range(size) if v != u]
        for p in iter_partner_tuples(others, size):
            p = list(p)
            p[u] = u
            out.append(NearPerfectMatching(tuple(p)))
    out.sort()
    return out


# --- cycle types -------------------------------------------------------------


def cycle_type_raw(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """Half-lengths of the cycles of ``a ∪ b`` for partner tuples, decreasing."""
    size = len(a)
    seen = [False] * size
    parts = []
    for start in range(size):
        if seen[start]:
            continue
        length = 0
        v = start
        while not seen[v]:
            seen[v] = True
            u = a[v]
            seen[u] = True
            v = b[u]
            length += 1
        parts.append(length)
    parts.sort(reverse=True)
    return tuple(parts)


def cycle_type(m: PerfectMatching, other: PerfectMatching) -> Partition:
    """``d(m, m')``: the cycle type of ``m'`` with respect to ``m``."""
    if len(m.partner) != len(other.partner):
        raise ValueError("matchings live on different vertex sets")
    return Partition(cycle_type_raw(m.partner, other.partner))


def shared_edges(m: PerfectMatching, other: PerfectMatching) -> int:
    return sum(1 for v, u in enumerate(m.partner) if v < u and other.partner[v] == u)


def near_cycle_type(m: NearPerfectMatching, other: NearPerfectMatching) -> Partition:
    """``d'(m, m')`` with parts equal to the vertex counts of the components of
    ``m ∪ m'``: each even cycle contributes an even part and the single path
    (possibly one isolated vertex) contributes the unique odd part."""
    a, b = m.partner, other.partner
    if len(a) != len(b):
        raise ValueError("near-perfect matchings live on different vertex sets")
    size = len(a)
    seen = [False] * size
    parts = []
    # The path runs between the two unmatched vertices; walk it first.
    start = m.unmatched - 1
    v, count, use_b = start, 0, True
    while True:
        seen[v] = True
        count += 1
        nxt = b[v] if use_b else a[v]
        if nxt == v:
            break
        v = nxt
        use_b = not use_b
    parts.append(count)
    for s in range(size):
        if seen[s]:
            continue
        count = 0
        v = s
        while not seen[v]:
            seen[v] = True
            u = a[v]
            seen[u] = True
            v = b[u]
            count += 2
        parts.append(count)
    return Partition.from_multiset(parts)


def odd_part_partitions(size: int) -> tuple[Partition, ...]:
    """Partitions of an odd ``size`` with exactly one odd part, reverse-lex."""
    return tuple(p for p in enumerate_partitions(size) if sum(x % 2 for x in p) == 1)


# --- spheres -----------------------------------------------------------------


def sphere_size(lam, n: int) -> int:
    """``|Ω_λ| = (2n)!! / (2^{ℓ(λ)} z_λ)``."""
    lam = as_partition(lam)
    if lam.n != n:
        raise ValueError(f"{lam} is not a partition of {n}")
    num = double_factorial(2 * n)
    den = 2 ** len(lam) * aut_weight(lam)
    q, r = divmod(num, den)
    assert r == 0
    return q


@dataclass(frozen=True)
class Sphere:
    label: Partition
    n: int

    @property
    def size(self) -> int:
        return sphere_size(self.label, self.n)

    def members(self, base: PerfectMatching | None = None) -> Iterator[PerfectMatching]:
        base = base or PerfectMatching.identity(self.n)
        for m in enumerate_matchings(self.n):
            if cycle_type(base, m) == self.label:
                yield m

    def __contains__(self, m: PerfectMatching) -> bool:
        return cycle_type(PerfectMatching.identity(self.n), m) == self.label


# --- group action ------------------------------------------------------------


def _check_permutation(sigma: Sequence[int], size: int) -> None:
    if sorted(sigma) != list(range(1, size + 1)):
        raise ValueError(f"not a bijection on 1..{size}: {tuple(sigma)}")


def apply_permutation_raw(sigma: Sequence[int], partner: Sequence[int]) -> tuple[int, ...]:
    """Image of a partner tuple under a 0-based permutation tuple."""
    out = [0] * len(partner)
    for v, u in enumerate(partner):
        out[sigma[v]] = sigma[u]
    return tuple(out)


def apply_permutation(sigma: Sequence[int], m: PerfectMatching) -> PerfectMatching:
    """``σm``: relabel every edge ``{u,v}`` as ``{σ(u),σ(v)}``. ``sigma`` is in
    one-line notation, ``sigma[i-1] = σ(i)``."""
    _check_permutation(sigma, len(m.partner))
    return PerfectMatching(apply_permutation_raw([s - 1 for s in sigma], m.partner))


def hyperoctahedral_group(n: int) -> Iterator[tuple[int, ...]]:
    """The stabilizer of ``m*`` in ``S_{2n}`` as 0-based one-line permutations:
    permute the pairs, then optionally swap inside each pair."""
    for order in permutations(range(n)):
        for flips in range(2**n):
            sigma = [0] * (2 * n)
            for i, j in enumerate(order):
                f = (flips >> i) & 1
                sigma[2 * i] = 2 * j + f
                sigma[2 * i + 1] = 2 * j + 1 - f
            yield tuple(sigma)


# --- edge sets and families --------------------------------------------------


@dataclass(frozen=True)
class EdgeSet:
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"loop {u}-{v}")
            if u in seen or v in seen:
                raise ValueError(f"edges are not disjoint: {self.edges}")
            seen.update((u, v))

    @classmethod
    def of(cls, edges: Iterable[Iterable[int]]) -> "EdgeSet":
        return cls(tuple(sorted(tuple(sorted(e)) for e in edges)))

    def vertices(self) -> set[int]:
        return {v for e in self.edges for v in e}

    def __len__(self) -> int:
        return len(self.edges)


def canonical_family(T, n: int) -> list[PerfectMatching]:
    """``F_T``: every perfect matching of ``K_{2n}`` containing the edges of ``T``."""
    T = T if isinstance(T, EdgeSet) else EdgeSet.of(T)
    used = T.vertices()
    if any(not 1 <= v <= 2 * n for v in used):
        raise ValueError(f"edge set {T.edges} does not fit on {2 * n} vertices")
    free = [v for v in range(2 * n) if v + 1 not in used]
    out = []
    for p in iter_partner_tuples(free, 2 * n):
        p = list(p)
        for u, v in T.edges:
            p[u - 1], p[v - 1] = v - 1, u - 1
        out.append(PerfectMatching(tuple(p)))
    out.sort()
    return out


def disjoint_edge_sets(n: int, t: int) -> Iterator[EdgeSet]:
    """All sets of ``t`` pairwise disjoint edges of ``K_{2n}``."""
    all_edges = list(combinations(range(1, 2 * n + 1), 2))

    def rec(start, chosen, used):
        if len(chosen) == t:
            yield EdgeSet(tuple(chosen))
            return
        for i in range(start, len(all_edges)):
            u, v = all_edges[i]
            if u in used or v in used:
                continue
            yield from rec(i + 1, chosen + [(u, v)], used | {u, v})

    yield from rec(0, [], frozenset())


def is_t_intersecting(family: Iterable[PerfectMatching], t: int) -> bool:
    family = list(family)
    for i, a in enumerate(family):
        for b in family[i + 1:]:
            if shared_edges(a, b) < t:
                return False
    return True


def is_t_cross_intersecting(first, second, t: int) -> bool:
    return all(shared_edges(a, b) >= t for a in first for b in second)


def common_edges(family: Iterable[PerfectMatching]) -> frozenset[frozenset[int]]:
    family = list(family)
    if not family:
        return frozenset()
    common = family[0].edge_set()
    for m in family[1:]:
        common &= m.edge_set()
    return common


def count_t_derangements(n: int, t: int) -> int:
    """Brute-force ``D_2(n, t)`` by enumeration against ``m*``."""
    base = PerfectMatching.identity(n)
    return sum(1 for m in enumerate_matchings(n) if shared_edges(base, m) < t)


# --- near-perfect lift -------------------------------------------------------


def lift_near(m: NearPerfectMatching) -> PerfectMatching:
    """``ψ``: pair the new vertex ``2n`` with the unmatched vertex."""
    size = len(m.partner)
    u = m.unmatched - 1
    p = list(m.partner) + [u]
    p[u] = size
    return PerfectMatching(tuple(p))


def near_adjacent(m: NearPerfectMatching, other: NearPerfectMatching, t: int) -> bool:
    """Adjacency in ``Θ_t``: fewer than ``t`` parts of size at most 2."""
    return sum(1 for p in near_cycle_type(m, other) if p <= 2) < t


def perfect_adjacent(m: PerfectMatching, other: PerfectMatching, t: int) -> bool:
    """Adjacency in ``Γ_t``: fewer than ``t`` common edges."""
    return shared_edges(m, other) < t


def sphere_representative(lam) -> PerfectMatching:
    """A matching whose cycle type against ``m*`` is ``lam``: each part ``c``
    becomes one ``2c``-cycle on a block of consecutive vertices."""
    lam = as_partition(lam)
    partner = []
    start = 0
    for c in lam:
        block = list(range(start, start + 2 * c))
        local = [0] * (2 * c)
        if c == 1:
            local = [1, 0]
        else:
            for k in range(c):
                a, b = 2 * k + 1, (2 * k + 2) % (2 * c)
                local[a], local[b] = b, a
        partner.extend(block[x] for x in local)
        start += 2 * c
    return PerfectMatching(tuple(partner))
