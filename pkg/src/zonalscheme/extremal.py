"""Exact searches for the largest t-intersecting families on small ground sets.

A t-intersecting family is a clique in the graph joining matchings that share
at least ``t`` edges. The graph is vertex transitive, so every search fixes
the base matching ``m*`` as a member and only branches over its neighbours.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from functools import lru_cache

from .matchings import (
    EdgeSet,
    PerfectMatching,
    ResourceError,
    _all_matchings,
    canonical_family,
    common_edges,
    cycle_type_raw,
    disjoint_edge_sets,
    is_t_intersecting,
)
from .partitions import double_factorial


SEARCH_CAP = 4
LARGE_SEARCH = (5, 1)


@dataclass(frozen=True)
class SearchResult:
    n: int
    t: int
    optimum: int
    witness: tuple[PerfectMatching, ...]
    matches_canonical: bool
    elapsed: float

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "t": self.t,
            "optimum": self.optimum,
            "witness": [str(m) for m in self.witness],
            "matchesCanonical": self.matches_canonical,
        }


@lru_cache(maxsize=None)
def _edge_masks(n: int) -> tuple[int, ...]:
    """Each matching as a bitmask over the edges of ``K_{2n}``."""
    size = 2 * n
    index = {}
    for u in range(size):
        for v in range(u + 1, size):
            index[(u, v)] = len(index)
    out = []
    for m in _all_matchings(n):
        mask = 0
        for u, v in enumerate(m.partner):
            if u < v:
                mask |= 1 << index[(u, v)]
        out.append(mask)
    return tuple(out)


@lru_cache(maxsize=None)
def _intersection_graph(n: int, t: int) -> tuple[int, ...]:
    """Neighbourhood bitsets of the graph "shares at least t edges"."""
    masks = _edge_masks(n)
    adj = []
    for i, a in enumerate(masks):
        bits = 0
        for j, b in enumerate(masks):
            if i != j and (a & b).bit_count() >= t:
                bits |= 1 << j
        adj.append(bits)
    return tuple(adj)


def _check_caps(n: int, t: int, allow_large: bool) -> None:
    if n < 1 or t < 1:
        raise ValueError("need n >= 1 and t >= 1")
    if n <= SEARCH_CAP:
        return
    if allow_large and (n, t) == LARGE_SEARCH:
        return
    raise ResourceError(f"exact search is capped at n={SEARCH_CAP} (n=5, t=1 with allow_large)")


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _color_order(cand: int, adj: tuple[int, ...], order: list[int]) -> list[tuple[int, int]]:
    """Greedy colouring of ``cand`` in the fixed vertex order; returns
    ``(vertex, colour)`` pairs sorted by colour."""
    out = []
    color = 0
    remaining = [v for v in order if cand >> v & 1]
    while remaining:
        color += 1
        blocked = 0
        rest = []
        for v in remaining:
            if blocked >> v & 1:
                rest.append(v)
            else:
                out.append((v, color))
                blocked |= adj[v]
        # vertices adjacent to a member of this colour class wait for the next one
        remaining = rest
    return out


class _CliqueSearch:
    def __init__(self, n: int, t: int, root: int, collect_at: int | None = None):
        self.adj = _intersection_graph(n, t)
        ms = _all_matchings(n)
        base = ms[root].partner
        # most-shared first: descending cycle type relative to the root
        self.order = sorted(range(len(ms)), key=lambda i: (cycle_type_raw(base, ms[i].partner)[::-1], i))
        self.root = root
        self.best: tuple[int, ...] = ()
        self.collect_at = collect_at
        self.found: list[tuple[int, ...]] = []
        self.nodes = 0

    def run(self, incumbent: tuple[int, ...]) -> None:
        self.best = incumbent
        self._expand([self.root], self.adj[self.root])

    def _expand(self, chosen: list[int], cand: int) -> None:
        self.nodes += 1
        if not cand:
            if self.collect_at is not None:
                if len(chosen) == self.collect_at:
                    self.found.append(tuple(sorted(chosen)))
            elif len(chosen) > len(self.best):
                self.best = tuple(sorted(chosen))
            return
        colored = _color_order(cand, self.adj, self.order)
        for v, color in reversed(colored):
            target = self.collect_at if self.collect_at is not None else len(self.best) + 1
            if len(chosen) + color < target:
                return
            chosen.append(v)
            self._expand(chosen, cand & self.adj[v])
            chosen.pop()
            cand &= ~(1 << v)


def _canonical_incumbent(n: int, t: int) -> tuple[int, ...]:
    base = PerfectMatching.identity(n)
    T = EdgeSet.of(base.edges()[:t])
    index = {m: i for i, m in enumerate(_all_matchings(n))}
    return tuple(sorted(index[m] for m in canonical_family(T, n)))


def max_independent_exact(n: int, t: int, allow_large: bool = False) -> SearchResult:
    """Largest t-intersecting family, found as a maximum clique containing ``m*``.

    The canonical family through the first ``t`` edges of ``m*`` seeds the
    incumbent, so it is returned whenever nothing strictly larger exists.
    """
    _check_caps(n, t, allow_large)
    start = time.perf_counter()
    ms = _all_matchings(n)
    incumbent = _canonical_incumbent(n, t) if t <= n else (0,)
    search = _CliqueSearch(n, t, 0)
    search.run(incumbent)
    witness = tuple(ms[i] for i in search.best)
    canonical = len(common_edges(witness)) >= t
    return SearchResult(n, t, len(witness), witness, canonical, time.perf_counter() - start)


@dataclass(frozen=True)
class ExtremalReport:
    n: int
    t: int
    optimum: int
    families_through_base: int
    fixed_edge_sets: tuple[EdgeSet, ...]
    all_canonical: bool

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "t": self.t,
            "optimum": self.optimum,
            "familiesThroughBase": self.families_through_base,
            "fixedEdgeSets": [[list(e) for e in T.edges] for T in self.fixed_edge_sets],
            "allCanonical": self.all_canonical,
        }


def verify_extremal(n: int, t: int, allow_large: bool = False) -> tuple[bool, ExtremalReport]:
    """Enumerate every maximum family containing ``m*`` and test whether each
    one is canonical, i.e. its members share at least ``t`` common edges."""
    result = max_independent_exact(n, t, allow_large)
    ms = _all_matchings(n)
    search = _CliqueSearch(n, t, 0, collect_at=result.optimum)
    search.run(())
    families = sorted(set(search.found))
    fixed = []
    ok = True
    for fam in families:
        common = common_edges(ms[i] for i in fam)
        if len(common) < t:
            ok = False
        fixed.append(EdgeSet.of(tuple(e) for e in common))
    report = ExtremalReport(n, t, result.optimum, len(families), tuple(fixed), ok)
    return ok, report


# --- cross-intersecting pairs ------------------------------------------------


@dataclass(frozen=True)
class CrossReport:
    n: int
    t: int
    bound_squared: int
    canonical_pairs: int
    cross_intersecting_pairs: int
    unexpected_pairs: tuple
    canonical_products_ok: bool
    samples: int
    max_sampled_product: int
    sampled_within_bound: bool
    asserted: bool

    @property
    def ok(self) -> bool:
        sampled = self.sampled_within_bound or not self.asserted
        return self.canonical_products_ok and not self.unexpected_pairs and sampled

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "t": self.t,
            "boundSquared": self.bound_squared,
            "canonicalPairs": self.canonical_pairs,
            "crossIntersectingPairs": self.cross_intersecting_pairs,
            "unexpectedPairs": [[[list(e) for e in T.edges] for T in pair] for pair in self.unexpected_pairs],
            "canonicalProductsOk": self.canonical_products_ok,
            "samples": self.samples,
            "maxSampledProduct": self.max_sampled_product,
            "sampledWithinBound": self.sampled_within_bound,
            "asserted": self.asserted,
            "ok": self.ok,
        }


def _family_masks(n: int, T: EdgeSet) -> list[int]:
    index = {m: i for i, m in enumerate(_all_matchings(n))}
    masks = _edge_masks(n)
    return [masks[index[m]] for m in canonical_family(T, n)]


def _cross(first: list[int], second: list[int], t: int) -> bool:
    return all((a & b).bit_count() >= t for a in first for b in second)


def _closure(seed: list[int], masks: tuple[int, ...], t: int) -> list[int]:
    """Every matching that shares at least ``t`` edges with each member of ``seed``."""
    return [m for m in masks if all((m & s).bit_count() >= t for s in seed)]


def cross_pair_witness(n: int, t: int, T, U) -> tuple[PerfectMatching, PerfectMatching] | None:
    """A pair from ``F_T x F_U`` sharing fewer than ``t`` edges, if one exists."""
    for a in canonical_family(T, n):
        for b in canonical_family(U, n):
            if len(a.edge_set() & b.edge_set()) < t:
                return a, b
    return None


def cross_product_check(n: int, t: int, seed: int = 0, samples: int = 200) -> CrossReport:
    """Canonical pairs ``F_T, F_U`` are t-cross-intersecting exactly when
    ``T = U``, and their product is always ``((2(n-t)-1)!!)^2``. Random
    cross-intersecting pairs are built by closing a random seed family twice;
    their products are asserted against the bound only where the cross-ratio
    certificate applies."""
    from .spectral import cross_ratio_value

    if n > SEARCH_CAP:
        raise ResourceError(f"cross-intersection checks are capped at n={SEARCH_CAP}")
    if not 1 <= t <= n:
        raise ValueError("need 1 <= t <= n")
    bound_sq = double_factorial(2 * (n - t) - 1) ** 2
    sets = list(disjoint_edge_sets(n, t))
    fams = [_family_masks(n, T) for T in sets]
    products_ok = all(len(f) * len(g) == bound_sq for f in fams for g in fams)
    crossing, unexpected = 0, []
    for i in range(len(sets)):
        for j in range(i, len(sets)):
            is_cross = _cross(fams[i], fams[j], t)
            crossing += is_cross
            if is_cross != (i == j):
                unexpected.append((sets[i], sets[j]))

    try:
        asserted = 2 * t < n and cross_ratio_value(n, t).applicable
    except ValueError:
        asserted = False
    rng = random.Random(seed)
    masks = _edge_masks(n)
    adj = _intersection_graph(n, t)
    best = 0
    for _ in range(samples):
        first = rng.randrange(len(masks))
        pool = [first] + [v for v in _bits(adj[first])]
        picks = rng.sample(pool, min(len(pool), rng.randint(1, 3)))
        g = _closure([masks[i] for i in picks], masks, t)
        if not g:
            continue
        f = _closure(g, masks, t)
        best = max(best, len(f) * len(g))
    return CrossReport(
        n=n,
        t=t,
        bound_squared=bound_sq,
        canonical_pairs=len(sets) * (len(sets) + 1) // 2,
        cross_intersecting_pairs=crossing,
        unexpected_pairs=tuple(unexpected),
        canonical_products_ok=products_ok,
        samples=samples,
        max_sampled_product=best,
        sampled_within_bound=best <= bound_sq,
        asserted=asserted,
    )


def witness_is_valid(result: SearchResult) -> bool:
    return len(result.witness) == result.optimum and is_t_intersecting(result.witness, result.t)
