import random
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from zonalscheme.matchings import (
    PerfectMatching,
    ResourceError,
    canonical_family,
    cycle_type,
    disjoint_edge_sets,
    enumerate_matchings,
)
from zonalscheme.partitions import Partition, double_factorial, enumerate_partitions, fat_partitions
from zonalscheme.scheme import (
    MatchingFunction,
    ScaledMatrix,
    Tabloid,
    Tableau,
    aligned_tableau,
    build_scheme,
    covers,
    fourier_support,
    idempotent,
    p_table,
    polytabloid_function,
    project,
    projections,
    scheme_axiom_failures,
    spherical_oracle,
)
from zonalscheme.symfunc import zonal_character_table

P = Partition
M = PerfectMatching.parse

KNOWN_TABLE = [
    [48, 32, 12, 12, 1],
    [-8, 4, -2, 5, 1],
    [-2, -8, 7, 2, 1],
    [4, -2, -2, -1, 1],
    [-6, 8, 3, -6, 1],
]


@pytest.fixture(scope="module")
def scheme4():
    return build_scheme(4)


@pytest.fixture(scope="module")
def scheme5():
    return build_scheme(5)


def test_p_table_matches_printed_table(scheme4):
    assert [list(r) for r in scheme4.p_table.entries] == KNOWN_TABLE
    assert scheme4.p_table.row_labels == enumerate_partitions(4)


@pytest.mark.parametrize("n", range(2, 9))
def test_p_table_rows_and_columns(n):
    table = p_table(n)
    valency = {rho: table[P((n,)), rho] for rho in table.col_labels}
    assert all(x == 1 for x in table.column(P((1,) * n)))
    for lam in table.row_labels:
        total = sum(table.row(lam))
        assert total == (double_factorial(2 * n - 1) if lam == P((n,)) else 0)
    dims = build_scheme(n, verify=False).dims
    size = double_factorial(2 * n - 1)
    for lam in table.row_labels:
        for mu in table.row_labels:
            s = sum(table[lam, r] * table[mu, r] / valency[r] for r in table.col_labels)
            assert s == (Fraction(size, dims[lam]) if lam == mu else 0)


@pytest.mark.parametrize("n", range(2, 9))
def test_sphere_union_eigenvalue_bound(n):
    # |sum over a union of fat spheres| <= sqrt(|M| |Omega| / dim), squared to stay exact
    table = p_table(n)
    scheme = build_scheme(n, verify=False)
    t = (n - 1) // 2
    fat = fat_partitions(n, t) if t >= 1 else (P((n,)),)
    size = scheme.size
    for k in range(1, len(fat) + 1):
        for union in combinations(fat, k):
            omega = sum(scheme.valencies[r] for r in union)
            for lam in table.row_labels:
                s = sum(table[lam, r] for r in union)
                assert s * s * scheme.dims[lam] <= size * omega


@pytest.mark.parametrize("n", [2, 3, 4])
def test_scheme_axioms(n):
    scheme = build_scheme(n)
    assert scheme_axiom_failures(scheme) == []


def test_associates_are_caps():
    with pytest.raises(ResourceError):
        build_scheme(6).associate((6,))
    assert build_scheme(6).p_table.shape == (11, 11)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_eigenvalue_consistency(n):
    scheme = build_scheme(n)
    for lam in scheme.labels:
        e = idempotent(scheme, lam)
        for rho in scheme.labels:
            a = ScaledMatrix(scheme.associate(rho))
            assert a @ e == e.scale(scheme.p_table[lam, rho])


@pytest.mark.parametrize("n", [2, 3, 4])
def test_idempotents(n):
    scheme = build_scheme(n)
    es = {lam: idempotent(scheme, lam) for lam in scheme.labels}
    total = None
    for lam, e in es.items():
        assert e @ e == e
        assert e.trace() == scheme.dims[lam]
        total = e if total is None else total + e
        for mu, f in es.items():
            if mu != lam:
                assert (e @ f).is_zero()
    assert total == ScaledMatrix.identity(scheme.size)
    j = ScaledMatrix(np.ones((scheme.size, scheme.size), dtype=np.int64), scheme.size)
    assert es[P((n,))] == j


def test_idempotent_trace_example(scheme4):
    assert idempotent(scheme4, (3, 1)).trace() == 20


@pytest.mark.parametrize("n", [3, 4])
def test_project_matches_matrix_product(n):
    scheme = build_scheme(n)
    rng = random.Random(n)
    f = MatchingFunction(n, tuple(Fraction(rng.randint(-5, 5)) for _ in range(scheme.size)))
    vec = ScaledMatrix(np.array([[int(v)] for v in f.values], dtype=np.int64))
    total = MatchingFunction(n, (Fraction(0),) * scheme.size)
    for mu in scheme.labels:
        proj = project(f, mu, scheme)
        expected = idempotent(scheme, mu) @ vec
        assert list(proj.values) == [r[0] for r in expected.to_fractions()]
        total = total + proj
    assert total == f


def test_project_constant(scheme4):
    one = MatchingFunction.constant(4)
    parts = projections(one, scheme4)
    assert parts[P((4,))] == one
    assert all(parts[mu].is_zero() for mu in scheme4.labels if mu != P((4,)))


def test_fourier_support_single_edge(scheme4):
    f = MatchingFunction.indicator(4, canonical_family([(1, 2)], 4))
    assert fourier_support(f, scheme4) <= {P((4,)), P((3, 1))}


def test_fourier_support_of_spherical_rows(scheme4):
    w = zonal_character_table(4)
    base = PerfectMatching.identity(4)
    for lam in scheme4.labels:
        f = MatchingFunction(4, tuple(w[lam, cycle_type(base, m)] for m in scheme4.matchings()))
        assert fourier_support(f, scheme4) == {lam}


def test_fat_configuration_hits_hook(scheme5):
    f = MatchingFunction.indicator(5, canonical_family([(3, 4), (5, 6)], 5))
    assert P((3, 1, 1)) in fourier_support(f, scheme5)


@pytest.mark.parametrize("n, t", [(3, 1), (4, 1), (5, 1), (5, 2)])
def test_canonical_support_is_fat(n, t):
    scheme = build_scheme(n, verify=False)
    fat = set(fat_partitions(n, t))
    for T in disjoint_edge_sets(n, t):
        f = MatchingFunction.indicator(n, canonical_family(T, n))
        assert fourier_support(f, scheme) <= fat


def test_canonical_support_outside_range_is_informational():
    # (n, t) = (4, 2) violates t < n/2, so only the trivial component is asserted
    scheme = build_scheme(4)
    support = fourier_support(MatchingFunction.indicator(4, canonical_family([(1, 2), (3, 4)], 4)), scheme)
    assert P((4,)) in support
    print("support of F_{12,34} at n=4:", sorted(str(p) for p in support))


SAMPLE_TABLOID = Tabloid.of([[1, 2, 3, 4, 5, 6, 11, 12], [7, 8, 9, 10], [13, 14]])


def test_covers_printed_examples():
    assert covers(SAMPLE_TABLOID, M("1 12|2 3|4 5|6 11|7 9|8 10|13 14"))
    assert not covers(SAMPLE_TABLOID, M("1 7|2 4|3 8|5 12|6 11|9 10|13 14"))
    assert SAMPLE_TABLOID.shape == P((8, 4, 2))


def test_one_row_covers_everything():
    tab = Tabloid.of([range(1, 9)])
    assert all(covers(tab, m) for m in enumerate_matchings(4))


def test_tabloid_validation():
    with pytest.raises(ValueError):
        Tabloid.of([[1, 2], [2, 3]])
    with pytest.raises(ValueError):
        Tableau(((1, 2), (3, 4, 5, 6)))


def test_polytabloid_one_row():
    f = polytabloid_function(Tableau((tuple(range(1, 7)),)))
    assert f == MatchingFunction.constant(3)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_polytabloids_are_eigenfunctions(n):
    scheme = build_scheme(n)
    for lam in scheme.labels:
        f = polytabloid_function(aligned_tableau(lam))
        assert fourier_support(f, scheme) in ({lam}, set())


def test_polytabloid_hook_at_three():
    tab = Tableau(((1, 2, 3, 4), (5, 6)))
    assert fourier_support(polytabloid_function(tab)) <= {P((2, 1))}


def test_fat_nonzero_inner_product():
    # standard tableau of shape 2(n-1,1) with second row {3,4}
    tab = Tableau(((1, 2, 5, 6, 7, 8), (3, 4)))
    f_t = polytabloid_function(tab)
    indicator = MatchingFunction.indicator(4, canonical_family([(3, 4)], 4))
    assert indicator.inner(f_t) > 0


def test_spherical_oracle_examples():
    assert spherical_oracle((4,), (2, 2), 4) == 1
    assert spherical_oracle((3, 1), (4,), 4) == Fraction(-1, 6)
    assert spherical_oracle((2, 2), (2, 2), 4) == Fraction(7, 12)
    with pytest.raises(ResourceError):
        spherical_oracle((5,), (5,), 5)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_spherical_oracle_matches_zonal(n):
    w = zonal_character_table(n)
    for lam in w.row_labels:
        for rho in w.col_labels:
            assert spherical_oracle(lam, rho, n) == w[lam, rho]


def test_matching_function_domain():
    with pytest.raises(ValueError):
        MatchingFunction(3, (Fraction(1),))
