from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from zonalscheme.matchings import sphere_size
from zonalscheme.partitions import (
    Partition,
    double_factorial,
    enumerate_partitions,
    fat_partitions,
    hook_dim,
    hook_product,
    hook_partition,
)
from zonalscheme.symfunc import (
    ArmLegData,
    RationalMatrix,
    SemistandardTableau,
    alpha_kostka_by_tableaux,
    alpha_kostka_entry,
    alpha_kostka_matrix,
    enumerate_ssyt,
    gram_schmidt_jack,
    kostka_matrix,
    kostka_number,
    leading_minor,
    perm_char_matrix,
    sym_char_table,
    zonal_character_table,
)
from zonalscheme.scheme import p_table

P = Partition


def test_rational_matrix_basics():
    labels = enumerate_partitions(2)
    m = RationalMatrix.from_rows(labels, labels, [[1, Fraction(2, 3)], [0, 1]])
    assert m["2", "1,1"] == Fraction(2, 3)
    assert m.is_upper_unitriangular()
    assert (m @ m.inverse()) == RationalMatrix.identity(labels)
    assert m.determinant() == 1
    assert RationalMatrix.from_nested(m.to_nested()) == m
    assert m.to_csv().splitlines()[1] == '"2",1,2/3'
    with pytest.raises(ValueError):
        m.submatrix(labels, labels[:1]).inverse()


def test_solve_general_matrix():
    labels = enumerate_partitions(3)
    m = RationalMatrix.from_rows(labels, labels, [[2, 1, 0], [1, 3, 1], [0, 1, 4]])
    x = m.solve([1, 2, 3])
    assert [sum(a * b for a, b in zip(r, x)) for r in m.entries] == [1, 2, 3]


def test_perm_char_small():
    d = perm_char_matrix(2)
    assert (d["2", "2"], d["1,1", "2"], d["1,1", "1,1"], d["2", "1,1"]) == (1, 1, 2, 0)


@pytest.mark.parametrize("n", range(1, 9))
def test_perm_char_shape(n):
    d = perm_char_matrix(n)
    top, ones = P((n,)), P((1,) * n)
    assert all(d[lam, top] == 1 for lam in d.row_labels)
    assert d[ones, ones] == factorial(n)
    assert d.is_lower_triangular()
    assert all(d.entries[i][i] != 0 for i in range(len(d.entries)))


def test_ssyt_and_kostka():
    tabs = list(enumerate_ssyt((2, 1), (1, 1, 1)))
    assert len(tabs) == 2
    assert all(t.weight() == (1, 1, 1) for t in tabs)
    assert kostka_number((2, 1), (1, 1, 1)) == 2
    assert kostka_number((3, 2), (2, 2, 1)) == 2
    with pytest.raises(ValueError):
        SemistandardTableau(((1, 1), (1,)))


def test_arm_leg_hooks():
    for lam in enumerate_partitions(7):
        data = ArmLegData.of(lam)
        prod = 1
        for cell in lam.cells():
            prod *= data.hook(cell)
        assert prod == hook_product(lam)


def test_alpha_kostka_examples():
    assert alpha_kostka_entry((2, 1), (1, 1, 1), 1) == 2
    assert alpha_kostka_entry((2,), (1, 1), 2) == Fraction(2, 3)
    for lam in enumerate_partitions(5):
        assert alpha_kostka_entry(lam, lam, Fraction(7, 3)) == 1
    with pytest.raises(ValueError):
        alpha_kostka_matrix(3, 0)


@pytest.mark.parametrize("n", range(1, 6))
@pytest.mark.parametrize("alpha", [Fraction(1), Fraction(2), Fraction(1, 2), Fraction(5, 3)])
def test_chain_sum_matches_tableau_sum(n, alpha):
    k = alpha_kostka_matrix(n, alpha)
    for lam in k.row_labels:
        for mu in k.col_labels:
            assert k[lam, mu] == alpha_kostka_by_tableaux(lam, mu, alpha)


@pytest.mark.parametrize("n", range(1, 9))
def test_triangularity_and_domination(n):
    k, k2 = kostka_matrix(n), alpha_kostka_matrix(n, 2)
    assert k.is_upper_unitriangular() and k2.is_upper_unitriangular()
    assert alpha_kostka_matrix(n, 1) == k
    for lam in k.row_labels:
        for mu in k.col_labels:
            assert 0 <= k2[lam, mu] <= k[lam, mu]


def test_gram_schmidt_small():
    labels = enumerate_partitions(2)
    assert gram_schmidt_jack(2, 2) == RationalMatrix.from_rows(labels, labels, [[1, Fraction(2, 3)], [0, 1]])


@pytest.mark.parametrize("n", range(1, 7))
def test_gram_schmidt_oracle(n):
    assert gram_schmidt_jack(n, 2) == alpha_kostka_matrix(n, 2)
    assert gram_schmidt_jack(n, 1) == kostka_matrix(n)


def test_gram_schmidt_other_alpha():
    assert gram_schmidt_jack(4, Fraction(3, 2)) == alpha_kostka_matrix(4, Fraction(3, 2))


def test_character_table_three():
    chi = sym_char_table(3)
    assert chi.row(P((2, 1))) == (-1, 0, 2)
    assert all(x == 1 for x in chi.row(P((3,))))


@pytest.mark.parametrize("n", range(1, 8))
def test_character_table_properties(n):
    chi = sym_char_table(n)
    ones = P((1,) * n)
    assert all(x.denominator == 1 for r in chi.entries for x in r)
    for lam in chi.row_labels:
        assert chi[lam, ones] == hook_dim(lam)
    # column orthogonality at the identity class
    for rho in chi.col_labels:
        total = sum(chi[lam, rho] * chi[lam, ones] for lam in chi.row_labels)
        assert total == (factorial(n) if rho == ones else 0)


def test_zonal_examples():
    w = zonal_character_table(4)
    assert w["3,1", "4"] == Fraction(-1, 6)
    assert all(x == 1 for x in w.row(P((4,))))
    assert all(x == 1 for x in w.column(P((1, 1, 1, 1))))


@pytest.mark.parametrize("n", range(1, 9))
def test_zonal_magnitude_and_orthogonality(n):
    w = zonal_character_table(n)
    size = double_factorial(2 * n - 1)
    ones = P((1,) * n)
    for x in (x for r in w.entries for x in r):
        assert abs(x) <= 1
    for lam in w.row_labels:
        for mu in w.row_labels:
            total = sum(sphere_size(rho, n) * w[lam, rho] * w[mu, rho] for rho in w.col_labels)
            assert total == (Fraction(size, hook_dim(lam.doubled())) if lam == mu else 0)
    for rho in w.col_labels:
        mass = sum(hook_dim(lam.doubled()) * w[lam, rho] for lam in w.row_labels)
        assert mass == (size if rho == ones else 0)


@pytest.mark.parametrize("n", range(1, 9))
def test_zonal_leading_minors_invertible(n):
    w = zonal_character_table(n)
    for k in range(1, len(w.row_labels) + 1):
        assert w.leading(k).determinant() != 0


def test_leading_minor_examples():
    block = leading_minor(p_table(4), 4, 1)
    assert block.shape == (1, 1) and block.entries[0][0] == 48
    assert leading_minor(kostka_matrix(9), 9, 2).row_labels == (P((9,)), P((8, 1)), P((7, 2)))
    with pytest.raises(ValueError):
        leading_minor(kostka_matrix(4), 4, 2)


def _minor_entries(matrix, n, t, with_hook=False):
    labels = fat_partitions(n, t)
    if not with_hook:
        labels = labels[: labels.index(hook_partition(n, t))]
    return tuple(tuple(matrix[r, c] for c in labels) for r in labels)


@pytest.mark.parametrize("t", [1, 2, 3])
def test_minor_stability(t):
    builders = {
        "K": kostka_matrix,
        "K^-1": lambda n: kostka_matrix(n).inverse(),
        "D": perm_char_matrix,
        "D^-1": lambda n: perm_char_matrix(n).inverse(),
    }
    for name, build in builders.items():
        for with_hook in (False, True):
            seen = {_minor_entries(build(n), n, t, with_hook) for n in range(2 * t + 2, 11)}
            assert len(seen) == 1, name


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=2, max_value=7), st.fractions(min_value=Fraction(1, 4), max_value=4, max_denominator=6))
def test_alpha_kostka_unitriangular_any_alpha(n, alpha):
    assert alpha_kostka_matrix(n, alpha).is_upper_unitriangular()
