import json
from fractions import Fraction

import pytest

from zonalscheme.partitions import (
    Partition,
    derangement_count,
    double_factorial,
    enumerate_partitions,
    fat_partitions,
    hook_partition,
)
from zonalscheme.scheme import ScaledMatrix, build_scheme, idempotent
from zonalscheme.spectral import (
    Certificate,
    DerangementGraph,
    certify,
    cross_ratio_value,
    derangement_graph_check,
    eigen_table,
    hoffman_value,
    nonfat_ratio_squared,
    solve_weights,
    threshold_scan,
    weight_labels,
    zeta,
)

P = Partition


def test_zeta_examples():
    assert zeta(4, 1) == Fraction(-1, 6)
    assert zeta(5, 2) == Fraction(-1, 62)
    with pytest.raises(ValueError):
        zeta(1, 1)


@pytest.mark.parametrize("n", range(2, 16))
@pytest.mark.parametrize("t", [1, 2, 3, 4])
def test_hoffman_identity(n, t):
    if t >= n:
        return
    assert hoffman_value(n, zeta(n, t)) == double_factorial(2 * (n - t) - 1)


def test_derangement_graph_labels():
    g = DerangementGraph.build(4, 1)
    assert P((1, 1, 1, 1)) not in g.edge_labels
    assert g.edge_labels == {p for p in enumerate_partitions(4) if 1 not in p}
    assert g.valency_sum == 60
    for n in range(3, 9):
        for t in (1, 2, 3):
            g = DerangementGraph.build(n, t)
            assert g.valency_sum == derangement_count(n, t)
            assert P((1,) * n) not in g.edge_labels


def test_solve_weights_examples():
    assert solve_weights(4, 1) == {P((4,)): Fraction(1, 48)}
    for n in range(4, 11):
        assert solve_weights(n, 1) == {P((n,)): Fraction(1, build_scheme(n, verify=False).valencies[P((n,))])}


def test_solve_weights_eight_two_scale():
    x = solve_weights(8, 2)
    assert list(x) == [P((8,)), P((7, 1)), P((6, 2))]
    assert all(abs(v) <= Fraction(100, double_factorial(14)) for v in x.values())


@pytest.mark.parametrize("n, t", [(n, t) for t in (1, 2, 3) for n in range(2 * t + 1, 13)])
def test_weights_live_on_derangement_edges(n, t):
    assert derangement_graph_check(n, t)
    assert all(lam.unit_parts() < t for lam in solve_weights(n, t))
    assert set(weight_labels(n, t)) | {hook_partition(n, t)} == set(fat_partitions(n, t))


def test_eigen_table_examples():
    eig = eigen_table({P((4,)): Fraction(1, 48)}, 4)
    expected = [1, Fraction(-1, 6), Fraction(-1, 24), Fraction(1, 12), Fraction(-1, 8)]
    assert list(eig.values()) == expected
    assert all(v == 0 for v in eigen_table({}, 5).values())
    assert all(v == 0 for v in eigen_table({P((5,)): 0}, 5).values())


def test_certificate_four_one():
    c = certify(4, 1)
    assert c.valid and c.min_is_zeta
    assert c.zeta == Fraction(-1, 6)
    assert c.minimizers == (P((3, 1)),)
    assert c.hoffman_value == 15
    assert list(c.eigenvalues.values()) == [1, Fraction(-1, 6), Fraction(-1, 24), Fraction(1, 12), Fraction(-1, 8)]
    assert c.pretty().splitlines()[-1] == "VALID: bound 15"


def test_certificate_json_round_trip():
    for n, t in [(4, 1), (7, 2), (9, 3)]:
        c = certify(n, t)
        doc = json.loads(json.dumps(c.to_json()))
        assert Certificate.from_json(doc) == c
        assert "." not in json.dumps(doc)


@pytest.mark.parametrize("n, t", [(n, t) for t in (1, 2) for n in range(2 * t + 1, 13)])
def test_fattest_eigenvalue_is_zeta(n, t):
    c = certify(n, t)
    assert c.eigenvalues[P((n,))] == 1
    assert c.fattest_eig == c.zeta
    assert c.hoffman_value == double_factorial(2 * (n - t) - 1)


@pytest.mark.parametrize("n", [3, 4])
def test_eigen_table_matches_explicit_matrix(n):
    scheme = build_scheme(n)
    weights = solve_weights(n, 1)
    eig = eigen_table(weights, n)
    a = None
    for lam, x in weights.items():
        term = ScaledMatrix(scheme.associate(lam)).scale(x)
        a = term if a is None else a + term
    for lam in scheme.labels:
        e = idempotent(scheme, lam)
        assert a @ e == e.scale(eig[lam])


def test_threshold_scan_t1():
    scan = threshold_scan(1, range(4, 11))
    assert [r.n for r in scan.rows] == list(range(4, 11))
    assert scan.rows[0].valid
    assert all(r.fattest_is_zeta for r in scan.rows)
    assert scan.onset == 4


def test_threshold_scan_t2_verdicts():
    # frozen from an exact scan; validity starts at n = 11 in this window
    scan = threshold_scan(2, range(6, 13), workers=2)
    assert [r.valid for r in scan.rows] == [False, False, False, False, False, True, True]
    assert scan.onset == 11
    first_valid = certify(11, 2)
    assert first_valid.fattest_eig == first_valid.zeta
    assert scan.to_csv().splitlines()[0] == "n,t,valid,min_eig,minimizers,fattest_is_zeta"


def test_threshold_scan_t3_window():
    scan = threshold_scan(3, range(8, 13))
    assert not any(r.valid for r in scan.rows)
    assert scan.onset is None


def test_scan_rejects_out_of_range():
    with pytest.raises(ValueError):
        threshold_scan(2, range(4, 8))


def test_cross_ratio():
    cr = cross_ratio_value(4, 1)
    assert cr.applicable and cr.value == 15 and cr.product_bound == 225
    assert cr.value == certify(4, 1).hoffman_value
    bad = cross_ratio_value(8, 2)
    assert not bad.applicable and str(bad) == "inapplicable"


@pytest.mark.parametrize("n", range(3, 13))
def test_cross_ratio_equals_hoffman_when_applicable(n):
    c = certify(n, 1)
    cr = cross_ratio_value(n, 1, c)
    if cr.applicable:
        assert cr.value == c.hoffman_value


def test_nonfat_trend_bounded():
    # max |eta_rho| sqrt(n) / |zeta| over non-fat rho stays under one constant for t = 1
    ratios = [nonfat_ratio_squared(certify(n, 1)) for n in range(5, 13)]
    assert max(ratios) <= 2
    assert all(a >= b for a, b in zip(ratios, ratios[1:]))
