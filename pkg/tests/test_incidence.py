from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from incidence_lab.errors import BadGrid, SizeCapExceeded, TheoremViolation
from incidence_lab.gf import FPoly, field_create, point_coords
from incidence_lab.incidence import (
    SweepConfig,
    adjacency_spectrum_check,
    build_T,
    charpoly,
    count_incidences,
    evaluate_incidences,
    gram_points_entry,
    gram_polys_entry,
    incidence_bounds,
    sweep,
    verify_left_spectrum,
    verify_right_spectrum,
    verify_svd_reconstruction,
)
from incidence_lab.sets import PointSet, PolySet


def test_build_T_examples():
    F2 = field_create(2, 1)
    T = build_T(F2, 2).dense()
    assert T.shape == (4, 4)
    assert (T.sum(axis=1) == 2).all() and (T.sum(axis=0) == 2).all()
    F3 = field_create(3, 1)
    T3 = build_T(F3, 2)
    assert T3.shape == (9, 9) and T3.dense().sum() == 27
    assert (T3.row_degrees() == 3).all()


@pytest.mark.parametrize("p,m,k", [(2, 1, 3), (3, 1, 3), (2, 2, 2), (2, 2, 3)])
def test_T_degrees_and_graph_membership(p, m, k):
    F = field_create(p, m)
    Q = F.Q
    T = build_T(F, k).dense()
    assert (T.sum(axis=1) == Q).all()
    assert (T.sum(axis=0) == Q ** (k - 1)).all()
    for i in range(0, Q**k, 7):
        f = FPoly.from_index(F, k, i)
        for j in range(Q * Q):
            x, y = point_coords(F, j)
            assert T[i, j] == (f(F.element(x)).code == y)


def test_count_incidences_examples():
    F = field_create(3, 1)
    empty_L, empty_P = PolySet.from_indices(F, 2, []), PointSet.from_indices(F, [])
    assert count_incidences(F, 2, empty_L, empty_P) == 0
    L = PolySet.from_indices(F, 2, [0, 3])  # 0 and x
    P = PointSet.from_points(F, [(0, 0), (1, 1), (2, 1)])
    assert count_incidences(F, 2, L, P) == 3
    for k in (2, 3):
        assert count_incidences(F, k, PolySet.full(F, k), PointSet.full(F)) == 3 ** (k + 1)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(2, 1), (3, 1), (2, 2), (5, 1)]), st.integers(2, 3), st.data())
def test_count_incidences_matches_dense_T(field, k, data):
    F = field_create(*field)
    Q = F.Q
    L = sorted(data.draw(st.sets(st.integers(0, Q**k - 1), max_size=15)))
    P = sorted(data.draw(st.sets(st.integers(0, Q * Q - 1), max_size=15)))
    T = build_T(F, k).dense()
    expected = int(T[np.ix_(L, P)].sum()) if L and P else 0
    assert count_incidences(F, k, PolySet.from_indices(F, k, L), PointSet.from_indices(F, P)) == expected


def test_gram_entry_examples():
    F = field_create(3, 1)
    assert gram_points_entry((1, 2), (1, 2), F, 3) == 9
    assert gram_points_entry((0, 2), (1, 2), F, 3) == 3
    assert gram_points_entry((1, 0), (1, 2), F, 3) == 0
    x, zero = FPoly(F, (0, 1)), FPoly(F, (0, 0))
    assert gram_polys_entry(x, x) == 3
    assert gram_polys_entry(x, zero) == 1


def test_gram_random_pairs_q9():
    F = field_create(3, 2)
    rng = np.random.default_rng(11)
    T = build_T(F, 2).dense().astype(np.int64)
    for _ in range(200):
        a, b = rng.integers(0, 81, size=2)
        assert int(T[:, a] @ T[:, b]) == gram_points_entry(point_coords(F, a), point_coords(F, b), F, 2)
        f, g = (FPoly.from_index(F, 2, int(i)) for i in rng.integers(0, 81, size=2))
        assert int(T[f.index] @ T[g.index]) == gram_polys_entry(f, g)
        d = max((i for i, c in enumerate((f - g).coeffs) if c), default=None)
        if d is not None and d > 0:
            assert gram_polys_entry(f, g) <= d


def test_spectrum_examples():
    F3, F2, F4 = field_create(3, 1), field_create(2, 1), field_create(2, 2)
    r = verify_right_spectrum(F3, 2)
    assert r.ok and [row.eigenvalue for row in r.rows] == [9, 3, 0] and r.multiplicities() == (1, 6, 2)
    r = verify_right_spectrum(F2, 2)
    assert r.multiplicities() == (1, 2, 1) and r.checks["trace_identity"]
    assert verify_right_spectrum(F4, 3).multiplicities() == (1, 12, 3)
    l3 = verify_left_spectrum(F3, 2)
    assert l3.ok and l3.multiplicities() == (1, 6, 2)
    l2 = verify_left_spectrum(F2, 3)
    assert l2.ok and [row.eigenvalue for row in l2.rows] == [8, 4, 0] and l2.multiplicities() == (1, 2, 5)
    assert l2.checks["kernel_trivial_eigenvalue"]
    assert any("Q^(k-1)" in note for note in r.notes)


def test_left_spectrum_condition_sample():
    rep = verify_left_spectrum(field_create(5, 1), 3, condition_sample=10)
    assert rep.ok


@pytest.mark.parametrize("p,m,k", [(2, 1, 2), (3, 1, 2), (2, 1, 3), (2, 2, 2)])
def test_svd_reconstruction(p, m, k):
    assert verify_svd_reconstruction(field_create(p, m), k).ok


def test_spectrum_cap(monkeypatch):
    monkeypatch.setenv("INCIDENCE_LAB_SIZE_CAP", "20")
    with pytest.raises(SizeCapExceeded):
        verify_left_spectrum(field_create(3, 1), 3)


def test_charpoly_small():
    assert charpoly(np.array([[2, 1], [1, 2]])) == [3, -4, 1]
    assert charpoly(np.zeros((3, 3), dtype=np.int64)) == [0, 0, 0, 1]


def test_adjacency_q2_k2():
    rep = adjacency_spectrum_check(field_create(2, 1), 2)
    assert rep.ok
    assert rep.squared_eigenvalues == {4: 1, 2: 2, 0: 1}


def test_incidence_bounds_examples():
    F9 = field_create(3, 2)
    rep = incidence_bounds(10, 20, F9, 3)
    assert rep.main_term == Fraction(200, 9)
    assert rep.tight_sq == Fraction(46400, 9)
    for ell, pp in [(0, 5), (5, 0)]:
        r = incidence_bounds(ell, pp, F9, 3)
        assert r.main_term == r.tight_sq == r.loose_sq == 0
    r = incidence_bounds(7, 11, F9, 2)
    assert r.vinh_improved_sq / r.vinh_sq == Fraction(8, 9) ** 2


def test_evaluate_full_sets_zero_deviation():
    F = field_create(2, 2)
    rep = evaluate_incidences(F, 2, PolySet.full(F, 2), PointSet.full(F))
    assert rep.I == 64 and rep.deviation == 0 and rep.ok


def test_sweep_examples():
    F = field_create(3, 1)
    recs = list(sweep(SweepConfig(F, 2, (1,), (1,), 100, 0)))
    assert len(recs) == 100 and all(r.ok_thm12 for _, _, r in recs)
    full = list(sweep(SweepConfig(F, 2, (9,), (9,), 2, 0)))
    assert all(r.deviation_sq == 0 for _, _, r in full)


def test_sweep_determinism():
    F = field_create(2, 2)
    cfg = SweepConfig(F, 3, (5, 20), (3, 10), 4, 42)
    a = [r.to_record() for _, _, r in sweep(cfg)]
    b = [r.to_record() for _, _, r in sweep(cfg)]
    assert a == b
    c = [r.to_record() for _, _, r in sweep(SweepConfig(F, 3, (5, 20), (3, 10), 4, 43))]
    assert a != c


def test_sweep_bad_grid():
    F = field_create(3, 1)
    with pytest.raises(BadGrid):
        list(sweep(SweepConfig(F, 2, (10,), (1,), 1, 0)))
    with pytest.raises(BadGrid):
        list(sweep(SweepConfig(F, 2, (), (1,), 1, 0)))


def test_theorem_violation_is_assertion():
    assert issubclass(TheoremViolation, AssertionError)
