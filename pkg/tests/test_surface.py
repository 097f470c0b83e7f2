from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dpcount.qfield import make_field
from dpcount.surface import (
    SurfacePoint,
    count_direct,
    count_naive,
    enumerate_direct,
    height,
    integrality,
    on_surface,
    projective_key,
)

Q = make_field(0)


def test_on_surface_examples():
    assert on_surface((1, 1, 1, 1, -2))
    assert on_surface((0, 0, 0, 0, 1))
    assert not on_surface((1, 1, 1, 1, 1))


def test_height_examples():
    assert height(1, (1, 1, 1, 1, -2)) == 1
    assert height(2, (1, 1, 1, 1, -2)) == 1
    assert height(1, (2, 2, 2, 2, -4)) == 1
    with pytest.raises(ValueError):
        height(1, (0, 1, 0, 1, 0))
    pt = SurfacePoint(tuple(Q.elem(x) for x in (2, 2, 2, 2, -4)), 0)
    assert not integrality(1, pt)


@pytest.mark.parametrize("i,B,want", [(1, 1, 4), (1, Fraction(1, 2), 0), (2, 1, 4)])
def test_small_counts_over_q(i, B, want):
    assert count_direct(Q, i, B).count == want


def test_negative_bound_rejected():
    with pytest.raises(ValueError):
        count_direct(Q, 1, -1)
    with pytest.raises(ValueError):
        count_direct(Q, 3, 1)


# frozen from the exhaustive reference scans
FROZEN = {
    (0, 1, 10): 196, (0, 2, 10): 246, (-1, 1, 10): 592, (-1, 2, 10): 784,
    (-5, 1, 10): 116, (-5, 2, 10): 120, (-3, 1, 10): 522, (-3, 2, 10): 720,
    (0, 1, 1000): 166964, (0, 2, 1000): 178348,
}


@pytest.mark.parametrize("key", sorted(FROZEN))
def test_frozen_counts(key):
    d, i, B = key
    assert count_direct(make_field(d), i, B).count == FROZEN[key]


@pytest.mark.parametrize("d", [0, -1])
@pytest.mark.parametrize("i", [1, 2])
def test_direct_matches_naive_scan(d, i):
    F = make_field(d)
    for B in (1, 3, 7, 12, 20, 30) if d == 0 else (1, 3, 7, 12):
        assert count_direct(F, i, B).count == count_naive(F, i, B)


@pytest.mark.parametrize("d", [-2, -5, -23])
def test_direct_matches_naive_other_fields(d):
    F = make_field(d)
    for i in (1, 2):
        for B in (2, 6):
            assert count_direct(F, i, B).count == count_naive(F, i, B)


@pytest.mark.parametrize("d", [0, -1, -5, -3])
@pytest.mark.parametrize("i", [1, 2])
def test_fast_matches_reference_enumeration(d, i):
    F = make_field(d)
    for B in (2, 5):
        pts = list(enumerate_direct(F, i, B))
        r = count_direct(F, i, B)
        assert len(pts) == r.raw_tuples
        for p in pts:
            assert on_surface(p.coords)
            assert integrality(i, p)
            assert height(i, p) <= B


@pytest.mark.parametrize("d", [0, -1, -3, -5])
def test_unit_orbits_free_and_classes_unique(d):
    F = make_field(d)
    pts = list(enumerate_direct(F, 1, 6))
    keys = {}
    for p in pts:
        k = projective_key(p.coords)
        keys.setdefault(k, set()).add(p.j)
    assert all(len(v) == 1 for v in keys.values())
    assert len(pts) == len(keys) * F.num_units


def test_negation_symmetry_over_q():
    pts = {p.coords for p in enumerate_direct(Q, 2, 8)}
    assert {tuple(-x for x in c) for c in pts} == pts


@given(st.sampled_from([0, -1, -2, -5]), st.sampled_from([1, 2]), st.integers(1, 15))
def test_monotone_in_B(d, i, B):
    F = make_field(d)
    assert count_direct(F, i, B).count <= count_direct(F, i, B + 1).count


@pytest.mark.parametrize("d", [0, -5])
def test_worker_count_independent(d):
    F = make_field(d)
    for i in (1, 2):
        a = count_direct(F, i, 15, workers=1)
        b = count_direct(F, i, 15, workers=3)
        assert (a.count, a.raw_tuples) == (b.count, b.raw_tuples)


@pytest.mark.parametrize("d", [0, -1, -5])
def test_python_and_compiled_agree(d):
    from dpcount import kernels
    if kernels.compiled is None:
        pytest.skip("compiled kernels not built")
    F = make_field(d)
    for i in (1, 2):
        assert count_direct(F, i, 12, impl="python").raw_tuples == count_direct(F, i, 12, impl="cython").raw_tuples
