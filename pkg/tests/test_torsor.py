from collections import Counter
from fractions import Fraction
from itertools import islice, product

import numpy as np
import pytest

from dpcount import kernels, torsor
from dpcount.harness.verify import worked_example
from dpcount.qfield import make_field
from dpcount.surface import count_direct, on_surface, projective_key

Q = make_field(0)
FIELDS = [make_field(d) for d in (0, -1, -2, -5)]
# heights small enough for exact element arithmetic; Q(i) lifts each point 4^6 times
SMALL_B = {0: 8, -1: 1, -2: 8, -5: 8}
needs_compiled = pytest.mark.skipif(kernels.compiled is None, reason="compiled kernels not built")


def q_eta(*xs):
    return tuple(Q.elem(x) for x in xs)


# --- twists -----------------------------------------------------------------


def test_rational_twist_is_trivial():
    for i in (1, 2):
        tws = torsor.twists(Q, i)
        assert len(tws) == 1
        assert tws[0].u == 1
        assert all(O.is_unit_ideal() for O in tws[0].O[1:])


def test_twist_counts_match_class_number():
    F = make_field(-5)
    assert len(torsor.twists(F, 1)) == 8
    assert len(torsor.twists(F, 2)) == 4


def test_twist_with_nontrivial_class_everywhere():
    F = make_field(-5)
    p = F.ideal(2, 1 + F.omega)
    tw = torsor.make_twist(1, (p * p * p, p, p, p, p, p))
    assert any(t.C == tw.C for t in torsor.twists(F, 1))
    assert tw.O[9] == p * p
    assert tw.u == 16


def test_make_twist_rejects_wrong_length():
    with pytest.raises(ValueError):
        torsor.make_twist(1, (Q.unit_ideal,) * 5)
    with pytest.raises(ValueError):
        torsor.twists(Q, 3)


# --- heights, psi, membership --------------------------------------------------


def test_script_height_examples():
    assert torsor.script_height(1, q_eta(1, 1, 1, 1, 1, 1, 1, 1, -2)) == 1
    assert torsor.script_height(2, q_eta(1, 1, 1, 1, 2, 1, 1, 1, -3)) == 4


def test_psi_of_base_point():
    x = torsor.psi(q_eta(1, 1, 1, 1, 1, 1, 1, 1, -2))
    assert x == q_eta(1, 1, 1, 1, -2)
    assert on_surface(x)


def test_membership_rejects_bad_tuples():
    tw = torsor.twists(Q, 1)[0]
    assert torsor.membership(q_eta(1, 1, 1, 1, 1, 1, 1, 1, -2), tw) == (True, "ok")
    ok, why = torsor.membership(q_eta(1, 1, 1, 1, 1, 1, 1, 1, -3), tw)
    assert not ok and why == "torsor equation fails"
    ok, _ = torsor.membership(q_eta(1, 1, 1, 0, 1, 1, 1, 1, -1), tw)
    assert not ok
    ok, _ = torsor.membership(q_eta(2, 1, 1, 1, 1, 1, 1, 1, -3), tw)
    assert not ok
    with pytest.raises(ValueError):
        torsor.membership(q_eta(1, 1, 1, 1, 1, 1, 1, 1, -2), tw, mode="other")


def test_worked_example():
    ex = worked_example()
    assert torsor.membership(ex["P1"], ex["twist"], mode="lemma") == (True, "ok")
    ok, why = torsor.membership(ex["P1"], ex["twist_nicer"], mode="nicer")
    assert not ok and why == "η₂ not a unit"
    assert torsor.membership(ex["P2"], ex["twist_nicer"], mode="nicer") == (True, "ok")
    acted = torsor.unit_action(ex["t"], torsor.TorsorPoint(ex["P1"], ex["twist"]))
    assert acted.eta == ex["P2"]
    pt = torsor.TorsorPoint(ex["P2"], ex["twist_nicer"])
    assert torsor.height_compatible(pt)
    assert torsor.gcd_identity(pt)


# --- unit action ---------------------------------------------------------------


def test_unit_action_over_gaussian_field():
    F = make_field(-1)
    i_ = F.omega
    one = F.one
    eta = tuple(F.elem(k + 1) for k in range(9))
    out = torsor.unit_action((i_, one, one, one, one, one), eta)
    moved = {2, 7, 8, 9}
    for j in range(1, 10):
        want = eta[j - 1] * i_ if j in moved else eta[j - 1]
        assert out[j - 1] == want


def test_orbit_size_over_q():
    tw = torsor.twists(Q, 1)[0]
    base = torsor.TorsorPoint(q_eta(1, 1, 1, 1, 1, 1, 1, 1, -2), tw)
    orbit = {torsor.unit_action(t, base).eta for t in product(Q.units, repeat=6)}
    assert len(orbit) == 64


def test_unit_action_preserves_membership():
    F = make_field(-1)
    pts = list(islice(torsor.enumerate_torsor(F, 1, 2), 20))
    t = (F.omega, F.one, F.omega, F.one, F.one, F.omega)
    for p in pts:
        q = torsor.unit_action(t, p)
        assert torsor.membership(q)[0]


# --- enumeration and correspondence -----------------------------------------------


def test_rational_base_count():
    r = torsor.count_torsor(Q, 1, 1)
    assert r.raw_tuples == 256
    assert r.count == 4


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: F.spec)
@pytest.mark.parametrize("i", [1, 2])
@pytest.mark.parametrize("B", [3, 7, 12])
def test_torsor_equals_direct(F, i, B):
    assert torsor.count_torsor(F, i, B).count == count_direct(F, i, B).count


@pytest.mark.parametrize("i,B", [(1, 100), (2, 100), (1, 300)])
def test_torsor_equals_direct_over_q(i, B):
    assert torsor.count_torsor(Q, i, B).count == count_direct(Q, i, B).count


def test_fractional_bound():
    F = make_field(-2)
    B = Fraction(15, 2)
    assert torsor.count_torsor(F, 1, B).count == count_direct(F, 1, B).count


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: F.spec)
@pytest.mark.parametrize("i", [1, 2])
def test_reference_enumeration_matches_kernel(F, i):
    B = SMALL_B[F.d]
    ref = {(p.eta, p.twist.C) for p in torsor.enumerate_torsor(F, i, B)}
    fast = [(p.eta, p.twist.C) for p in torsor.torsor_points(F, i, B, impl="python")]
    assert len(fast) == len(set(fast))
    assert ref == set(fast)
    assert len(ref) == torsor.count_torsor(F, i, B).raw_tuples


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: F.spec)
@pytest.mark.parametrize("i", [1, 2])
def test_fibers_have_size_units_to_the_sixth(F, i):
    w6 = F.num_units ** 6
    B = SMALL_B[F.d]
    fibers = Counter(projective_key(torsor.psi(p)) for p in torsor.torsor_points(F, i, B))
    assert fibers
    assert set(fibers.values()) == {w6}
    assert len(fibers) == count_direct(F, i, B).count


@pytest.mark.parametrize("d", [0, -2, -5])
def test_irrelevant_sum_equals_coprimality(d):
    F = make_field(d)
    seen = Counter()
    for p in torsor.enumerate_torsor(F, 1, SMALL_B[d], check_coprime=False):
        s = torsor.irrelevant_sum(p.eta, p.twist)
        unit = s is not None and s.is_unit_ideal()
        assert unit == torsor.coprimality_holds(p.eta, p.twist)
        seen[unit] += 1
    assert seen[True] and seen[False]


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: F.spec)
def test_points_satisfy_identities(F):
    for p in list(torsor.torsor_points(F, 2, SMALL_B[F.d]))[::16]:
        assert torsor.height_compatible(p)
        assert torsor.gcd_identity(p)


# --- bulk checker ------------------------------------------------------------------


def _blocks(F, i, B, cap=256):
    """Kernel row blocks, truncated so the pure-Python checker stays quick."""
    return [(tw, rows[:cap], eta2) for tw, rows, eta2 in torsor.point_blocks(F, i, B, impl="python")]


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: F.spec)
@pytest.mark.parametrize("i", [1, 2])
def test_verify_points_clean(F, i):
    v = torsor.verify_points(F, i, 10)
    assert v["checked"] == torsor.count_torsor(F, i, 10).raw_tuples
    assert v["height_fail"] == 0 and v["gcd_fail"] == 0


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: F.spec)
@pytest.mark.parametrize("i", [1, 2])
def test_checker_detects_common_factor(F, i):
    # a factor 3 on eta4..eta8 divides every height monomial
    for tw, rows, eta2 in _blocks(F, i, 8):
        ctx = torsor.check_context(F, tw)
        bad = rows.copy()
        bad[:, 6:16] *= 3
        c, _, g = kernels.python.check_points(bad, eta2, ctx)
        assert g == c > 0


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: F.spec)
def test_checker_detects_wrong_height_factor(F):
    for tw, rows, eta2 in _blocks(F, 1, 8):
        ctx = dict(torsor.check_context(F, tw))
        ctx["u_num"] += 1
        c, h, g = kernels.python.check_points(rows, eta2, ctx)
        assert h == c > 0 and g == 0


@needs_compiled
@pytest.mark.parametrize("F", FIELDS, ids=lambda F: F.spec)
@pytest.mark.parametrize("i", [1, 2])
def test_compiled_checker_agrees(F, i):
    rng = np.random.default_rng(7)
    for tw, rows, eta2 in _blocks(F, i, 10):
        ctx = torsor.check_context(F, tw)
        bad = rows.copy()
        pick = rng.random(len(bad)) < 0.3
        bad[pick, 6:16] *= 3
        flip = rng.random(len(bad)) < 0.2
        bad[flip, 12] += 1
        want = kernels.python.check_points(bad, eta2, ctx)
        assert kernels.compiled.check_points(bad, eta2, ctx) == want
        assert kernels.compiled.check_points_wide(bad, eta2, ctx) == want


@needs_compiled
@pytest.mark.parametrize("F", FIELDS, ids=lambda F: F.spec)
def test_compiled_verify_agrees(F):
    B = 3 if F.d == -1 else 12
    assert torsor.verify_points(F, 1, B, impl="cython") == torsor.verify_points(F, 1, B, impl="python")


@pytest.mark.parametrize("F", [Q, make_field(-5)], ids=lambda F: F.spec)
def test_worker_count_independence(F):
    a = torsor.count_torsor(F, 1, 15, workers=1)
    b = torsor.count_torsor(F, 1, 15, workers=3)
    assert (a.count, a.raw_tuples, a.per_class) == (b.count, b.raw_tuples, b.per_class)


def test_bad_boundary():
    with pytest.raises(ValueError):
        torsor.count_torsor(Q, 3, 10)
    with pytest.raises(ValueError):
        torsor.count_torsor(Q, 1, -1)
