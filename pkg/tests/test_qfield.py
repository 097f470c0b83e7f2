from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from dpcount.qfield import (
    FracIdeal,
    class_of,
    compose_forms,
    enumerate_bounded_norm,
    exact_divide,
    factor_into_primes,
    ideal_from_elements,
    ideal_gcd,
    ideal_intersection,
    ideal_product,
    make_field,
    parse_field,
    prime_ideal_norms,
    primes_above,
    reduce_form,
    reduced_forms,
    splitting_type,
)

FIELDS = (-1, -2, -3, -5, -6, -23)


def f5():
    F = make_field(-5)
    a = F.omega
    return F, a


# --- field data -------------------------------------------------------------


@pytest.mark.parametrize("d,disc,w,h", [
    (0, 1, 2, 1), (-1, -4, 4, 1), (-2, -8, 2, 1), (-3, -3, 6, 1),
    (-5, -20, 2, 2), (-6, -24, 2, 2), (-23, -23, 2, 3), (-14, -56, 2, 4),
])
def test_field_invariants(d, disc, w, h):
    F = make_field(d)
    assert (F.disc, F.num_units, F.class_number) == (disc, w, h)
    assert len(F.units) == w
    for u in F.units:
        assert u.norm() == 1
        assert u ** w == F.one
    assert F.class_reps[0].is_unit_ideal()
    assert sorted(class_of(P) for P in F.class_reps) == list(range(h))


def test_reduced_forms_minus20():
    assert sorted(reduced_forms(-20)) == [(1, 0, 5), (2, 2, 3)]


@pytest.mark.parametrize("d", [4, -4, -12, 2])
def test_bad_fields_rejected(d):
    with pytest.raises(ValueError):
        make_field(d)


@pytest.mark.parametrize("spec", ["x", "iq:", "iq:5", "iq:-4", "iq:abc"])
def test_bad_specs_rejected(spec):
    with pytest.raises(ValueError):
        parse_field(spec)


def test_rho_rational_multiple():
    import sympy
    F = make_field(-5)
    assert sympy.simplify(F.rho - 2 * sympy.pi * 2 / (2 * sympy.sqrt(20))) == 0
    assert make_field(0).rho == 1


# --- ideals -----------------------------------------------------------------


def test_worked_example_factorisations():
    F, a = f5()
    p = F.ideal(2, 1 + a)
    p3, p3b = F.ideal(3, 1 + a), F.ideal(3, 1 - a)
    p7, p7b = F.ideal(7, 3 + a), F.ideal(7, 3 - a)
    assert p * p == F.ideal(2)
    assert p * p3 == F.ideal(1 + a)
    assert p * p3b == F.ideal(1 - a)
    assert F.ideal(F.elem(Fraction(1, 2))) == p ** -2
    assert F.ideal((1 + a) / 2) == p3 / p
    assert p7 * p7b == F.ideal(7)
    assert F.ideal(-2 + a) == p3 ** 2
    fac = factor_into_primes(F.ideal(14))
    got = {(P.ideal, e) for P, e in fac}
    assert got == {(p, 2), (p7, 1), (p7b, 1)}
    assert {(P.ideal, e) for P, e in factor_into_primes(F.ideal(3))} == {(p3, 1), (p3b, 1)}
    assert factor_into_primes(F.unit_ideal) == []


def test_gcd_examples():
    F, a = f5()
    assert ideal_gcd(F.ideal(2), F.ideal(1 + a)) == F.ideal(2, 1 + a)
    assert ideal_gcd(F.ideal(7), F.ideal(3)).is_unit_ideal()
    I = F.ideal(2, 1 + a)
    assert ideal_gcd(I, F.unit_ideal).is_unit_ideal()
    assert ideal_product(I, F.unit_ideal) == I


def test_class_examples():
    F, a = f5()
    p = F.ideal(2, 1 + a)
    assert class_of(p) == 1
    assert class_of(p * p) == 0
    assert class_of(F.ideal(3 + 7 * a)) == 0


def test_exact_divide_examples():
    Fi = make_field(-1)
    i = Fi.omega
    assert exact_divide(2 + 2 * i, 1 - i) == 2 * i
    x = 3 + 5 * i
    assert exact_divide(x, Fi.one) == x
    Q = make_field(0)
    assert exact_divide(Q.elem(7), Q.elem(2)) is None
    with pytest.raises((ValueError, ZeroDivisionError)):
        exact_divide(x, Fi.elem(0))


def test_enumerate_examples():
    Fi = make_field(-1)
    els = enumerate_bounded_norm(Fi.unit_ideal, 2)
    assert len(els) == 8
    assert enumerate_bounded_norm(Fi.unit_ideal, Fraction(1, 2)) == []
    F, a = f5()
    got = enumerate_bounded_norm(F.ideal(2, 1 + a), 4)
    assert sorted((x.a, x.b) for x in got) == [(-2, 0), (2, 0)]


def _ideals(d, max_norm=60):
    """All integral ideals of norm <= max_norm, via HNF triples."""
    F = make_field(d)
    out = []
    for a in range(1, max_norm + 1):
        for c in range(1, a + 1):
            if a % c or a * c > max_norm:
                continue
            for b in range(0, a, c):
                try:
                    I = FracIdeal(F, a, b, c)
                except ValueError:
                    continue
                if I.hnf != (a, b, c):
                    continue
                if I.contains(F.omega * I.basis()[0]) and I.contains(F.omega * I.basis()[1]):
                    out.append(I)
    return out


IDEALS = {d: _ideals(d) for d in (-1, -5, -23)}


@st.composite
def ideal_pair(draw):
    d = draw(st.sampled_from(sorted(IDEALS)))
    I = draw(st.sampled_from(IDEALS[d]))
    J = draw(st.sampled_from(IDEALS[d]))
    return I, J


@given(ideal_pair())
def test_product_and_gcd_properties(pair):
    I, J = pair
    P = I * J
    assert P.norm() == I.norm() * J.norm()
    for x in P.basis():
        assert x in I and x in J
    G = ideal_gcd(I, J)
    for x in I.basis() + J.basis():
        assert x in G
    M = ideal_intersection(I, J)
    assert M.norm() * G.norm() == I.norm() * J.norm()
    assert class_of(P) == _compose_index(I, J)


def _compose_index(I, J):
    from dpcount.qfield import _rep_forms, class_form
    f = compose_forms(class_form(I), class_form(J))
    return _rep_forms(I.field.d)[reduce_form(f)]


@pytest.mark.parametrize("d", sorted(IDEALS))
def test_factorisation_round_trip(d):
    F = make_field(d)
    for I in IDEALS[d]:
        J = F.unit_ideal
        for P, e in factor_into_primes(I):
            J = J * P.ideal ** e
        assert J == I


@given(st.sampled_from(FIELDS), st.integers(0, 60), st.integers(0, 3))
def test_enumeration_matches_box_scan(d, T, k):
    F = make_field(d)
    I = F.class_reps[k % F.class_number]
    got = {(x.a, x.b, x.den) for x in enumerate_bounded_norm(I, T)}
    want = set()
    R = 2 * T + 2
    for p, q in product(range(-R, R + 1), repeat=2):
        x = F.elem(p, q)
        if not x.is_zero() and x.norm() <= T and x in I:
            want.add((x.a, x.b, x.den))
    assert got == want


@pytest.mark.parametrize("d", [-1, -3])
def test_unit_orbits_have_full_size(d):
    F = make_field(d)
    els = set(enumerate_bounded_norm(F.unit_ideal, 50))
    seen = set()
    for x in els:
        if x in seen:
            continue
        orbit = {u * x for u in F.units}
        assert len(orbit) == F.num_units and orbit <= els
        seen |= orbit
    assert len(els) % F.num_units == 0


@pytest.mark.parametrize("d", FIELDS)
def test_prime_splitting(d):
    F = make_field(d)
    for p in (2, 3, 5, 7, 11, 13):
        kind = splitting_type(F, p)
        prs = primes_above(F, p)
        assert len(prs) == {"split": 2, "inert": 1, "ramified": 1}[kind]
        prod_ = F.unit_ideal
        for P in prs:
            assert P.norm == (p * p if kind == "inert" else p)
            assert P.ideal.norm() == P.norm
            prod_ = prod_ * P.ideal
        if kind == "ramified":
            prod_ = prod_ * prs[0].ideal
        assert prod_ == F.ideal(p)


@pytest.mark.parametrize("d", [0, -1, -5])
def test_prime_norm_iterator(d):
    F = make_field(d)
    norms = list(prime_ideal_norms(F, 100))
    want = sorted(P.norm for p in range(2, 101) if all(p % r for r in range(2, p))
                  for P in primes_above(F, p) if P.norm <= 100)
    assert sorted(norms) == want


@given(st.sampled_from(FIELDS), st.integers(-30, 30), st.integers(-30, 30),
       st.integers(-30, 30), st.integers(-30, 30))
def test_principal_ideal_norm(d, a, b, c, e):
    F = make_field(d)
    x, y = F.elem(a, b), F.elem(c, e)
    if x.is_zero() or y.is_zero():
        return
    I = ideal_from_elements(F, [x])
    assert I.norm() == x.norm()
    assert ideal_from_elements(F, [x * y]) == I * ideal_from_elements(F, [y])
