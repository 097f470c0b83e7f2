from fractions import Fraction
from math import prod

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from dpcount import constants as C
from dpcount.harness.verify import oracle_primes
from dpcount.qfield import make_field, primes_above

Q = make_field(0)
GAUSS = make_field(-1)


# --- local factors --------------------------------------------------------------


def test_theta_examples():
    assert C.theta_local(1, 2) == Fraction(5, 16)
    assert C.theta_closed(1, 2) == Fraction(5, 16)
    assert C.theta_local(2, 3) == Fraction(20, 27)
    assert C.theta_closed(2, 2) == Fraction(1, 2)


def test_theta_limit_is_one():
    q = 10**30
    assert abs(C.theta_local(1, q) - 1) < Fraction(1, 10**29)


@pytest.mark.parametrize("fn", [C.theta_local, C.theta_closed, C.tamagawa_p])
def test_local_factor_errors(fn):
    with pytest.raises(ValueError):
        fn(1, 1)
    with pytest.raises(ValueError):
        fn(3, 2)


@given(st.fractions(min_value=2, max_value=10**6))
def test_theta_identity_as_rational_function(q):
    for i in (1, 2):
        assert C.theta_local(i, q) == C.theta_closed(i, q)


def test_theta_identity_on_prime_powers():
    qs = [p**k for p in sympy.primerange(2, 10**4) for k in range(1, 14) if p**k <= 10**4]
    for i in (1, 2):
        assert all(C.theta_local(i, q) == C.theta_closed(i, q) for q in qs)


def test_tamagawa_closed_form():
    assert C.tamagawa_p(1, 3) == 2
    assert C.tamagawa_p(2, 2) == 2
    assert C.tamagawa_p(1, 7) == Fraction(10, 7)


@pytest.mark.parametrize("i", [1, 2])
def test_local_factor_identity(i):
    assert C.local_factor_identity(i)


@given(st.integers(min_value=2, max_value=10**5))
def test_local_factor_relation_numeric(q):
    for i in (1, 2):
        rk = C.RANK[i]
        assert (1 - Fraction(1, q)) ** rk * C.tamagawa_p(i, q) == C.theta_closed(i, q)


# --- residue-counting oracle --------------------------------------------------------


def test_unit_pair_fraction_is_inverse_totient():
    for F, pr in oracle_primes():
        q = pr.norm
        for k in range(1, 4):
            assert C.unit_pair_fraction(pr, k) == Fraction(1, q**k - q ** (k - 1))


def test_oracle_example_over_q():
    (p3,) = primes_above(Q, 3)
    o = C.tamagawa_p_oracle(1, p3, 12)
    assert o.contains(2)
    assert o.width < Fraction(1, 10**4)


@pytest.mark.parametrize("F,pr", list(oracle_primes()), ids=lambda x: getattr(x, "spec", None) or f"{x.p}{x.splitting}")
def test_oracle_contains_closed_form(F, pr):
    for i in (1, 2):
        o = C.tamagawa_p_oracle(i, pr, 12)
        assert o.contains(C.tamagawa_p(i, pr.norm))
        assert o.width < Fraction(1, 1000)
        # upper end is attained exactly: the omitted diagonal bound is sharp
        assert o.hi == C.tamagawa_p(i, pr.norm)


def test_oracle_splitting_types_covered():
    kinds = {pr.splitting for F, pr in oracle_primes() if not F.is_rational}
    assert kinds == {"split", "inert", "ramified"}


def test_oracle_width_shrinks_with_depth():
    (p2,) = primes_above(Q, 2)
    widths = [C.tamagawa_p_oracle(1, p2, M).width for M in (4, 8, 12)]
    assert widths[0] > widths[1] > widths[2]
    assert C.tamagawa_p_oracle(1, p2, 12).width == Fraction(1, 2**13)


def test_oracle_errors():
    (p2,) = primes_above(Q, 2)
    with pytest.raises(ValueError):
        C.tamagawa_p_oracle(1, p2, 0)
    with pytest.raises(ValueError):
        C.tamagawa_p_oracle(3, p2, 4)


# --- Euler products ---------------------------------------------------------------------


def test_empty_product():
    for F in (Q, GAUSS):
        r = C.euler_product(F, 1, 1)
        assert r.num_factors == 0
        assert r.partial == (1, 1)


def test_small_product_is_exact_enclosure():
    r = C.euler_product(Q, 1, 10)
    exact = prod(C.theta_closed(1, p) for p in (2, 3, 5, 7))
    assert r.partial[0] <= exact <= r.partial[1]
    # the omitted factors only shrink the product
    assert r.hi == r.partial[1] and r.lo <= r.partial[0]
    assert r.num_factors == 4


def test_field_product_counts_ideals():
    r = C.euler_product(GAUSS, 2, 10)
    # norms: 2 (ramified), 5, 5 (split), 9 (inert 3)
    assert r.num_factors == 4
    exact = C.theta_closed(2, 2) * C.theta_closed(2, 5) ** 2 * C.theta_closed(2, 9)
    assert r.partial[0] <= exact <= r.partial[1]


def test_rational_product_width_at_million():
    r = C.euler_product(Q, 1, 10**6)
    assert r.width < Fraction(1, 10**4)
    assert r.lo < Fraction(1148838, 10**7) < r.hi


def test_gaussian_product_refines():
    a = C.euler_product(GAUSS, 2, 10**5)
    b = C.euler_product(GAUSS, 2, 2 * 10**5)
    assert a.lo <= b.partial[0] and b.partial[1] <= a.hi
    assert max(a.lo, b.lo) <= min(a.hi, b.hi)


def test_product_worker_independence():
    a = C.euler_product(make_field(-5), 1, 5 * 10**4, workers=1)
    b = C.euler_product(make_field(-5), 1, 5 * 10**4, workers=3)
    assert (a.lo, a.hi, a.partial) == (b.lo, b.hi, b.partial)


def test_euler_boundary_error():
    with pytest.raises(ValueError):
        C.euler_product(Q, 0, 10)


# --- polytopes ---------------------------------------------------------------------------


def simplex(d):
    return C.Polytope.make(d, [((1,) * d, 1)])


def test_standard_simplex():
    assert C.polytope_volume(simplex(3)) == Fraction(1, 6)
    assert C.polytope_volume(simplex(4)) == Fraction(1, 24)


def test_unit_cube():
    cube = C.Polytope.make(3, [((1, 0, 0), 1), ((0, 1, 0), 1), ((0, 0, 1), 1)])
    assert C.polytope_volume(cube) == 1
    assert len(C.polytope_vertices(cube)) == 8


def test_unbounded_raises():
    with pytest.raises(ValueError):
        C.polytope_volume(C.Polytope.make(2, [((1, -1), 0)]))


def test_make_checks_lengths():
    with pytest.raises(ValueError):
        C.Polytope.make(3, [((1, 1), 1)])


def test_region_volumes():
    assert C.region_volume(1) == Fraction(1, 72)
    assert C.region_volume(2) == Fraction(11, 72)


def test_alpha_values():
    assert C.alpha(1, "A1") == Fraction(1, 144)
    assert C.alpha(1, "A2") == Fraction(1, 144)
    assert C.alpha(2, "A1") == Fraction(7, 216)
    assert C.alpha(2, "A2") == Fraction(5, 216)
    assert C.alpha(2, "A3") == Fraction(7, 72)
    assert C.alpha_sum(1) == C.region_volume(1)
    assert C.alpha_sum(2) == C.region_volume(2)


def test_alpha_unknown_face():
    with pytest.raises(ValueError):
        C.alpha(1, "A3")


@pytest.mark.parametrize("key", sorted(C.ALPHA_REGIONS))
def test_alpha_monte_carlo(key):
    P = C.ALPHA_REGIONS[key]
    p, sigma = C.monte_carlo_volume(P, samples=10**7, seed=1)
    assert abs(p - float(C.polytope_volume(P))) <= 3 * sigma


def test_monte_carlo_is_seeded():
    P = C.REGIONS[2]
    assert C.monte_carlo_volume(P, 10**5, seed=5) == C.monte_carlo_volume(P, 10**5, seed=5)


def _unimodular(ops, d):
    U = sympy.eye(d)
    for r, c, k, swap in ops:
        r, c = r % d, c % d
        E = sympy.eye(d)
        if swap:
            E[r, r] = E[c, c] = 0
            E[r, c] = E[c, r] = 1
        elif r != c:
            E[r, c] = k
        U = U * E
    return U


ops = st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(-2, 2), st.booleans()),
               min_size=1, max_size=5)


@settings(max_examples=25)
@given(ops, st.sampled_from([("R", 1), ("R", 2), (2, "A3"), (1, "A1")]))
def test_volume_unimodular_invariance(op_list, which):
    P = C.REGIONS[which[1]] if which[0] == "R" else C.ALPHA_REGIONS[which]
    U = _unimodular(op_list, P.dim)
    assert abs(U.det()) == 1
    rows = [[int(U[r, c]) for c in range(P.dim)] for r in range(P.dim)]
    assert C.polytope_volume(P.transform(rows)) == C.polytope_volume(P)


# --- prediction ------------------------------------------------------------------------------


def test_predict_over_q():
    p1 = C.predict(Q, 1, P=10**4)
    assert p1.b == 5
    assert p1.symbolic == sympy.Rational(1, 144)
    assert p1.closed_form_match
    theta = p1.euler
    assert float(p1.c.a) <= float(theta.hi) / 144 and float(theta.lo) / 144 <= float(p1.c.b)
    p2 = C.predict(Q, 2, P=10**4)
    assert p2.b == 4
    assert p2.symbolic == sympy.Rational(11, 72)


@pytest.mark.parametrize("d", [-1, -2, -5])
@pytest.mark.parametrize("i", [1, 2])
def test_predict_paths_agree(d, i):
    F = make_field(d)
    pr = C.predict(F, i, P=10**3)
    assert pr.closed_form_match
    assert sympy.simplify(pr.symbolic - pr.closed_form) == 0
    assert pr.parts["rank"] == C.RANK[i]


def test_predict_gaussian_value():
    pr = C.predict(GAUSS, 1, P=10**3)
    # rho = pi/4, |disc| = 4
    want = (sympy.pi / 4) ** 3 / 4 * sympy.pi**2 / 18
    assert sympy.simplify(pr.closed_form - want) == 0


def test_predict_other_normalization_does_not_raise():
    pr = C.predict(GAUSS, 1, P=100, arch_norm=2 * sympy.pi)
    assert not pr.closed_form_match


def test_predict_boundary_error():
    with pytest.raises(ValueError):
        C.predict(Q, 3)


def test_main_term_positive():
    pr = C.predict(Q, 1, P=10**3)
    m = pr.main_term(1000)
    assert float(m.a) > 0 and m.a <= m.b


def test_rational_volume_prefactor():
    assert C.rational_volume_prefactor(1) == Fraction(1, 18)
    assert C.rational_volume_prefactor(2) == Fraction(11, 18)
