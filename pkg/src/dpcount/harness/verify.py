"""Invariant suites: each check yields (name, ok, detail)."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterator

import sympy

from .. import constants, geometry, torsor
from ..qfield import make_field, primes_above
from ..surface import count_direct, height

Check = tuple[str, bool, str]

TEST_FIELDS = (0, -1, -2, -5)


# ---------------------------------------------------------------------------
# geometry


def geometry_checks() -> Iterator[Check]:
    adj = geometry.adjacency()
    yield "adjacency equals the drawn edge list", adj == geometry.FIGURE_EDGES, f"{len(adj)} edges"
    cp = geometry.coprimality_pairs()
    yield "coprimality pairs are the 25 non-edges", len(cp) == 25 and not (cp & adj), f"{len(cp)} pairs"
    squares = tuple(geometry.pairing(geometry.E[j], geometry.E[j]) for j in range(1, 10))
    yield "self-intersections -2 on E1..E3, -1 on E4..E8, 0 on E9", squares == (-2,) * 3 + (-1,) * 5 + (0,), str(squares)
    ak = geometry.ANTICANONICAL
    for k, exps in enumerate(geometry.PSI_EXPONENTS):
        yield (f"section x{k} has anticanonical degree",
               geometry.degree_of_monomial(exps) == ak, str(geometry.degree_of_monomial(exps).coeffs))
    for i in (1, 2):
        target = geometry.log_anticanonical(i)
        for k, exps in enumerate(geometry.M_EXPONENTS[i]):
            d = geometry.degree_of_monomial(exps)
            yield f"height monomial {k} of boundary {i} has log-anticanonical degree", d == target, str(d.coeffs)
    combo = geometry.degree_of_monomial((2, 3, 2, 1, 2, 1, 0, 0, 0))
    yield "2E1+3E2+2E3+E4+2E5+E6 is anticanonical", combo == ak, str(combo.coeffs)
    for k, rel in enumerate(geometry.PRINCIPAL_RELATIONS):
        d = geometry.degree_of_monomial(rel)
        yield f"principal relation {k} has zero class", d.is_zero(), str(d.coeffs)
    sqf = all(max(m) == 1 for m in geometry.IRRELEVANT_MONOMIALS)
    yield "irrelevant monomials are squarefree", sqf, ""
    for i, b in ((1, 5), (2, 4)):
        got = geometry.b_exponent(i)
        yield f"b_{i} = {b} from Picard rank and Clemens faces", got == b, f"got {got}"


# ---------------------------------------------------------------------------
# constants


def _prime_powers(limit: int) -> Iterator[int]:
    for p in sympy.sieve.primerange(2, limit + 1):
        q = p
        while q <= limit:
            yield q
            q *= p


def oracle_primes(fields=TEST_FIELDS, primes=(2, 3, 5, 7)):
    """(field, prime ideal) pairs covering every splitting type that occurs."""
    for d in fields:
        F = make_field(d)
        for p in primes:
            for pr in primes_above(F, p):
                yield F, pr


def constants_checks(depth: int = 12, theta_limit: int = 10**4, prime_bound: int = 10**4) -> Iterator[Check]:
    v1, v2 = constants.region_volume(1), constants.region_volume(2)
    yield "volume of the boundary-1 region is 1/72", v1 == Fraction(1, 72), str(v1)
    yield "volume of the boundary-2 region is 11/72", v2 == Fraction(11, 72), str(v2)
    for i, v in ((1, v1), (2, v2)):
        s = constants.alpha_sum(i)
        yield f"alpha parts of boundary {i} sum to the region volume", s == v, str(s)
    for i in (1, 2):
        bad = [q for q in _prime_powers(theta_limit) if constants.theta_local(i, q) != constants.theta_closed(i, q)]
        yield f"local subset sum equals closed factor (boundary {i}, q <= {theta_limit})", not bad, f"{len(bad)} mismatches"
    for F, pr in oracle_primes():
        for i in (1, 2):
            o = constants.tamagawa_p_oracle(i, pr, depth)
            tau = constants.tamagawa_p(i, pr.norm)
            ok = o.contains(tau) and o.width < Fraction(1, 1000)
            yield (f"local volume oracle {F.spec} p={pr.p} {pr.splitting} q={pr.norm} i={i}", ok,
                   f"[{float(o.lo):.9f}, {float(o.hi):.9f}] closed {tau}")
    for d in TEST_FIELDS:
        F = make_field(d)
        for i in (1, 2):
            pred = constants.predict(F, i, P=prime_bound)
            yield f"framework constant matches closed form {F.spec} i={i}", pred.closed_form_match, str(pred.symbolic)


# ---------------------------------------------------------------------------
# worked example over Q(sqrt(-5))


def worked_example() -> dict:
    """The point pair over Q(sqrt(-5)) and its two twists."""
    F = make_field(-5)
    a = F.omega                    # sqrt(-5)
    e = F.elem
    p = F.ideal(2, 1 + a)
    C = (p,) * 6
    Cp = (p ** 3,) + (p,) * 5
    P1 = (e(1), e(Fraction(1, 2)), e(1), 1 + a, e(2), 1 - a, (1 + a) / 2, (1 - a) / 2, e(7))
    P2 = (e(1), e(1), e(1), 1 + a, e(2), 1 - a, 1 + a, 1 - a, e(14))
    return {
        "field": F, "p": p,
        "twist": torsor.make_twist(1, C), "twist_nicer": torsor.make_twist(1, Cp),
        "P1": P1, "P2": P2, "t": (e(2), e(1), e(1), e(1), e(1), e(1)),
    }


def example_checks() -> Iterator[Check]:
    ex = worked_example()
    F, P1, P2 = ex["field"], ex["P1"], ex["P2"]
    a = F.omega
    ok, why = torsor.membership(P1, ex["twist"], mode="lemma")
    yield "P' is a torsor point of the twist C (all conditions)", ok, why
    ok, why = torsor.membership(P1, ex["twist_nicer"], mode="nicer")
    yield "P' is rejected by the unit-normalized twist C'", (not ok) and why == "η₂ not a unit", why
    ok, why = torsor.membership(P2, ex["twist_nicer"], mode="nicer")
    yield "P'' is a point of the unit-normalized twist C'", ok, why
    rel = 2 * 7 + (1 + a) ** 3 / 2 + (1 - a) ** 3 / 2
    yield "2*7 + (1+a)^3/2 + (1-a)^3/2 = 0", rel.is_zero(), str(rel)
    acted = torsor.unit_action(ex["t"], torsor.TorsorPoint(P1, ex["twist"]))
    yield "t = (2,1,1,1,1,1) maps P' to P''", acted.eta == P2, ""
    yield "t maps the twist C to C'", acted.twist.C == ex["twist_nicer"].C, ""
    pt = torsor.TorsorPoint(P2, ex["twist_nicer"])
    x = torsor.psi(pt)
    yield "image of P'' lies on the surface", _on_surface(x), ""
    u = ex["twist_nicer"].u
    lhs, rhs = torsor.script_height(1, pt), u * height(1, x)
    yield "script height equals u * H(psi(P''))", lhs == rhs, f"{lhs} = {u} * {height(1, x)}"
    yield "M-monomials of P'' generate the gcd target", torsor.gcd_identity(pt), ""


def _on_surface(x) -> bool:
    x0, x1, x2, x3, x4 = x
    return (x0 * x1 - x2 * x3).is_zero() and (x0 * x3 + x1 * x3 + x2 * x4).is_zero()


# ---------------------------------------------------------------------------
# correspondence


def correspondence_checks(Bs=(5, 10), fields=TEST_FIELDS, workers: int | None = None) -> Iterator[Check]:
    for d in fields:
        F = make_field(d)
        for i in (1, 2):
            for B in Bs:
                a = count_direct(F, i, B, workers=workers).count
                b = torsor.count_torsor(F, i, B, workers=workers).count
                yield f"torsor count equals direct count {F.spec} i={i} B={B}", a == b, f"{b} vs {a}"
                v = torsor.verify_points(F, i, B)
                ok = v["height_fail"] == 0 and v["gcd_fail"] == 0 and v["checked"] > 0
                yield (f"height and gcd identities on all torsor points {F.spec} i={i} B={B}", ok,
                       f"{v['checked']} points, {v['height_fail']} height, {v['gcd_fail']} gcd failures")


SUITES: dict[str, Callable[..., Iterator[Check]]] = {
    "geometry": geometry_checks,
    "constants": constants_checks,
    "example": example_checks,
    "correspondence": correspondence_checks,
}


def run_suite(name: str, **opts) -> list[dict]:
    """Run one suite (or 'all') and return one record per check."""
    if name == "all":
        names = list(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise KeyError(name)
    out = []
    for n in names:
        fn = SUITES[n]
        kw = {k: v for k, v in opts.items() if k in fn.__code__.co_varnames and v is not None}
        for check, ok, detail in fn(**kw):
            out.append({"suite": n, "check": check, "ok": bool(ok), "detail": detail})
    return out
