"""Ingredients of the predicted leading constant.

Local factors and polytope volumes are exact rationals.  The Euler
product is an outward-rounded interval (mpmath ``iv``) together with a
rigorous tail factor, so every reported constant is an interval.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations
from math import factorial, floor
from typing import Sequence

import mpmath
import numpy as np
import sympy

from . import geometry
from ._parallel import resolve_workers, run_tasks
from .qfield import FieldParams, PrimeIdeal, prime_ideal_norms

__all__ = [
    "theta_local",
    "theta_closed",
    "EulerProductResult",
    "euler_product",
    "tamagawa_p",
    "tamagawa_p_oracle",
    "unit_pair_fraction",
    "Polytope",
    "polytope_volume",
    "polytope_vertices",
    "REGIONS",
    "ALPHA_REGIONS",
    "alpha",
    "alpha_sum",
    "region_volume",
    "monte_carlo_volume",
    "Prediction",
    "predict",
    "local_factor_identity",
    "rational_volume_prefactor",
    "OracleInterval",
    "Q_PREFACTOR",
    "ARCH_NORMALIZATION",
    "RANK",
]

iv = mpmath.iv
iv.prec = 96

RANK = {1: 3, 2: 2}                     # rank of Pic of the open part
J_SETS = {1: (4, 5, 6, 7), 2: (5, 6, 7)}
ARCH_NORMALIZATION = 4 * sympy.pi ** 2  # residue measure attached to each maximal face
Q_PREFACTOR = {1: Fraction(1, 144), 2: Fraction(11, 72)}


def _check_q(q) -> Fraction:
    q = Fraction(q)
    if q < 2:
        raise ValueError("prime-ideal norm must be at least 2")
    return q


def _theta8(i: int, L: frozenset, q: Fraction) -> Fraction:
    """Local density of the first summation for the set L of divisible variables."""
    if L in (frozenset(), frozenset({5}), frozenset({6}), frozenset({7})):
        return Fraction(1)
    if i == 1 and L in (frozenset({4}), frozenset({4, 7})):
        return 1 - 1 / q
    return Fraction(0)


def theta_local(i: int, q) -> Fraction:
    """Subset sum over L of J_i weighted by (1-1/q)^(|J|-|L|) (1/q)^|L|."""
    if i not in (1, 2):
        raise ValueError("boundary must be 1 or 2")
    q = _check_q(q)
    J = J_SETS[i]
    total = Fraction(0)
    for r in range(len(J) + 1):
        for L in combinations(J, r):
            total += (1 - 1 / q) ** (len(J) - r) * (1 / q) ** r * _theta8(i, frozenset(L), q)
    return total


def theta_closed(i: int, q) -> Fraction:
    q = _check_q(q)
    if i == 1:
        return (1 - 1 / q) ** 3 * (1 + 3 / q)
    if i == 2:
        return (1 - 1 / q) ** 2 * (1 + 2 / q)
    raise ValueError("boundary must be 1 or 2")


# ---------------------------------------------------------------------------
# Euler product

# log f(u) >= -TAIL_C * u^2 for the local factor f at u = 1/q, q >= 4
TAIL_C = {1: 12, 2: 6}


@dataclass(frozen=True)
class EulerProductResult:
    field: str
    boundary: int
    P: int
    num_factors: int
    partial: tuple[Fraction, Fraction]   # enclosure of the truncated product
    tail: tuple[Fraction, Fraction]      # enclosure of the omitted factors
    lo: Fraction
    hi: Fraction

    @property
    def interval(self):
        return _from_fractions(self.lo, self.hi)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        return self.lo <= Fraction(x) <= self.hi


def _to_fraction(x) -> Fraction:
    """Exact value of an mpmath binary float."""
    sign, man, exp, _ = x._mpf_
    v = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -v if sign else v


def _endpoints(x) -> tuple[Fraction, Fraction]:
    lo, hi = x._mpi_
    return _to_fraction(mpmath.mp.make_mpf(lo)), _to_fraction(mpmath.mp.make_mpf(hi))


def _from_fractions(lo: Fraction, hi: Fraction):
    # dyadic endpoints produced at the working precision convert exactly
    a = iv.mpf(lo.numerator) / lo.denominator
    b = iv.mpf(hi.numerator) / hi.denominator
    return iv.mpf([a.a, b.b])


def _chunk_product(i: int, norms: Sequence[int]) -> tuple[Fraction, Fraction]:
    """Outward-rounded product of one block, endpoints as exact rationals."""
    iv.prec = 96
    r = iv.mpf(1)
    for q in norms:
        u = iv.mpf(1) / q
        if i == 1:
            r *= (1 - u) ** 3 * (1 + 3 * u)
        else:
            r *= (1 - u) ** 2 * (1 + 2 * u)
    return _endpoints(r)


def euler_product(field: FieldParams, i: int, P, block: int = 4096,
                  workers: int | None = None) -> EulerProductResult:
    """Product of theta_closed over prime ideals of norm <= P with a tail interval.

    Tail: every factor lies in (0, 1] and satisfies log f >= -c/q^2 with
    c = 12 (i = 1, q >= 4) or 6 (i = 2, q >= 3).  Norms of prime ideals
    beyond P are primes or prime squares, each attained by at most two
    ideals (one over Q), so the remaining sum of q^-2 is at most 2/P.
    Blocks have a fixed size and are multiplied in order, so the result
    does not depend on the worker count.
    """
    if i not in (1, 2):
        raise ValueError("boundary must be 1 or 2")
    P = floor(P)
    norms = list(prime_ideal_norms(field, P)) if P >= 2 else []
    tasks = [(i, norms[lo:lo + block]) for lo in range(0, len(norms), block)]
    partial = iv.mpf(1)
    for lo, hi in run_tasks(_chunk_product, tasks, resolve_workers(workers)):
        partial *= _from_fractions(lo, hi)
    if P < 4:
        # only (0, 1] is known for the missing factors
        tail_lo = iv.mpf(0)
    else:
        mult = 1 if field.is_rational else 2
        tail_lo = iv.exp(-iv.mpf(TAIL_C[i] * mult) / P)
    tail_hi = iv.mpf(1)
    lo = _endpoints(partial * tail_lo)[0]
    hi = _endpoints(partial * tail_hi)[1]
    return EulerProductResult(field.spec, i, P, len(norms), _endpoints(partial),
                              (_endpoints(tail_lo)[0], Fraction(1)), lo, hi)


# ---------------------------------------------------------------------------
# p-adic densities


def tamagawa_p(i: int, q) -> Fraction:
    """Closed form 1 + (6 - #D_i)/q of the local volume."""
    q = _check_q(q)
    if i not in (1, 2):
        raise ValueError("boundary must be 1 or 2")
    return 1 + (6 - len(geometry.BOUNDARY[i])) / q


def _power_hnf(prime: PrimeIdeal, k: int) -> tuple[int, int, int]:
    f = prime.ideal.field
    if f.d == 0:
        return prime.p ** k, 0, 1
    J = prime.ideal ** k
    return J.hnf


def _reduce(hnf, x, y):
    a, b, c = hnf
    m = y // c
    x, y = x - m * b, y - m * c
    return x % a, y


def unit_pair_fraction(prime: PrimeIdeal, k: int, limit: int = 200_000) -> Fraction:
    """Share of unit pairs (u, w) mod p^k with u + w in p^k.

    Counted on residues when the residue ring has at most ``limit``
    elements; deeper levels use the lifting relation f(k) = f(k-1)/q,
    which holds because each unit class mod p^(k-1) has exactly q lifts.
    """
    q = prime.norm
    if q ** k > limit:
        return unit_pair_fraction(prime, k - 1, limit) / q
    hnf = _power_hnf(prime, k)
    base = prime.ideal.hnf if prime.ideal.field.d else (prime.p, 0, 1)
    a, b, c = hnf

    def is_unit(x, y):
        ba, bb, bc = base
        if y % bc:
            return True
        return (x - (y // bc) * bb) % ba != 0

    units = [(x, y) for y in range(c) for x in range(a) if is_unit(x, y)]
    unit_set = set(units)
    pairs = 0
    for x, y in units:
        if _reduce(hnf, -x, -y) in unit_set:
            pairs += 1
    return Fraction(pairs, len(units) ** 2)


@dataclass(frozen=True)
class OracleInterval:
    lo: Fraction
    hi: Fraction

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


def tamagawa_p_oracle(i: int, prime: PrimeIdeal, M: int = 12) -> OracleInterval:
    """Local volume by summing the density over valuation cells (v_x, v_y).

    Cells with |v| <= M are summed exactly; for v_x = v_y = -k < 0 the
    share of the cell with |x + y| <= 1 comes from residue counting.
    The off-diagonal cells outside the box are summed as exact geometric
    series.  On an omitted diagonal cell each unit u admits at most one
    class w with u + w in p^k, so the share is at most 1/phi(p^k) and the
    omitted diagonal contributes at most q^(-M-1).
    """
    if M < 1:
        raise ValueError("depth M must be at least 1")
    if i not in (1, 2):
        raise ValueError("boundary must be 1 or 2")
    q = Fraction(prime.norm)

    def meas(v):  # measure of {x : v(x) = v}
        return q ** (-v) * (1 - 1 / q)

    def absv(v):
        return q ** (-v)

    total = Fraction(0)
    for vx in range(-M, M + 1):
        for vy in range(-M, M + 1):
            ax, ay = absv(vx), absv(vy)
            if i == 1:
                dens = 1 / max(Fraction(1), ax, ay, ax * ay)
            else:
                dens = 1 / max(Fraction(1), ax, ax * ay)
            cell = meas(vx) * meas(vy)
            if vx == vy and vx < 0:
                # |xy| > 1 here, so only the part with |x + y| <= 1 counts
                total += cell * dens * unit_pair_fraction(prime, -vx)
                continue
            # off the negative diagonal, v(x + y) = min(vx, vy)
            if i == 1:
                inside = vx + vy >= 0 or min(vx, vy) >= 0
            else:
                inside = (vy >= 0 and vx + vy >= 0) or min(vx, vy) >= 0
            if inside:
                total += cell * dens
    # omitted off-diagonal cells, exact
    tail_m = q ** (-M - 1)          # measure of {v(x) > M}
    both_small = 1 - (1 - tail_m) ** 2
    one_big = (1 - 1 / q) * M * tail_m + tail_m
    if i == 1:
        lower_tail = both_small + 2 * one_big
    else:
        lower_tail = both_small + one_big
    lo = total + lower_tail
    hi = lo + q ** (-M - 1)
    return OracleInterval(lo, hi)


# ---------------------------------------------------------------------------
# polytopes


@dataclass(frozen=True)
class Polytope:
    """{t : a.t <= beta for each (a, beta)}, with t >= 0 added when ``nonneg``."""

    dim: int
    inequalities: tuple[tuple[tuple[Fraction, ...], Fraction], ...]
    nonneg: bool = True

    @classmethod
    def make(cls, dim: int, ineqs, nonneg: bool = True) -> "Polytope":
        rows = []
        for a, beta in ineqs:
            if len(a) != dim:
                raise ValueError("inequality has the wrong length")
            rows.append((tuple(Fraction(x) for x in a), Fraction(beta)))
        return cls(dim, tuple(rows), nonneg)

    def all_constraints(self) -> list[tuple[tuple[Fraction, ...], Fraction]]:
        rows = list(self.inequalities)
        if self.nonneg:
            for j in range(self.dim):
                e = [Fraction(0)] * self.dim
                e[j] = Fraction(-1)
                rows.append((tuple(e), Fraction(0)))
        return rows

    def contains(self, t: Sequence) -> bool:
        return all(sum(x * y for x, y in zip(a, t)) <= b for a, b in self.all_constraints())

    def transform(self, U: Sequence[Sequence[int]]) -> "Polytope":
        """Image under t = U s for an integer matrix U (constraints in s)."""
        d = self.dim
        rows = []
        for a, beta in self.all_constraints():
            rows.append((tuple(sum(a[r] * U[r][c] for r in range(d)) for c in range(d)), beta))
        return Polytope(d, tuple(rows), nonneg=False)


def _solve(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    """Unique solution of a square system, or None if singular."""
    n = len(A)
    M = [row[:] + [bi] for row, bi in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [x / pv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


def _rank(vectors: list[list[Fraction]]) -> int:
    return sympy.Matrix(vectors).rank() if vectors else 0


def _null_vector(A: list[list[Fraction]], d: int) -> list[Fraction] | None:
    ns = sympy.Matrix(A).nullspace() if A else [sympy.eye(d)[:, 0]]
    if len(ns) != 1:
        return None
    return [Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) for x in ns[0]]


def _is_bounded(P: Polytope) -> bool:
    cons = P.all_constraints()
    d = P.dim
    for S in combinations(cons, d - 1):
        r = _null_vector([list(a) for a, _ in S], d)
        if r is None:
            continue
        for s in (1, -1):
            ray = [s * x for x in r]
            if all(sum(x * y for x, y in zip(a, ray)) <= 0 for a, _ in cons):
                return False
    if d == 1:
        for s in (1, -1):
            if all(a[0] * s <= 0 for a, _ in cons):
                return False
    return True


def polytope_vertices(P: Polytope) -> list[tuple[Fraction, ...]]:
    """Vertices: feasible solutions of every nonsingular d-subset of tight constraints."""
    cons = P.all_constraints()
    verts = set()
    for S in combinations(range(len(cons)), P.dim):
        sol = _solve([list(cons[k][0]) for k in S], [cons[k][1] for k in S])
        if sol is not None and P.contains(sol):
            verts.add(tuple(sol))
    return sorted(verts)


def _affine_dim(pts: list[tuple[Fraction, ...]]) -> int:
    if not pts:
        return -1
    base = pts[0]
    return _rank([[x - y for x, y in zip(p, base)] for p in pts[1:]])


def _triangulate(verts: list, dim: int, cons: list) -> list[list]:
    """Simplices (as vertex lists) of a fan triangulation of conv(verts)."""
    if dim == 0:
        return [[verts[0]]]
    v0 = verts[0]
    out = []
    seen = set()
    for a, beta in cons:
        face = [v for v in verts if sum(x * y for x, y in zip(a, v)) == beta]
        key = frozenset(face)
        if v0 in key or key in seen or len(face) < dim:
            continue
        if _affine_dim(face) != dim - 1:
            continue
        seen.add(key)
        for simplex in _triangulate(sorted(face), dim - 1, cons):
            out.append([v0] + simplex)
    return out


def polytope_volume(P: Polytope) -> Fraction:
    """Exact Euclidean volume via vertex enumeration and a recursive fan triangulation."""
    if not _is_bounded(P):
        raise ValueError("polytope is unbounded")
    verts = polytope_vertices(P)
    d = P.dim
    if _affine_dim(verts) < d:
        return Fraction(0)
    cons = P.all_constraints()
    vol = Fraction(0)
    for simplex in _triangulate(verts, d, cons):
        v0 = simplex[0]
        M = sympy.Matrix([[x - y for x, y in zip(v, v0)] for v in simplex[1:]])
        det = M.det()
        vol += abs(Fraction(int(sympy.fraction(det)[0]), int(sympy.fraction(det)[1])))
    return vol / factorial(d)


def _poly(dim, rows) -> Polytope:
    return Polytope.make(dim, rows)


# coordinates (t4, t5, t6, t8) for boundary 1, (t5, t6, t8) for boundary 2
REGIONS = {
    1: _poly(4, [((0, 1, 2, 1), 1), ((1, 0, 1, 1), 1), ((1, 1, -1, -1), 0)]),
    2: _poly(3, [((0, 1, 1), 1), ((1, -1, -1), 0), ((2, 1, 0), 1)]),
}

ALPHA_REGIONS = {
    (1, "A1"): _poly(4, [((1, 0, -3, -2), -1), ((0, 1, 2, 1), 1), ((1, 0, 1, 1), 1)]),
    (1, "A2"): _poly(4, [((1, 1, -1, -1), 0), ((-1, 0, 3, 2), 1), ((1, 0, 1, 1), 1)]),
    (2, "A1"): _poly(3, [((0, -3, -2), -1), ((1, 2, 1), 1), ((0, 1, 1), 1)]),
    (2, "A2"): _poly(3, [((0, 3, 2), 1), ((1, -1, -1), 0), ((0, 1, 1), 1)]),
    (2, "A3"): _poly(3, [((2, 1, 0), 1), ((-1, -2, -1), -1), ((0, 1, 1), 1)]),
}

FACE_LABELS = {1: {"A1": (1, 2), "A2": (2, 3)}, 2: {"A1": (1, 2), "A2": (2, 3), "A3": (1, 4)}}


def region_volume(i: int) -> Fraction:
    return polytope_volume(REGIONS[i])


def alpha(i: int, A: str) -> Fraction:
    try:
        P = ALPHA_REGIONS[(i, A)]
    except KeyError:
        raise ValueError(f"unknown face {A!r} for boundary {i}") from None
    return polytope_volume(P)


def alpha_sum(i: int) -> Fraction:
    return sum((alpha(i, A) for A in FACE_LABELS[i]), Fraction(0))


def monte_carlo_volume(P: Polytope, samples: int = 10_000_000, seed: int = 0,
                       chunk: int = 1_000_000) -> tuple[float, float]:
    """Hit-count estimate of vol(P) inside the unit cube, with its standard error."""
    rng = np.random.default_rng(seed)
    A = np.array([[float(x) for x in a] for a, _ in P.all_constraints()])
    b = np.array([float(beta) for _, beta in P.all_constraints()])
    hits = 0
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        pts = rng.random((m, P.dim))
        hits += int(np.count_nonzero(np.all(pts @ A.T <= b, axis=1)))
        done += m
    p = hits / samples
    return p, (p * (1 - p) / samples) ** 0.5


# ---------------------------------------------------------------------------
# assembled prediction


@dataclass
class Prediction:
    field: str
    boundary: int
    b: int
    c_fin: object                # iv interval
    c_inf: sympy.Expr            # exact
    c: object                    # iv interval
    symbolic: sympy.Expr         # constant part multiplying the Euler product
    closed_form: sympy.Expr
    closed_form_match: bool
    euler: EulerProductResult
    parts: dict = dc_field(default_factory=dict)

    def main_term(self, B) -> object:
        B = iv.mpf(B)
        return self.c * B * iv.log(B) ** (self.b - 1)


def _expr_interval(e: sympy.Expr):
    x = sympy.N(e, 40)
    m = mpmath.mpf(str(x))
    eps = abs(m) * mpmath.mpf(10) ** -35
    return iv.mpf([m - eps, m + eps])


def local_factor_identity(i: int) -> bool:
    """(1 - 1/q)^rk * tau_p equals the Euler factor as rational functions of q."""
    q = sympy.Symbol("q", positive=True)
    rk = geometry.pic_rank(i)
    tau = 1 + sympy.Integer(6 - len(geometry.BOUNDARY[i])) / q
    closed = (1 - 1 / q) ** 3 * (1 + 3 / q) if i == 1 else (1 - 1 / q) ** 2 * (1 + 2 / q)
    return sympy.simplify((1 - 1 / q) ** rk * tau - closed) == 0


def predict(field: FieldParams, i: int, P=10**5, arch_norm: sympy.Expr | None = None,
            workers: int | None = None) -> Prediction:
    """Leading constant c and exponent b for N_i(B) ~ c B (log B)^(b-1).

    The framework path multiplies rho^rk, the local factors
    (1 - 1/q)^rk tau_p and the archimedean part |disc|^-1 sum(alpha) * 4 pi^2.
    Over Q the prefactors 1/144 and 11/72 are used directly.
    """
    if i not in (1, 2):
        raise ValueError("boundary must be 1 or 2")
    default_norm = arch_norm is None
    arch = ARCH_NORMALIZATION if default_norm else sympy.sympify(arch_norm)
    b = geometry.b_exponent(i)
    rk = geometry.pic_rank(i)
    if rk != RANK[i]:
        raise AssertionError("Picard rank disagrees with the local factor exponent")
    euler = euler_product(field, i, P, workers=workers)
    asum = sympy.Rational(alpha_sum(i).numerator, alpha_sum(i).denominator)
    local_ok = local_factor_identity(i)
    if field.is_rational:
        pref = Q_PREFACTOR[i]
        closed = sympy.Rational(pref.numerator, pref.denominator)
        c_inf = closed
        framework = closed
        rho = sympy.Integer(1)
        abs_disc = 1
    else:
        rho = field.rho
        abs_disc = abs(field.disc)
        c_inf = asum * arch / abs_disc
        framework = rho ** rk * c_inf
        if i == 1:
            closed = rho ** 3 / abs_disc * sympy.pi ** 2 / 18
        else:
            closed = rho ** 2 / abs_disc * 11 * sympy.pi ** 2 / 18
    Theta = sympy.Symbol("Theta")
    match = local_ok and sympy.simplify(framework * Theta - closed * Theta) == 0
    if default_norm and not match:
        raise AssertionError("framework constant disagrees with the closed form")
    c_fin = _expr_interval(rho ** rk) * euler.interval
    c = _expr_interval(framework) * euler.interval
    return Prediction(
        field=field.spec, boundary=i, b=b, c_fin=c_fin, c_inf=sympy.nsimplify(c_inf),
        c=c, symbolic=framework, closed_form=closed, closed_form_match=bool(match),
        euler=euler,
        parts={"rho_power": rho ** rk, "alpha_sum": asum, "rank": rk,
               "arch_norm": arch, "abs_disc": abs_disc,
               "tamagawa_product": (euler.lo, euler.hi)},
    )


def rational_volume_prefactor(i: int) -> Fraction:
    """Prefactor over Q obtained from the real volume integral: 4 * vol(region).

    Each of the 8 - #D_i free variables contributes two signs, the boundary
    units contribute 2^#D_i choices, and the count divides by 2^6.  Used
    only as a consistency experiment next to the stated prefactors.
    """
    free = 8 - len(geometry.BOUNDARY[i])
    return Fraction(2 ** free * 2 ** len(geometry.BOUNDARY[i]), 2 ** 6) * region_volume(i)
