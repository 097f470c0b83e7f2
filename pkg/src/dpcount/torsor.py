"""Integral points on the twisted universal torsors.

A torsor point is a tuple eta = (eta1, ..., eta9) with
eta1*eta4^2*eta7 + eta3*eta6^2*eta8 + eta5*eta9 = 0, eta_j in the module
O_j of its twist, and pairwise coprime derived ideals I_j = eta_j * O_j^-1
for curves that do not meet.  The map psi sends it to a point of the
surface; every counted point has exactly omega_K^6 preimages.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import isqrt
from typing import Iterator, Sequence

import numpy as np

from . import geometry, kernels
from ._parallel import resolve_workers, run_tasks
from .qfield import (
    Elem,
    FieldParams,
    FracIdeal,
    ideal_from_elements,
    lattice_points,
    make_field,
)
from .surface import CountResult, height, _check_args

__all__ = [
    "TwistData",
    "TorsorPoint",
    "make_twist",
    "twists",
    "psi",
    "script_height",
    "membership",
    "unit_action",
    "act_on_twist",
    "derived_ideals",
    "irrelevant_sum",
    "height_compatible",
    "gcd_identity",
    "count_torsor",
    "enumerate_torsor",
    "torsor_points",
    "kernel_spec",
]

COPRIME = geometry.coprimality_pairs()
SUBSCRIPT = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


@dataclass(frozen=True)
class TwistData:
    boundary: int
    C: tuple[FracIdeal, ...]
    O: tuple[FracIdeal, ...]   # O[1..9]; O[0] unused (unit ideal)
    u: int | Fraction

    @property
    def field(self) -> FieldParams:
        return self.C[0].field


@dataclass(frozen=True)
class TorsorPoint:
    eta: tuple[Elem, ...]       # eta[0] is eta1
    twist: TwistData

    def __getitem__(self, j: int) -> Elem:
        """1-based access: p[5] is eta5."""
        return self.eta[j - 1]


def _modules(C: Sequence[FracIdeal]) -> tuple[FracIdeal, ...]:
    C0, C1, C2, C3, C4, C5 = C
    one = C0.field.unit_ideal
    return (
        one,
        C1 / C4,
        C0 / (C1 * C2 * C3),
        C2 / C5,
        C4,
        C3,
        C5,
        C0 / (C1 * C4),
        C0 / (C2 * C5),
        C0 / C3,
    )


def make_twist(i: int, C: Sequence[FracIdeal]) -> TwistData:
    """Twist data for an arbitrary 6-tuple of ideals."""
    C = tuple(C)
    if len(C) != 6:
        raise ValueError("a twist needs six ideals")
    C0, C1, C2, C3, C4, C5 = C
    if i == 1:
        u = (C3 * C3 * C4 * C5).norm()
    else:
        u = (C3 * C3 * C5).norm()
    if u.denominator == 1:
        u = u.numerator
    return TwistData(i, C, _modules(C), u)


def twists(field: FieldParams, i: int) -> list[TwistData]:
    """All twists of the family for boundary i, in deterministic order."""
    reps = field.class_reps
    one = field.unit_ideal
    out = []
    if i == 1:
        for C3, C4, C5 in product(reps, repeat=3):
            out.append(make_twist(1, (C3 * C4 * C5, C4, C5, C3, C4, C5)))
    elif i == 2:
        for C3, C5 in product(reps, repeat=2):
            out.append(make_twist(2, (C3 * C5, one, C5, C3, one, C5)))
    else:
        raise ValueError("boundary must be 1 or 2")
    return out


def _monomial(eta: Sequence[Elem], exps: Sequence[int]) -> Elem:
    r = eta[0].field.one
    for x, e in zip(eta, exps):
        if e:
            r = r * x ** e
    return r


def psi(eta: Sequence[Elem] | TorsorPoint) -> tuple[Elem, ...]:
    """The five anticanonical monomials."""
    if isinstance(eta, TorsorPoint):
        eta = eta.eta
    if any(x.is_zero() for x in eta[:8]):
        raise ValueError("image is not in V: one of eta1..eta8 vanishes")
    return tuple(_monomial(eta, e) for e in geometry.PSI_EXPONENTS)


def script_height(i: int, eta: Sequence[Elem] | TorsorPoint) -> Fraction:
    if isinstance(eta, TorsorPoint):
        eta = eta.eta
    if any(eta[j - 1].is_zero() for j in (5, 6, 7, 8)):
        raise ValueError("eta5..eta8 must be nonzero")
    return max(_monomial(eta, e).norm() for e in geometry.HEIGHT_EXPONENTS[i])


def derived_ideals(eta: Sequence[Elem], twist: TwistData) -> list[FracIdeal | None]:
    """I_j = eta_j * O_j^-1 for j = 1..9; None stands for the zero ideal."""
    out: list[FracIdeal | None] = []
    for j in range(1, 10):
        x = eta[j - 1]
        if x.is_zero():
            out.append(None)
        else:
            out.append(twist.O[j].inverse().scale(x))
    return out


def _coprime(I: FracIdeal | None, J: FracIdeal | None) -> bool:
    if I is None:
        return J is not None and J.is_unit_ideal()
    if J is None:
        return I.is_unit_ideal()
    return (I + J).is_unit_ideal()


def _is_unit(x: Elem) -> bool:
    return x.is_integral() and x.norm() == 1


def membership(eta: Sequence[Elem] | TorsorPoint, twist: TwistData | None = None,
               mode: str = "nicer") -> tuple[bool, str]:
    """Check a tuple against a twist; returns (ok, reason)."""
    if isinstance(eta, TorsorPoint):
        twist = twist or eta.twist
        eta = eta.eta
    if twist is None:
        raise ValueError("a twist is required")
    if mode not in ("lemma", "nicer"):
        raise ValueError("mode must be 'lemma' or 'nicer'")
    i = twist.boundary
    boundary = geometry.BOUNDARY[i]
    for j in range(1, 9):
        if eta[j - 1].is_zero():
            return False, f"η{j} is zero".translate(SUBSCRIPT)
    if mode == "nicer":
        for j in boundary:
            if not _is_unit(eta[j - 1]):
                return False, f"η{j} not a unit".translate(SUBSCRIPT)
    for j in range(1, 10):
        if not twist.O[j].contains(eta[j - 1]):
            return False, f"η{j} not in its module".translate(SUBSCRIPT)
    e = eta
    rel = e[0] * e[3] ** 2 * e[6] + e[2] * e[5] ** 2 * e[7] + e[4] * e[8]
    if not rel.is_zero():
        return False, "torsor equation fails"
    ideals = derived_ideals(eta, twist)
    for j in boundary:
        if not ideals[j - 1].is_unit_ideal():
            return False, f"I{j} is not the unit ideal".translate(SUBSCRIPT)
    for pair in sorted(tuple(sorted(p)) for p in COPRIME):
        j, k = pair
        if j in boundary or k in boundary:
            continue
        if not _coprime(ideals[j - 1], ideals[k - 1]):
            return False, f"I{j} and I{k} not coprime".translate(SUBSCRIPT)
    return True, "ok"


# exponents of t0..t5 in the action on eta1..eta9
ACTION = (
    (0, 1, 0, 0, -1, 0),
    (1, -1, -1, -1, 0, 0),
    (0, 0, 1, 0, 0, -1),
    (0, 0, 0, 0, 1, 0),
    (0, 0, 0, 1, 0, 0),
    (0, 0, 0, 0, 0, 1),
    (1, -1, 0, 0, -1, 0),
    (1, 0, -1, 0, 0, -1),
    (1, 0, 0, -1, 0, 0),
)


def unit_action(t: Sequence[Elem], eta: Sequence[Elem] | TorsorPoint):
    """Apply the torus element t = (t0, ..., t5)."""
    pt = eta if isinstance(eta, TorsorPoint) else None
    eta = pt.eta if pt else eta
    out = []
    for x, row in zip(eta, ACTION):
        y = x
        for tk, e in zip(t, row):
            if e:
                y = y * tk ** e
        out.append(y)
    if pt is not None:
        return TorsorPoint(tuple(out), act_on_twist(t, pt.twist))
    return tuple(out)


def act_on_twist(t: Sequence[Elem], twist: TwistData) -> TwistData:
    """The twist (t0*C0, ..., t5*C5) matching an acted point."""
    C = tuple(Ck.scale(tk) for Ck, tk in zip(twist.C, t))
    if C == twist.C:
        return twist
    return make_twist(twist.boundary, C)


def irrelevant_sum(eta: Sequence[Elem], twist: TwistData) -> FracIdeal | None:
    """Sum of the nine products f_j evaluated on the derived ideals."""
    ideals = derived_ideals(eta, twist)
    total = None
    for exps in geometry.IRRELEVANT_MONOMIALS:
        prod_ = eta[0].field.unit_ideal
        zero = False
        for I, e in zip(ideals, exps):
            if e:
                if I is None:
                    zero = True
                    break
                prod_ = prod_ * I
        if zero:
            continue
        total = prod_ if total is None else total + prod_
    return total


def coprimality_holds(eta: Sequence[Elem], twist: TwistData) -> bool:
    ideals = derived_ideals(eta, twist)
    return all(_coprime(ideals[j - 1], ideals[k - 1]) for j, k in (tuple(p) for p in COPRIME))


def height_compatible(p: TorsorPoint) -> bool:
    """script height equals u times the height of the image."""
    i = p.twist.boundary
    return script_height(i, p) == p.twist.u * height(i, psi(p))


def gcd_target(twist: TwistData) -> FracIdeal:
    C0, C1, C2, C3, C4, C5 = twist.C
    target = C0 * C0 / (C1 * C2)
    if twist.boundary == 2:
        target = target / C4
    return target


def gcd_identity(p: TorsorPoint) -> bool:
    """The M-monomials generate C0^2 C1^-1 C2^-1 (times C4^-1 for boundary 2)."""
    vals = [_monomial(p.eta, e) for e in geometry.M_EXPONENTS[p.twist.boundary]]
    return ideal_from_elements(p.eta[0].field, vals) == gcd_target(p.twist)


# ---------------------------------------------------------------------------
# reference enumeration with exact element arithmetic (small B)


def _loop_vars(i: int) -> tuple[int, ...]:
    return (5, 4, 6, 7, 8) if i == 1 else (5, 6, 7, 8)


def _min_norms(twist: TwistData) -> dict[int, Fraction]:
    from .qfield import lattice_minimum
    f = twist.field
    return {j: Fraction(lattice_minimum(f, twist.O[j].hnf), twist.O[j].den ** (1 if f.d == 0 else 2))
            for j in range(4, 10)}


def _caps(i: int, T: Fraction, mins: dict[int, Fraction]) -> dict[int, Fraction]:
    """Upper bounds for ||eta_j|| implied by the height and the minimal norms."""
    caps = {}
    for j in _loop_vars(i):
        best = None
        for exps in geometry.HEIGHT_EXPONENTS[i]:
            e = exps[j - 1]
            if not e:
                continue
            rest = Fraction(1)
            for k, ek in enumerate(exps, start=1):
                if k != j and ek:
                    rest *= mins[k] ** ek
            Y = T / rest
            if e == 1:
                cap = Y
            else:
                # largest cap with cap^2 <= Y, rounded up to a safe rational
                cap = Fraction(isqrt(Y.numerator * Y.denominator) + 1, Y.denominator)
            best = cap if best is None else min(best, cap)
        caps[j] = best
    return caps


def enumerate_torsor(field: FieldParams, i: int, B, check_coprime: bool = True) -> Iterator[TorsorPoint]:
    """All torsor points of height <= B over all twists, every unit tuple included.

    With ``check_coprime=False`` tuples failing only the coprimality
    conditions are yielded as well.
    """
    from .qfield import enumerate_bounded_norm
    B = _check_args(i, B)
    units = field.units
    for tw in twists(field, i):
        T = tw.u * B
        mins = _min_norms(tw)
        caps = _caps(i, T, mins)
        lists = {j: enumerate_bounded_norm(tw.O[j], caps[j]) for j in _loop_vars(i)}
        unit_vars = geometry.BOUNDARY[i]
        four = lists[4] if i == 1 else [None]
        for e4 in four:
            for e5 in lists[5]:
                for e6 in lists[6]:
                    for e7 in lists[7]:
                        for e8 in lists[8]:
                            for us in product(units, repeat=len(unit_vars)):
                                eta = [None] * 9
                                for j, u in zip(unit_vars, us):
                                    eta[j - 1] = u
                                if i == 1:
                                    eta[3] = e4
                                eta[4], eta[5], eta[6], eta[7] = e5, e6, e7, e8
                                if script_height(i, eta + [field.one]) > T:
                                    break
                                e9 = -(eta[0] * eta[3] ** 2 * e7 + eta[2] * e6 ** 2 * e8) / e5
                                eta[8] = e9
                                if not tw.O[9].contains(e9):
                                    continue
                                eta = tuple(eta)
                                if check_coprime:
                                    ok, _ = membership(eta, tw, "nicer")
                                    if not ok:
                                        continue
                                yield TorsorPoint(eta, tw)


# ---------------------------------------------------------------------------
# kernel driver


def _den_scale(field: FieldParams, I: FracIdeal) -> int:
    return I.den if field.d == 0 else I.den * I.den


def kernel_spec(field: FieldParams, twist: TwistData, B: Fraction) -> dict:
    """Integer data for the compiled/pure torsor kernel of one twist."""
    i = twist.boundary
    t, n = field.trace, field.nrm
    T = Fraction(twist.u) * B
    order = _loop_vars(i)
    mins = _min_norms(twist)
    caps = _caps(i, T, mins)
    D = {j: twist.O[j].den for j in range(1, 10)}
    lists = {}
    for j in order:
        O = twist.O[j]
        X = (caps[j] * _den_scale(field, O)).__floor__()
        Lconj = O.conj()
        NL = O.a * O.c
        g1, g2 = (Lconj.a, 0), (Lconj.b, Lconj.c)
        rows = []
        for idx, (p, q, nu) in enumerate(lattice_points(field, O.hnf, X)):
            v1 = ((p * g1[0] - n * q * g1[1]) , (p * g1[1] + q * g1[0] + t * q * g1[1]))
            v2 = ((p * g2[0] - n * q * g2[1]) , (p * g2[1] + q * g2[0] + t * q * g2[1]))
            Ia, Ib, Ic = kernels.python._hnf(((v1[0] // NL, v1[1] // NL), (v2[0] // NL, v2[1] // NL)))
            rows.append((p, q, nu, Ia, Ib, Ic, Ia * Ic, idx))
        lists[j] = rows
    alive = all(lists[j] for j in order)
    nu_min = {j: (lists[j][0][2] if lists[j] else 1) for j in order}
    s = {j: _den_scale(field, twist.O[j]) for j in order}
    Tn, Td = T.numerator, T.denominator
    mons = geometry.HEIGHT_EXPONENTS[i]
    Q = []
    Emat = []
    for exps in mons:
        R = Tn
        for j in order:
            R *= s[j] ** exps[j - 1]
        row_q, row_e = [], []
        for d, j in enumerate(order):
            pad = Td
            for j2 in order[d + 1:]:
                pad *= nu_min[j2] ** exps[j2 - 1]
            row_q.append(R // pad)
            row_e.append(exps[j - 1])
        Q.append(row_q)
        Emat.append(row_e)
    pos = {j: d for d, j in enumerate(order)}
    pairs = [[pos[j2] for j2 in order[:d] if frozenset((j, j2)) in COPRIME] for d, j in enumerate(order)]
    pairs9 = [pos[j] for j in order if frozenset((j, 9)) in COPRIME]
    units = [(u.a, u.b) for u in field.units]
    if i == 1:
        A = units
    else:
        A = []
        for u1 in field.units:
            for u4 in field.units:
                w = u1 * u4 * u4
                A.append((w.a, w.b))
    C = units
    D4 = D[4]
    K1 = D[6] ** 2 * D[8]
    K2 = D4 ** 2 * D[7]
    K3 = D[5] * D[9]
    Dv = D4 ** 2 * D[7] * D[6] ** 2 * D[8]
    L9 = twist.O[9]
    L9c = L9.conj()
    spec = {
        "t": t, "n": n, "order": order, "lists": lists, "Q": Q, "E": Emat,
        "pairs": pairs, "pairs9": pairs9, "A": A, "C": C, "pos": pos,
        "K1": K1, "K2": K2, "K3": K3, "Dv": Dv,
        "L9": L9.hnf, "L9conj": ((L9c.a, 0), (L9c.b, L9c.c)), "NL9": L9.a * L9.c,
        "alive": alive,
    }
    spec["safe64"] = _fits_int64(spec)
    if spec["safe64"]:
        spec["arrays"] = {j: np.array(lists[j], dtype=np.int64).reshape(-1, 8) for j in order}
        spec["Q_array"] = np.array(Q, dtype=np.int64)
        spec["E_array"] = np.array(Emat, dtype=np.int64)
        spec["A_array"] = np.array(A, dtype=np.int64)
        spec["C_array"] = np.array(C, dtype=np.int64)
    return spec


def _fits_int64(spec: dict) -> bool:
    """Conservative size check for the fixed-width kernel."""
    lim = 1 << 62
    if any(q >= lim for row in spec["Q"] for q in row):
        return False
    cm = 1
    num = 1
    for rows in spec["lists"].values():
        for r in rows:
            cm = max(cm, abs(r[0]), abs(r[1]))
            num = max(num, r[2], r[6])
    c = 1 + abs(spec["n"]) + abs(spec["t"])
    K = max(spec["K1"], spec["K2"]) * spec["K3"]
    g = max(abs(x) for v in spec["L9conj"] for x in v)
    bound = 4 * c ** 7 * cm ** 4 * K * max(g, spec["NL9"], 1) * spec["Dv"]
    return bound < lim and num * num < lim


def _iq_torsor_task(d: int, i: int, k: int, B: Fraction, start: int, step: int, impl: str | None) -> int:
    field = make_field(d)
    tw = twists(field, i)[k]
    spec = kernel_spec(field, tw, B)
    kern = kernels.get(impl)
    if kern.IMPL == "cython" and not spec["safe64"]:
        kern = kernels.python
    return kern.iq_torsor(spec, start, step)


def _q_torsor_task(Bf: int, i: int, start: int, step: int, impl: str | None) -> int:
    return kernels.get(impl).q_torsor(Bf, i, start, step)


def count_torsor(field: FieldParams, i: int, B, workers: int | None = None,
                 impl: str | None = None) -> CountResult:
    """N_i(B) as the number of torsor points over all twists divided by omega_K^6."""
    B = _check_args(i, B)
    workers = resolve_workers(workers)
    t0 = time.perf_counter()
    w = field.num_units
    per_twist = []
    if field.is_rational:
        Bf = B.__floor__()
        tasks = [(Bf, i, 1 + k, workers, impl) for k in range(workers)]
        raw = 128 * sum(run_tasks(_q_torsor_task, tasks, workers))
        per_twist.append(raw)
    else:
        raw = 0
        for k in range(len(twists(field, i))):
            tasks = [(field.d, i, k, B, s, workers, impl) for s in range(workers)]
            r = w * sum(run_tasks(_iq_torsor_task, tasks, workers))
            per_twist.append(r)
            raw += r
    if raw % w ** 6:
        raise AssertionError("raw torsor count not divisible by omega_K^6")
    return CountResult(
        field=field.spec, boundary=i, B=B, raw_tuples=raw, count=raw // w ** 6,
        method="torsor", seconds=time.perf_counter() - t0, impl=kernels.get(impl).IMPL,
        per_class=per_twist,
    )


def torsor_points(field: FieldParams, i: int, B, impl: str | None = None) -> Iterator[TorsorPoint]:
    """Every raw torsor point found by the kernel, expanded to full tuples."""
    B = _check_args(i, B)
    kern = kernels.get(impl)
    if field.is_rational:
        yield from _q_points(field, i, B.__floor__(), kern)
        return
    units = field.units
    w = len(units)
    for tw in twists(field, i):
        spec = kernel_spec(field, tw, B)
        k = kern if (kern.IMPL == "python" or spec["safe64"]) else kernels.python
        found: list = []
        k.iq_torsor(spec, 0, 1, found)
        order = spec["order"]
        D = {j: tw.O[j].den for j in range(1, 10)}
        for rec in found:
            idxs, ia, ic, r = rec[:len(order)], rec[-3], rec[-2], rec[-1]
            eta: list = [None] * 9
            for d, j in enumerate(order):
                row = spec["lists"][j][idxs[d]]
                eta[j - 1] = Elem(field, row[0], row[1], D[j])
            if i == 1:
                eta[0] = units[ia]
            else:
                eta[0] = units[ia // w]
                eta[3] = units[ia % w]
            eta[2] = units[ic]
            eta[8] = Elem(field, r[0], r[1], D[9])
            for u2 in units:
                eta[1] = u2
                yield TorsorPoint(tuple(eta), tw)


def _q_points(field: FieldParams, i: int, B: int, kern) -> Iterator[TorsorPoint]:
    tw = twists(field, i)[0]
    found: list = []
    kern.q_torsor(B, i, 1, 1, found)
    E = lambda v: Elem(field, v)  # noqa: E731
    for e4, e5, e6, e7, e8, e9, sigma in found:
        for s1, s2, s4, s5, s6, s7, s8 in product((1, -1), repeat=7):
            s3 = sigma * s1 * s7 * s8
            x4 = s4 * e4
            a = s1 * x4 * x4 * s7 * e7
            b = s3 * e6 * e6 * s8 * e8
            y9 = -(a + b) // (s5 * e5)
            yield TorsorPoint(
                (E(s1), E(s2), E(s3), E(x4), E(s5 * e5), E(s6 * e6), E(s7 * e7), E(s8 * e8), E(y9)), tw,
            )


# ---------------------------------------------------------------------------
# bulk identity checks on every enumerated point

_SIGNS = np.array(list(product((1, -1), repeat=7)), dtype=np.int64)


def check_context(field: FieldParams, twist: TwistData) -> dict:
    """Integer data for :func:`kernels.check_points` on one twist.

    Over Q the squared absolute value is used on both sides, which is
    equivalent because both heights are positive.
    """
    from math import lcm
    i = twist.boundary
    D = [twist.O[j].den for j in range(1, 10)]

    def dprod(e):
        r = 1
        for dj, ej in zip(D, e):
            r *= dj ** ej
        return r

    psi_d = [dprod(e) for e in geometry.PSI_EXPONENTS]
    L = lcm(*psi_d)
    m_d = [dprod(e) for e in geometry.M_EXPONENTS[i]]
    LM = lcm(*m_d)
    hexp = geometry.HEIGHT_EXPONENTS[i]
    hden = [dprod(e) ** 2 for e in hexp]
    target = gcd_target(twist).scale(field.elem(LM))
    if not target.is_integral():
        raise AssertionError("scaled gcd target is not integral")
    u = Fraction(twist.u)
    if field.is_rational:
        target_hnf = (target.a, 0, target.a)
        u = u * u
    else:
        target_hnf = target.hnf
    sub = (0, 1, 2, 3) if i == 1 else (0, 2, 3)
    ctx = {
        "t": field.trace, "n": field.nrm,
        "psi": geometry.PSI_EXPONENTS, "psi_scale": [L // x for x in psi_d],
        "sub": sub, "hexp": hexp, "hden": hden,
        "mexp": geometry.M_EXPONENTS[i], "m_scale": [LM // x for x in m_d],
        "u_num": u.numerator, "u_den": u.denominator, "target": target_hnf,
    }
    ctx["psi_array"] = np.array(ctx["psi"], dtype=np.int64)
    ctx["psi_scale_array"] = np.array(ctx["psi_scale"], dtype=np.int64)
    ctx["sub_array"] = np.array(sub, dtype=np.int64)
    ctx["hexp_array"] = np.array(hexp, dtype=np.int64)
    ctx["hden_array"] = np.array(hden, dtype=np.int64)
    ctx["mexp_array"] = np.array(ctx["mexp"], dtype=np.int64)
    ctx["m_scale_array"] = np.array(ctx["m_scale"], dtype=np.int64)
    return ctx


def _q_rows(recs: np.ndarray) -> np.ndarray:
    """Expand Q kernel records to all 128 signed tuples (numerator rows)."""
    e4, e5, e6, e7, e8, _, sigma = (recs[:, k][:, None] for k in range(7))
    s1, s2, s4, s5, s6, s7, s8 = (_SIGNS[:, k][None, :] for k in range(7))
    s3 = sigma * s1 * s7 * s8
    x4 = s4 * e4
    y9 = -(s1 * x4 * x4 * s7 * e7 + s3 * e6 * e6 * s8 * e8) // (s5 * e5)
    cols = [s1, s2, s3, x4, s5 * e5, s6 * e6, s7 * e7, s8 * e8, y9]
    shape = (recs.shape[0], _SIGNS.shape[0])
    rows = np.zeros(shape + (18,), dtype=np.int64)
    for j, c in enumerate(cols):
        rows[:, :, 2 * j] = np.broadcast_to(c, shape)
    return rows.reshape(-1, 18)


def _iq_rows(field: FieldParams, spec: dict, recs: list) -> np.ndarray:
    order = spec["order"]
    k = len(order)
    units = np.array([(u.a, u.b) for u in field.units], dtype=np.int64)
    w = len(units)
    idx = np.array([r[:k + 2] for r in recs], dtype=np.int64).reshape(-1, k + 2)
    rho = np.array([r[-1] for r in recs], dtype=np.int64).reshape(-1, 2)
    rows = np.zeros((len(recs), 18), dtype=np.int64)
    rows[:, 2] = 1  # eta2 multiplier applied by the checker
    for d, j in enumerate(order):
        arr = np.array(spec["lists"][j], dtype=np.int64).reshape(-1, 8)
        rows[:, 2 * (j - 1)] = arr[idx[:, d], 0]
        rows[:, 2 * (j - 1) + 1] = arr[idx[:, d], 1]
    ia, ic = idx[:, k], idx[:, k + 1]
    if spec["pos"].get(4) is None:
        rows[:, 0:2] = units[ia // w]
        rows[:, 6:8] = units[ia % w]
    else:
        rows[:, 0:2] = units[ia]
    rows[:, 4:6] = units[ic]
    rows[:, 16:18] = rho
    # eta2 slot holds 1; fix the layout (p2, q2) = (1, 0)
    rows[:, 2], rows[:, 3] = 1, 0
    return rows


def _rows_width(rows: np.ndarray, field: FieldParams, ctx: dict) -> int:
    """Integer width the checker needs: 64, 128, or 0 for Python integers.

    Norms are multiplicative and every coefficient of x is at most
    2*sqrt(N(x)), so a norm bound per monomial bounds all intermediates.
    """
    if not len(rows):
        return 64
    t, n = abs(field.trace), abs(field.nrm)
    nb = []
    for j in range(9):
        pm = int(np.abs(rows[:, 2 * j]).max())
        qm = int(np.abs(rows[:, 2 * j + 1]).max())
        nb.append(max(1, pm * pm + t * pm * qm + n * qm * qm))
    nb[1] = max(nb[1], 1)
    W = 1
    for exps, sc in list(zip(ctx["psi"], ctx["psi_scale"])) + list(zip(ctx["mexp"], ctx["m_scale"])):
        b = sc * sc
        for x, e in zip(nb, exps):
            b *= x ** e
        W = max(W, b)
    c = 1 + t + n
    big = max(max(ctx["hden"]), ctx["u_num"], ctx["u_den"])
    if 64 * c * W < (1 << 62) and W * big * big < (1 << 120):
        return 64
    if 64 * c * W < (1 << 120) and W * big * big < (1 << 120):
        return 128
    return 0


def point_blocks(field: FieldParams, i: int, B, impl: str | None = None, chunks: int = 16):
    """Yield (twist, rows, eta2 multipliers) covering every raw torsor point once."""
    B = _check_args(i, B)
    kern = kernels.get(impl)
    if field.is_rational:
        tw = twists(field, i)[0]
        one = np.array([[1, 0]], dtype=np.int64)
        for s in range(chunks):
            recs: list = []
            kern.q_torsor(B.__floor__(), i, 1 + s, chunks, recs)
            arr = np.array(recs, dtype=np.int64).reshape(-1, 7)
            for lo in range(0, len(arr), 2048):
                yield tw, _q_rows(arr[lo:lo + 2048]), one
        return
    units = np.array([(u.a, u.b) for u in field.units], dtype=np.int64)
    for tw in twists(field, i):
        spec = kernel_spec(field, tw, B)
        k = kern if (kern.IMPL == "python" or spec["safe64"]) else kernels.python
        for s in range(chunks):
            recs = []
            k.iq_torsor(spec, s, chunks, recs)
            if recs:
                yield tw, _iq_rows(field, spec, recs), units


def verify_points(field: FieldParams, i: int, B, impl: str | None = None) -> dict:
    """Check height compatibility and the gcd identity on every raw torsor point."""
    kern = kernels.get(impl)
    out = {"checked": 0, "height_fail": 0, "gcd_fail": 0}
    ctxs: dict = {}
    for tw, rows, eta2 in point_blocks(field, i, B, impl):
        ctx = ctxs.get(id(tw))
        if ctx is None:
            ctx = ctxs[id(tw)] = check_context(field, tw)
        if kern.IMPL == "python":
            fn = kern.check_points
        else:
            width = _rows_width(rows, field, ctx)
            fn = {64: kern.check_points, 128: kern.check_points_wide}.get(width, kernels.python.check_points)
        c, h, g = fn(rows, eta2, ctx)
        out["checked"] += c
        out["height_fail"] += h
        out["gcd_fail"] += g
    return out
