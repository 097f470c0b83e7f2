"""Pure-Python counting kernels.

Same algorithms and signatures as the compiled module; used when the
extension is unavailable or ``DPCOUNT_PURE=1`` is set.  All arithmetic is
on plain integers.  Elements of the quadratic order are pairs ``(p, q)``
meaning ``p + q*omega`` with ``omega**2 = t*omega - n``.
"""

from __future__ import annotations

from math import gcd

IMPL = "python"


# ---------------------------------------------------------------------------
# rational field


def q_direct(T: int, boundary: int, start: int, step: int) -> int:
    """Tuples with x0 > 0 and |x2| in start, start+step, ... <= T."""
    count = 0
    for ax2 in range(start, T + 1, step):
        for x2 in (ax2, -ax2):
            for x0 in range(1, T + 1):
                g02 = gcd(x0, ax2)
                s = x0 // g02
                for ax3 in range(s, T + 1, s):
                    for x3 in (ax3, -ax3):
                        x1 = x2 * x3 // x0
                        if boundary == 1 and abs(x1) > T:
                            continue
                        num = (x0 + x1) * x3
                        if num % x2:
                            continue
                        if boundary == 1:
                            if gcd(gcd(g02, ax3), x1) != 1:
                                continue
                        elif gcd(g02, ax3) != 1:
                            continue
                        count += 1
    return count


def q_torsor(B: int, boundary: int, start: int, step: int, collect: list | None = None) -> int:
    """Positive torsor tuples (with the relative sign) for eta5 in start, start+step, ...

    The raw count is 128 times the return value.  If ``collect`` is a list,
    tuples ``(e4, e5, e6, e7, e8, e9, sigma)`` are appended.
    """
    total = 0
    e5 = start
    while e5 * e5 <= B:
        if boundary == 1:
            total += _q_torsor1_fixed5(B, e5, collect)
        else:
            total += _q_torsor2_fixed5(B, e5, collect)
        e5 += step
    return total


def _leaf(a, b0, e5, cap8, e4, e6, inv, e7, collect):
    n = 0
    for sigma in (1, -1):
        r = (-sigma * a * inv) % e5
        if r == 0:
            r = e5
        for e8 in range(r, cap8 + 1, e5):
            if e4 != 1 and gcd(e8, e4) != 1:
                continue
            e9 = abs(a + sigma * b0 * e8) // e5
            if gcd(e9, e4) != 1 or gcd(e9, e6) != 1:
                continue
            n += 1
            if collect is not None:
                collect.append((e4, e5, e6, e7, e8, e9, sigma))
    return n


def _q_torsor1_fixed5(B: int, e5: int, collect) -> int:
    n = 0
    e4 = 1
    while e4 * e4 * e5 <= B and e4 * e5 * e5 <= B:
        if gcd(e4, e5) == 1:
            e6 = 1
            while e4 * e5 * e5 * e6 <= B and e5 * e6 * e6 <= B and e4 * e6 <= B:
                if gcd(e6, e4 * e5) == 1:
                    b0 = e6 * e6
                    inv = pow(b0, -1, e5) if e5 > 1 else 0
                    e7 = 1
                    while e4 * e4 * e5 * e7 <= B and e4 * e6 * e7 <= B:
                        if gcd(e7, e5 * e6) == 1:
                            cap8 = min(B // (e5 * b0), B // (e4 * e6 * e7))
                            n += _leaf(e4 * e4 * e7, b0, e5, cap8, e4, e6, inv, e7, collect)
                        e7 += 1
                e6 += 1
        e4 += 1
    return n


def _q_torsor2_fixed5(B: int, e5: int, collect) -> int:
    n = 0
    e6 = 1
    while e5 * e5 * e6 <= B:
        if gcd(e5, e6) == 1:
            b0 = e6 * e6
            inv = pow(b0, -1, e5) if e5 > 1 else 0
            e7 = 1
            while e5 * e7 <= B and e6 * e7 <= B:
                if gcd(e7, e5 * e6) == 1:
                    cap8 = B // (e6 * e7)
                    n += _leaf(e7, b0, e5, cap8, 1, e6, inv, e7, collect)
                e7 += 1
        e6 += 1
    return n


# ---------------------------------------------------------------------------
# imaginary quadratic fields


def _hnf_norm(vecs) -> int:
    """a*c of the HNF of the lattice spanned by vecs (0 if rank < 2)."""
    a, _, c = _hnf(vecs)
    return a * c


def _hnf(vecs) -> tuple[int, int, int]:
    a = b = c = 0
    for x, y in vecs:
        if y == 0:
            a = gcd(a, x)
            continue
        if c == 0:
            if y < 0:
                x, y = -x, -y
            b, c = x, y
            continue
        old_r, r, old_s, s = c, y, 1, 0
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s = s, old_s - q * s
        g = old_r
        u = old_s
        if g < 0:
            g, u = -g, -u
        v = (g - u * c) // y
        nb = u * b + v * x
        z = x * (c // g) - b * (y // g)
        a = gcd(a, z)
        b, c = nb, g
    if a == 0:
        return 0, 0, 0
    return a, b % a, c


def _ideal_norm(t: int, n: int, elems) -> int:
    vecs = []
    for p, q in elems:
        vecs.append((p, q))
        vecs.append((-n * q, p + t * q))
    return _hnf_norm(vecs)


def _in_lattice(a: int, b: int, c: int, p: int, q: int) -> bool:
    if q % c:
        return False
    return (p - (q // c) * b) % a == 0


def _coprime(I, J) -> bool:
    if gcd(I[3], J[3]) == 1:
        return True
    return _hnf_norm(((I[0], 0), (I[1], I[2]), (J[0], 0), (J[1], J[2]))) == 1


def iq_direct(t: int, n: int, pts, hnf, NP: int, X: int, boundary: int, start: int, step: int) -> int:
    """Raw tuples (x0..x4) with x0, x2, x3 in pts and derived x1, x4 in the lattice.

    ``pts`` lists (p, q, N) for all nonzero x in P with N(x) <= X; ``hnf`` is
    the lattice of P and NP its norm.  The outer x2 loop runs over indices
    start, start+step, ...
    """
    A, Bh, C = hnf
    count = 0
    L = len(pts)
    for k2 in range(start, L, step):
        p2, q2, N2 = pts[k2]
        c2p, c2q = p2 + t * q2, -q2
        for p0, q0, N0 in pts:
            c0p, c0q = p0 + t * q0, -q0
            for p3, q3, N3 in pts:
                # x2*x3
                qq = q2 * q3
                mp = p2 * p3 - n * qq
                mq = p2 * q3 + q2 * p3 + t * qq
                # times conj(x0)
                qq = mq * c0q
                np_ = mp * c0p - n * qq
                nq = mp * c0q + mq * c0p + t * qq
                if np_ % N0 or nq % N0:
                    continue
                p1, q1 = np_ // N0, nq // N0
                if not _in_lattice(A, Bh, C, p1, q1):
                    continue
                if boundary == 1 and p1 * p1 + t * p1 * q1 + n * q1 * q1 > X:
                    continue
                # x4 = -(x0+x1)*x3/x2
                sp, sq = p0 + p1, q0 + q1
                qq = sq * q3
                mp = sp * p3 - n * qq
                mq = sp * q3 + sq * p3 + t * qq
                qq = mq * c2q
                np_ = mp * c2p - n * qq
                nq = mp * c2q + mq * c2p + t * qq
                if np_ % N2 or nq % N2:
                    continue
                p4, q4 = -np_ // N2, -nq // N2
                if not _in_lattice(A, Bh, C, p4, q4):
                    continue
                if boundary == 1:
                    g = _ideal_norm(t, n, ((p0, q0), (p1, q1), (p2, q2), (p3, q3)))
                else:
                    g = _ideal_norm(t, n, ((p0, q0), (p2, q2), (p3, q3)))
                if g != NP:
                    continue
                count += 1
    return count


def _mul(t, n, x, y):
    qq = x[1] * y[1]
    return x[0] * y[0] - n * qq, x[0] * y[1] + x[1] * y[0] + t * qq


def iq_torsor(spec: dict, start: int, step: int, collect: list | None = None) -> int:
    """Torsor tuples of one twist, summed over the unit coefficient lists.

    ``spec`` is built by :func:`dpcount.torsor.kernel_spec`.  Each variable
    list holds tuples (p, q, nu, Ia, Ib, Ic, INorm) sorted by nu, where
    (p + q*omega)/D is the torsor coordinate, nu = N(p + q*omega), and
    (Ia, Ib, Ic) is the HNF of the derived ideal with norm INorm.
    The return value counts (eta4.., unit choices) without the free eta2.
    """
    t, n = spec["t"], spec["n"]
    order = spec["order"]           # variable labels in loop order, e.g. (5, 4, 6, 7, 8)
    lists = [spec["lists"][v] for v in order]
    Q = spec["Q"]                   # Q[m][d]: bound for monomial m after depth d
    E = spec["E"]                   # E[m][d]: exponent of the depth-d variable in monomial m
    pairs = spec["pairs"]           # pairs[d]: earlier depths that must be coprime to depth d
    pairs9 = spec["pairs9"]         # depths that must be coprime to eta9
    k = len(order)
    nm = len(Q)
    total = 0

    chosen = [None] * k
    prods = [[1] * (k + 1) for _ in range(nm)]

    def rec(d: int) -> None:
        nonlocal total
        lst = lists[d]
        for idx in range(start if d == 0 else 0, len(lst), step if d == 0 else 1):
            el = lst[idx]
            nu = el[2]
            ok = True
            for m in range(nm):
                e = E[m][d]
                if e:
                    v = prods[m][d] * (nu if e == 1 else nu * nu)
                    if v > Q[m][d]:
                        ok = False
                        break
                    prods[m][d + 1] = v
                else:
                    prods[m][d + 1] = prods[m][d]
            if not ok:
                break
            good = True
            for d2 in pairs[d]:
                if not _coprime(el[3:], chosen[d2][3:]):
                    good = False
                    break
            if not good:
                continue
            chosen[d] = el
            if d + 1 < k:
                rec(d + 1)
            else:
                total += _torsor_leaf(spec, chosen, t, n, pairs9, collect)

    if k and spec["alive"]:
        rec(0)
    return total


def _torsor_leaf(spec, chosen, t, n, pairs9, collect) -> int:
    pos = spec["pos"]
    e4 = chosen[pos[4]] if 4 in pos else None
    e5 = chosen[pos[5]]
    e6 = chosen[pos[6]]
    e7 = chosen[pos[7]]
    e8 = chosen[pos[8]]
    K1, K2, K3, Dv = spec["K1"], spec["K2"], spec["K3"], spec["Dv"]
    a9, b9, c9 = spec["L9"]
    g1, g2 = spec["L9conj"]
    NL9 = spec["NL9"]
    lam4 = (e4[0], e4[1]) if e4 is not None else (1, 0)
    left = _mul(t, n, _mul(t, n, lam4, lam4), (e7[0], e7[1]))
    left = (left[0] * K1, left[1] * K1)
    right = _mul(t, n, _mul(t, n, (e6[0], e6[1]), (e6[0], e6[1])), (e8[0], e8[1]))
    right = (right[0] * K2, right[1] * K2)
    c5 = (e5[0] + t * e5[1], -e5[1])
    den = e5[2] * Dv
    coprime_with_zero = all(chosen[d][6] == 1 for d in pairs9)
    cnt = 0
    for ia, ua in enumerate(spec["A"]):
        la = _mul(t, n, ua, left)
        for ic, uc in enumerate(spec["C"]):
            lc = _mul(t, n, uc, right)
            s = (la[0] + lc[0], la[1] + lc[1])
            if s[0] == 0 and s[1] == 0:
                if coprime_with_zero:
                    cnt += 1
                    if collect is not None:
                        collect.append(tuple(x[7] for x in chosen) + (ia, ic, (0, 0)))
                continue
            num = _mul(t, n, (s[0] * K3, s[1] * K3), c5)
            if num[0] % den or num[1] % den:
                continue
            r = (-num[0] // den, -num[1] // den)
            if not _in_lattice(a9, b9, c9, r[0], r[1]):
                continue
            v1 = _mul(t, n, r, g1)
            v2 = _mul(t, n, r, g2)
            I9 = _hnf(((v1[0] // NL9, v1[1] // NL9), (v2[0] // NL9, v2[1] // NL9)))
            N9 = I9[0] * I9[2]
            I9 = I9 + (N9,)
            if all(_coprime(chosen[d][3:], I9) for d in pairs9):
                cnt += 1
                if collect is not None:
                    collect.append(tuple(x[7] for x in chosen) + (ia, ic, r))
    return cnt


# ---------------------------------------------------------------------------
# point checks


def _ideal_hnf(t: int, n: int, elems) -> tuple[int, int, int]:
    vecs = []
    for p, q in elems:
        vecs.append((p, q))
        vecs.append((-n * q, p + t * q))
    return _hnf(vecs)


def _monomial(t, n, lam, exps):
    r = (1, 0)
    for x, e in zip(lam, exps):
        for _ in range(e):
            r = _mul(t, n, r, x)
    return r


def check_points(rows, eta2, ctx: dict) -> tuple[int, int, int]:
    """Height compatibility and gcd identity on expanded torsor points.

    ``rows`` holds numerators (p1, q1, ..., p9, q9) with the twist's fixed
    denominators; each row is checked once per multiplier in ``eta2``
    applied to eta2.  Returns (checked, height failures, gcd failures).
    ``ctx`` is built by :func:`dpcount.torsor.check_context`.
    """
    t, n = ctx["t"], ctx["n"]
    psi, psi_sc = ctx["psi"], ctx["psi_scale"]
    sub = ctx["sub"]
    hexp, hden = ctx["hexp"], ctx["hden"]
    mexp, msc = ctx["mexp"], ctx["m_scale"]
    un, ud = ctx["u_num"], ctx["u_den"]
    target = tuple(ctx["target"])
    checked = hfail = gfail = 0
    for row in rows:
        base = [(int(row[2 * j]), int(row[2 * j + 1])) for j in range(9)]
        for w in eta2:
            lam = list(base)
            lam[1] = _mul(t, n, base[1], (int(w[0]), int(w[1])))
            checked += 1
            xs = []
            for e, s in zip(psi, psi_sc):
                p, q = _monomial(t, n, lam, e)
                xs.append((p * s, q * s))
            xsub = [xs[k] for k in sub]
            norms = [p * p + t * p * q + n * q * q for p, q in xsub]
            if norms[0] == 0 or xs[3] == (0, 0):
                hfail += 1
            else:
                a, _, c = _ideal_hnf(t, n, xsub)
                H = max(norms) // (a * c)
                bn, bd = 0, 1
                for e, den in zip(hexp, hden):
                    p, q = _monomial(t, n, lam, e)
                    nu = p * p + t * p * q + n * q * q
                    if nu * bd > bn * den:
                        bn, bd = nu, den
                if bn * ud != un * H * bd:
                    hfail += 1
            ys = []
            for e, s in zip(mexp, msc):
                p, q = _monomial(t, n, lam, e)
                ys.append((p * s, q * s))
            if _ideal_hnf(t, n, ys) != target:
                gfail += 1
    return checked, hfail, gfail
