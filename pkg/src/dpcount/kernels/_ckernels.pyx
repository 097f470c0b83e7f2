# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled counting kernels; mirrors _pykernels line for line."""

from libc.stdlib cimport llabs

IMPL = "cython"

ctypedef long long i64


cdef inline i64 _gcd(i64 a, i64 b) noexcept nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef inline i64 _fmod(i64 a, i64 m) noexcept nogil:
    cdef i64 r = a % m
    if r < 0:
        r += m
    return r


cdef i64 _inv_mod(i64 a, i64 m) noexcept nogil:
    # inverse of a modulo m, gcd(a, m) = 1
    cdef i64 old_r = _fmod(a, m), r = m, old_s = 1, s = 0, q, tmp
    while r:
        q = old_r // r
        tmp = old_r - q * r
        old_r = r
        r = tmp
        tmp = old_s - q * s
        old_s = s
        s = tmp
    return _fmod(old_s, m)


# ---------------------------------------------------------------------------
# rational field


def q_direct(i64 T, int boundary, i64 start, i64 step):
    cdef i64 count = 0, ax2, x2, x0, g02, s, ax3, x3, x1, num, sg2, sg3
    with nogil:
        ax2 = start
        while ax2 <= T:
            for sg2 in range(2):
                x2 = ax2 if sg2 == 0 else -ax2
                for x0 in range(1, T + 1):
                    g02 = _gcd(x0, ax2)
                    s = x0 // g02
                    ax3 = s
                    while ax3 <= T:
                        for sg3 in range(2):
                            x3 = ax3 if sg3 == 0 else -ax3
                            x1 = x2 * x3 // x0
                            if boundary == 1 and llabs(x1) > T:
                                continue
                            num = (x0 + x1) * x3
                            if num % x2:
                                continue
                            if boundary == 1:
                                if _gcd(_gcd(g02, ax3), x1) != 1:
                                    continue
                            elif _gcd(g02, ax3) != 1:
                                continue
                            count += 1
                        ax3 += s
            ax2 += step
    return count


cdef i64 _progression(i64 a, i64 b0, i64 e5, i64 cap8, i64 e4, i64 e6, i64 inv,
                      i64 e7, object collect):
    cdef i64 n = 0, r, e8, e9, sigma
    cdef int si
    for si in range(2):
        sigma = 1 if si == 0 else -1
        r = _fmod(-sigma * _fmod(a, e5) * inv, e5) if e5 > 1 else 0
        if r == 0:
            r = e5
        e8 = r
        while e8 <= cap8:
            if e4 != 1 and _gcd(e8, e4) != 1:
                e8 += e5
                continue
            e9 = llabs(a + sigma * b0 * e8) // e5
            if _gcd(e9, e4) != 1 or _gcd(e9, e6) != 1:
                e8 += e5
                continue
            n += 1
            if collect is not None:
                collect.append((e4, e5, e6, e7, e8, e9, sigma))
            e8 += e5
    return n


def q_torsor(i64 B, int boundary, i64 start, i64 step, collect=None):
    cdef i64 total = 0, e5 = start
    while e5 * e5 <= B:
        if boundary == 1:
            total += _q_torsor1_fixed5(B, e5, collect)
        else:
            total += _q_torsor2_fixed5(B, e5, collect)
        e5 += step
    return total


cdef i64 _q_torsor1_fixed5(i64 B, i64 e5, object collect):
    cdef i64 n = 0, e4, e6, e7, b0, inv, cap8, c1, c2
    e4 = 1
    while e4 * e4 * e5 <= B and e4 * e5 * e5 <= B:
        if _gcd(e4, e5) == 1:
            e6 = 1
            while e4 * e5 * e5 * e6 <= B and e5 * e6 * e6 <= B and e4 * e6 <= B:
                if _gcd(e6, e4 * e5) == 1:
                    b0 = e6 * e6
                    inv = _inv_mod(b0, e5) if e5 > 1 else 0
                    e7 = 1
                    while e4 * e4 * e5 * e7 <= B and e4 * e6 * e7 <= B:
                        if _gcd(e7, e5 * e6) == 1:
                            c1 = B // (e5 * b0)
                            c2 = B // (e4 * e6 * e7)
                            cap8 = c1 if c1 < c2 else c2
                            n += _progression(e4 * e4 * e7, b0, e5, cap8, e4, e6, inv, e7, collect)
                        e7 += 1
                e6 += 1
        e4 += 1
    return n


cdef i64 _q_torsor2_fixed5(i64 B, i64 e5, object collect):
    cdef i64 n = 0, e6, e7, b0, inv, cap8
    e6 = 1
    while e5 * e5 * e6 <= B:
        if _gcd(e5, e6) == 1:
            b0 = e6 * e6
            inv = _inv_mod(b0, e5) if e5 > 1 else 0
            e7 = 1
            while e5 * e7 <= B and e6 * e7 <= B:
                if _gcd(e7, e5 * e6) == 1:
                    cap8 = B // (e6 * e7)
                    n += _progression(e7, b0, e5, cap8, 1, e6, inv, e7, collect)
                e7 += 1
        e6 += 1
    return n


# ---------------------------------------------------------------------------
# imaginary quadratic fields


cdef struct HNF:
    i64 a
    i64 b
    i64 c


cdef inline void _hnf_add(HNF* h, i64 x, i64 y) noexcept nogil:
    cdef i64 old_r, r, old_s, s, q, tmp, g, u, v, nb, z
    if y == 0:
        h.a = _gcd(h.a, x)
        return
    if h.c == 0:
        if y < 0:
            x = -x
            y = -y
        h.b = x
        h.c = y
        return
    old_r = h.c
    r = y
    old_s = 1
    s = 0
    while r:
        q = old_r // r
        tmp = old_r - q * r
        old_r = r
        r = tmp
        tmp = old_s - q * s
        old_s = s
        s = tmp
    g = old_r
    u = old_s
    if g < 0:
        g = -g
        u = -u
    v = (g - u * h.c) // y
    nb = u * h.b + v * x
    z = x * (h.c // g) - h.b * (y // g)
    h.a = _gcd(h.a, z)
    h.b = nb
    h.c = g
    if h.a:
        h.b = _fmod(h.b, h.a)


cdef inline void _hnf_init(HNF* h) noexcept nogil:
    h.a = 0
    h.b = 0
    h.c = 0


cdef inline void _hnf_add_elem(HNF* h, i64 t, i64 n, i64 p, i64 q) noexcept nogil:
    _hnf_add(h, p, q)
    _hnf_add(h, -n * q, p + t * q)


cdef inline bint _in_lattice(i64 a, i64 b, i64 c, i64 p, i64 q) noexcept nogil:
    if q % c:
        return False
    return (p - (q // c) * b) % a == 0


cdef inline bint _coprime(i64 a1, i64 b1, i64 c1, i64 n1, i64 a2, i64 b2, i64 c2, i64 n2) noexcept nogil:
    cdef HNF h
    if _gcd(n1, n2) == 1:
        return True
    _hnf_init(&h)
    _hnf_add(&h, a1, 0)
    _hnf_add(&h, b1, c1)
    _hnf_add(&h, a2, 0)
    _hnf_add(&h, b2, c2)
    return h.a * h.c == 1


def iq_direct(i64 t, i64 n, pts_in, hnf, i64 NP, i64 X, int boundary, i64 start, i64 step):
    cdef i64[:, :] pts = pts_in
    cdef i64 A = hnf[0], Bh = hnf[1], C = hnf[2]
    cdef Py_ssize_t L = pts.shape[0], k0, k2, k3
    cdef i64 count = 0, p0, q0, N0, p2, q2, N2, p3, q3, c0p, c0q, c2p, c2q
    cdef i64 qq, mp, mq, np_, nq, p1, q1, p4, q4, sp, sq
    cdef HNF h
    with nogil:
        k2 = start
        while k2 < L:
            p2 = pts[k2, 0]
            q2 = pts[k2, 1]
            N2 = pts[k2, 2]
            c2p = p2 + t * q2
            c2q = -q2
            for k0 in range(L):
                p0 = pts[k0, 0]
                q0 = pts[k0, 1]
                N0 = pts[k0, 2]
                c0p = p0 + t * q0
                c0q = -q0
                for k3 in range(L):
                    p3 = pts[k3, 0]
                    q3 = pts[k3, 1]
                    qq = q2 * q3
                    mp = p2 * p3 - n * qq
                    mq = p2 * q3 + q2 * p3 + t * qq
                    qq = mq * c0q
                    np_ = mp * c0p - n * qq
                    nq = mp * c0q + mq * c0p + t * qq
                    if np_ % N0 or nq % N0:
                        continue
                    p1 = np_ // N0
                    q1 = nq // N0
                    if not _in_lattice(A, Bh, C, p1, q1):
                        continue
                    if boundary == 1 and p1 * p1 + t * p1 * q1 + n * q1 * q1 > X:
                        continue
                    sp = p0 + p1
                    sq = q0 + q1
                    qq = sq * q3
                    mp = sp * p3 - n * qq
                    mq = sp * q3 + sq * p3 + t * qq
                    qq = mq * c2q
                    np_ = mp * c2p - n * qq
                    nq = mp * c2q + mq * c2p + t * qq
                    if np_ % N2 or nq % N2:
                        continue
                    p4 = -np_ // N2
                    q4 = -nq // N2
                    if not _in_lattice(A, Bh, C, p4, q4):
                        continue
                    _hnf_init(&h)
                    _hnf_add_elem(&h, t, n, p0, q0)
                    _hnf_add_elem(&h, t, n, p2, q2)
                    _hnf_add_elem(&h, t, n, p3, q3)
                    if boundary == 1:
                        _hnf_add_elem(&h, t, n, p1, q1)
                    if h.a * h.c != NP:
                        continue
                    count += 1
            k2 += step
    return count


cdef inline void _mul(i64 t, i64 n, i64 xp, i64 xq, i64 yp, i64 yq, i64* rp, i64* rq) noexcept nogil:
    cdef i64 qq = xq * yq
    rp[0] = xp * yp - n * qq
    rq[0] = xp * yq + xq * yp + t * qq


cdef class _TorsorCtx:
    cdef i64 t, n
    cdef int k, nm
    cdef list arrs
    cdef i64[:, :] Q
    cdef i64[:, :] E
    cdef list pairs
    cdef list pairs9
    cdef i64[:, :] A
    cdef i64[:, :] C
    cdef i64 K1, K2, K3, Dv, a9, b9, c9, g1p, g1q, g2p, g2q, NL9
    cdef int pos4, pos5, pos6, pos7, pos8
    cdef i64 start, step
    cdef i64 total
    cdef object collect
    cdef i64[:, :] prods
    cdef i64[:] chosen

    def __init__(self, spec, start, step, collect):
        self.t = spec["t"]
        self.n = spec["n"]
        order = spec["order"]
        self.k = len(order)
        self.arrs = [spec["arrays"][v] for v in order]
        self.Q = spec["Q_array"]
        self.E = spec["E_array"]
        self.nm = self.Q.shape[0]
        self.pairs = [list(p) for p in spec["pairs"]]
        self.pairs9 = list(spec["pairs9"])
        self.A = spec["A_array"]
        self.C = spec["C_array"]
        self.K1 = spec["K1"]
        self.K2 = spec["K2"]
        self.K3 = spec["K3"]
        self.Dv = spec["Dv"]
        self.a9, self.b9, self.c9 = spec["L9"]
        (self.g1p, self.g1q), (self.g2p, self.g2q) = spec["L9conj"]
        self.NL9 = spec["NL9"]
        pos = spec["pos"]
        self.pos4 = pos.get(4, -1)
        self.pos5 = pos[5]
        self.pos6 = pos[6]
        self.pos7 = pos[7]
        self.pos8 = pos[8]
        self.start = start
        self.step = step
        self.total = 0
        self.collect = collect
        import numpy as np
        self.prods = np.ones((self.nm, self.k + 1), dtype=np.int64)
        self.chosen = np.zeros(self.k, dtype=np.int64)

    cdef void rec(self, int d):
        cdef i64[:, :] lst = self.arrs[d]
        cdef Py_ssize_t idx, L = lst.shape[0], st, sp
        cdef i64 nu, e, v, lim
        cdef int m, j, d2
        cdef bint ok, good
        cdef list pr = self.pairs[d]
        cdef i64[:, :] other
        st = self.start if d == 0 else 0
        sp = self.step if d == 0 else 1
        idx = st
        while idx < L:
            nu = lst[idx, 2]
            ok = True
            for m in range(self.nm):
                e = self.E[m, d]
                if e:
                    lim = self.Q[m, d] // self.prods[m, d]
                    v = nu if e == 1 else nu * nu
                    if v > lim:
                        ok = False
                        break
                    self.prods[m, d + 1] = self.prods[m, d] * v
                else:
                    self.prods[m, d + 1] = self.prods[m, d]
            if not ok:
                break
            good = True
            for j in range(len(pr)):
                d2 = pr[j]
                other = self.arrs[d2]
                if not _coprime(lst[idx, 3], lst[idx, 4], lst[idx, 5], lst[idx, 6],
                                other[self.chosen[d2], 3], other[self.chosen[d2], 4],
                                other[self.chosen[d2], 5], other[self.chosen[d2], 6]):
                    good = False
                    break
            if good:
                self.chosen[d] = idx
                if d + 1 < self.k:
                    self.rec(d + 1)
                else:
                    self.total += self.leaf()
            idx += sp

    cdef i64 leaf(self):
        cdef i64 t = self.t, n = self.n
        cdef i64 l4p = 1, l4q = 0, xp, xq, yp, yq, lp, lq, rp_, rq_, ap, aq, cp, cq
        cdef i64 sp, sq, np_, nq, den, r0, r1, c5p, c5q, v1p, v1q, v2p, v2q
        cdef i64[:, :] a4
        cdef i64[:, :] a5 = self.arrs[self.pos5]
        cdef i64[:, :] a6 = self.arrs[self.pos6]
        cdef i64[:, :] a7 = self.arrs[self.pos7]
        cdef i64[:, :] a8 = self.arrs[self.pos8]
        cdef Py_ssize_t j5 = self.chosen[self.pos5], j6 = self.chosen[self.pos6]
        cdef Py_ssize_t j7 = self.chosen[self.pos7], j8 = self.chosen[self.pos8]
        cdef Py_ssize_t ia, ic, jj
        cdef i64 cnt = 0, N9
        cdef bint zero_ok = True, ok
        cdef HNF h
        cdef int d, k
        cdef i64[:, :] arr
        if self.pos4 >= 0:
            a4 = self.arrs[self.pos4]
            l4p = a4[self.chosen[self.pos4], 0]
            l4q = a4[self.chosen[self.pos4], 1]
        for k in range(len(self.pairs9)):
            d = self.pairs9[k]
            arr = self.arrs[d]
            if arr[self.chosen[d], 6] != 1:
                zero_ok = False
        _mul(t, n, l4p, l4q, l4p, l4q, &xp, &xq)
        _mul(t, n, xp, xq, a7[j7, 0], a7[j7, 1], &lp, &lq)
        lp *= self.K1
        lq *= self.K1
        _mul(t, n, a6[j6, 0], a6[j6, 1], a6[j6, 0], a6[j6, 1], &yp, &yq)
        _mul(t, n, yp, yq, a8[j8, 0], a8[j8, 1], &rp_, &rq_)
        rp_ *= self.K2
        rq_ *= self.K2
        c5p = a5[j5, 0] + t * a5[j5, 1]
        c5q = -a5[j5, 1]
        den = a5[j5, 2] * self.Dv
        for ia in range(self.A.shape[0]):
            _mul(t, n, self.A[ia, 0], self.A[ia, 1], lp, lq, &ap, &aq)
            for ic in range(self.C.shape[0]):
                _mul(t, n, self.C[ic, 0], self.C[ic, 1], rp_, rq_, &cp, &cq)
                sp = ap + cp
                sq = aq + cq
                if sp == 0 and sq == 0:
                    if zero_ok:
                        cnt += 1
                        if self.collect is not None:
                            self.collect.append(tuple(int(self.chosen[jj]) for jj in range(self.k))
                                                + (int(ia), int(ic), (0, 0)))
                    continue
                _mul(t, n, sp * self.K3, sq * self.K3, c5p, c5q, &np_, &nq)
                if np_ % den or nq % den:
                    continue
                r0 = -np_ // den
                r1 = -nq // den
                if not _in_lattice(self.a9, self.b9, self.c9, r0, r1):
                    continue
                _mul(t, n, r0, r1, self.g1p, self.g1q, &v1p, &v1q)
                _mul(t, n, r0, r1, self.g2p, self.g2q, &v2p, &v2q)
                _hnf_init(&h)
                _hnf_add(&h, v1p // self.NL9, v1q // self.NL9)
                _hnf_add(&h, v2p // self.NL9, v2q // self.NL9)
                h.b = _fmod(h.b, h.a)
                N9 = h.a * h.c
                ok = True
                for k in range(len(self.pairs9)):
                    d = self.pairs9[k]
                    arr = self.arrs[d]
                    if not _coprime(arr[self.chosen[d], 3], arr[self.chosen[d], 4],
                                    arr[self.chosen[d], 5], arr[self.chosen[d], 6],
                                    h.a, h.b, h.c, N9):
                        ok = False
                        break
                if ok:
                    cnt += 1
                    if self.collect is not None:
                        self.collect.append(tuple(int(self.chosen[jj]) for jj in range(self.k))
                                            + (int(ia), int(ic), (int(r0), int(r1))))
        return cnt


def iq_torsor(spec, start, step, collect=None):
    if not spec["alive"] or not spec["order"]:
        return 0
    ctx = _TorsorCtx(spec, start, step, collect)
    ctx.rec(0)
    return ctx.total


# ---------------------------------------------------------------------------
# point checks (128-bit intermediates)

cdef extern from *:
    ctypedef long long i128 "__int128"


cdef inline i128 _abs128(i128 x) noexcept nogil:
    return -x if x < 0 else x


cdef inline i128 _fdiv128(i128 a, i128 b) noexcept nogil:
    cdef i128 q = a / b
    if (a % b != 0) and ((a < 0) != (b < 0)):
        q -= 1
    return q


cdef inline i128 _gcd128(i128 a, i128 b) noexcept nogil:
    cdef i128 r
    a = _abs128(a)
    b = _abs128(b)
    while b:
        r = a % b
        a = b
        b = r
    return a


cdef struct HNF128:
    i128 a
    i128 b
    i128 c


cdef inline void _h128_add(HNF128* h, i128 x, i128 y) noexcept nogil:
    cdef i128 old_r, r, old_s, s, q, tmp, g, u, v
    if y == 0:
        h.a = _gcd128(h.a, x)
        return
    if h.c == 0:
        if y < 0:
            x = -x
            y = -y
        h.b = x
        h.c = y
        return
    old_r = h.c
    r = y
    old_s = 1
    s = 0
    while r:
        q = _fdiv128(old_r, r)
        tmp = old_r - q * r
        old_r = r
        r = tmp
        tmp = old_s - q * s
        old_s = s
        s = tmp
    g = old_r
    u = old_s
    if g < 0:
        g = -g
        u = -u
    v = (g - u * h.c) / y
    tmp = u * h.b + v * x
    h.a = _gcd128(h.a, x * (h.c / g) - h.b * (y / g))
    h.b = tmp
    h.c = g
    if h.a:
        # keep entries small
        h.b = h.b - _fdiv128(h.b, h.a) * h.a


cdef inline void _h128_elem(HNF128* h, i128 t, i128 n, i128 p, i128 q) noexcept nogil:
    _h128_add(h, p, q)
    _h128_add(h, -n * q, p + t * q)


cdef inline void _mul128(i128 t, i128 n, i128 xp, i128 xq, i128 yp, i128 yq, i128* rp, i128* rq) noexcept nogil:
    cdef i128 qq = xq * yq
    rp[0] = xp * yp - n * qq
    rq[0] = xp * yq + xq * yp + t * qq


cdef inline void _mono128(i128 t, i128 n, i128* lp, i128* lq, i64* e, i128* rp, i128* rq) noexcept nogil:
    cdef i128 ap = 1, aq = 0, bp, bq
    cdef int j, k
    for j in range(9):
        for k in range(e[j]):
            _mul128(t, n, ap, aq, lp[j], lq[j], &bp, &bq)
            ap = bp
            aq = bq
    rp[0] = ap
    rq[0] = aq


cdef inline void _mono64(i64 t, i64 n, i64* lp, i64* lq, i64* e, i64* rp, i64* rq) noexcept nogil:
    cdef i64 ap = 1, aq = 0, bp, bq
    cdef int j, k
    for j in range(9):
        for k in range(e[j]):
            _mul(t, n, ap, aq, lp[j], lq[j], &bp, &bq)
            ap = bp
            aq = bq
    rp[0] = ap
    rq[0] = aq


def check_points(rows_in, eta2_in, ctx):
    """Height compatibility and gcd identity; caller guarantees 64-bit safety."""
    cdef i64[:, :] rows = rows_in
    cdef i64[:, :] eta2 = eta2_in
    cdef i64[:, ::1] psi = ctx["psi_array"]
    cdef i64[:] psi_sc = ctx["psi_scale_array"]
    cdef i64[:] sub = ctx["sub_array"]
    cdef i64[:, ::1] hexp = ctx["hexp_array"]
    cdef i64[:] hden = ctx["hden_array"]
    cdef i64[:, ::1] mexp = ctx["mexp_array"]
    cdef i64[:] msc = ctx["m_scale_array"]
    cdef i64 t = ctx["t"], n = ctx["n"]
    cdef i128 un = <i64>ctx["u_num"], ud = <i64>ctx["u_den"]
    cdef i64 ta = ctx["target"][0], tb = ctx["target"][1], tc = ctx["target"][2]
    cdef i64 lp[9]
    cdef i64 lq[9]
    cdef i64 xp[5]
    cdef i64 xq[5]
    cdef i64 p, q, nu, mx, H, bn, bd
    cdef HNF h
    cdef Py_ssize_t r, w, k, m
    cdef int j, ns = sub.shape[0]
    cdef i64 checked = 0, hfail = 0, gfail = 0
    with nogil:
        for r in range(rows.shape[0]):
            for w in range(eta2.shape[0]):
                for j in range(9):
                    lp[j] = rows[r, 2 * j]
                    lq[j] = rows[r, 2 * j + 1]
                _mul(t, n, lp[1], lq[1], eta2[w, 0], eta2[w, 1], &p, &q)
                lp[1] = p
                lq[1] = q
                checked += 1
                for k in range(5):
                    _mono64(t, n, lp, lq, &psi[k, 0], &p, &q)
                    xp[k] = p * psi_sc[k]
                    xq[k] = q * psi_sc[k]
                if (xp[0] == 0 and xq[0] == 0) or (xp[3] == 0 and xq[3] == 0):
                    hfail += 1
                else:
                    _hnf_init(&h)
                    mx = 0
                    for j in range(ns):
                        k = sub[j]
                        nu = xp[k] * xp[k] + t * xp[k] * xq[k] + n * xq[k] * xq[k]
                        if nu > mx:
                            mx = nu
                        _hnf_add_elem(&h, t, n, xp[k], xq[k])
                    H = mx // (h.a * h.c)
                    bn = 0
                    bd = 1
                    for m in range(hexp.shape[0]):
                        _mono64(t, n, lp, lq, &hexp[m, 0], &p, &q)
                        nu = p * p + t * p * q + n * q * q
                        if <i128>nu * bd > <i128>bn * hden[m]:
                            bn = nu
                            bd = hden[m]
                    if <i128>bn * ud != un * H * bd:
                        hfail += 1
                _hnf_init(&h)
                for m in range(mexp.shape[0]):
                    _mono64(t, n, lp, lq, &mexp[m, 0], &p, &q)
                    _hnf_add_elem(&h, t, n, p * msc[m], q * msc[m])
                if h.a:
                    h.b = _fmod(h.b, h.a)
                if h.a != ta or h.b != tb or h.c != tc:
                    gfail += 1
    return checked, hfail, gfail


def check_points_wide(rows_in, eta2_in, ctx):
    """check_points with 128-bit intermediates throughout."""
    cdef i64[:, :] rows = rows_in
    cdef i64[:, :] eta2 = eta2_in
    cdef i64[:, ::1] psi = ctx["psi_array"]
    cdef i64[:] psi_sc = ctx["psi_scale_array"]
    cdef i64[:] sub = ctx["sub_array"]
    cdef i64[:, ::1] hexp = ctx["hexp_array"]
    cdef i64[:] hden = ctx["hden_array"]
    cdef i64[:, ::1] mexp = ctx["mexp_array"]
    cdef i64[:] msc = ctx["m_scale_array"]
    cdef i128 t = <i64>ctx["t"], n = <i64>ctx["n"]
    cdef i128 un = <i64>ctx["u_num"], ud = <i64>ctx["u_den"]
    cdef i128 ta = <i64>ctx["target"][0], tb = <i64>ctx["target"][1], tc = <i64>ctx["target"][2]
    cdef i128 lp[9]
    cdef i128 lq[9]
    cdef i128 xp[5]
    cdef i128 xq[5]
    cdef i128 p, q, nu, mx, H, bn, bd, s
    cdef HNF128 h
    cdef Py_ssize_t r, w, k, m
    cdef int j, ns = sub.shape[0]
    cdef i64 checked = 0, hfail = 0, gfail = 0
    cdef bint bad
    with nogil:
        for r in range(rows.shape[0]):
            for w in range(eta2.shape[0]):
                for j in range(9):
                    lp[j] = rows[r, 2 * j]
                    lq[j] = rows[r, 2 * j + 1]
                _mul128(t, n, lp[1], lq[1], eta2[w, 0], eta2[w, 1], &p, &q)
                lp[1] = p
                lq[1] = q
                checked += 1
                for k in range(5):
                    _mono128(t, n, lp, lq, &psi[k, 0], &p, &q)
                    xp[k] = p * psi_sc[k]
                    xq[k] = q * psi_sc[k]
                bad = (xp[0] == 0 and xq[0] == 0) or (xp[3] == 0 and xq[3] == 0)
                if bad:
                    hfail += 1
                else:
                    h.a = 0
                    h.b = 0
                    h.c = 0
                    mx = 0
                    for j in range(ns):
                        k = sub[j]
                        nu = xp[k] * xp[k] + t * xp[k] * xq[k] + n * xq[k] * xq[k]
                        if nu > mx:
                            mx = nu
                        _h128_elem(&h, t, n, xp[k], xq[k])
                    H = mx / (h.a * h.c)
                    bn = 0
                    bd = 1
                    for m in range(hexp.shape[0]):
                        _mono128(t, n, lp, lq, &hexp[m, 0], &p, &q)
                        nu = p * p + t * p * q + n * q * q
                        if nu * bd > bn * hden[m]:
                            bn = nu
                            bd = hden[m]
                    if bn * ud != un * H * bd:
                        hfail += 1
                h.a = 0
                h.b = 0
                h.c = 0
                for m in range(mexp.shape[0]):
                    _mono128(t, n, lp, lq, &mexp[m, 0], &p, &q)
                    _h128_elem(&h, t, n, p * msc[m], q * msc[m])
                if h.a:
                    h.b = h.b - _fdiv128(h.b, h.a) * h.a
                if h.a != ta or h.b != tb or h.c != tc:
                    gfail += 1
    return checked, hfail, gfail
