"""Exact arithmetic in Q and imaginary quadratic fields.

Elements are stored as ``(a + b*omega) / den`` with integer coordinates,
where ``omega`` is the second element of the standard integral basis and
satisfies ``omega**2 = trace*omega - nrm``.  Fractional ideals are stored
as an integral lattice ``a*Z + (b + c*omega)*Z`` in Hermite normal form
together with a positive denominator.

The rational field is encoded as ``d = 0``.  Its ideals are ``a*Z / den``
with the triple ``(a, 0, 1)``, and the size function is the ordinary
absolute value instead of the squared complex absolute value.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, Iterator, Sequence

import sympy
from sympy.ntheory import factorint, sqrt_mod

__all__ = [
    "FieldParams",
    "Elem",
    "FracIdeal",
    "PrimeIdeal",
    "make_field",
    "parse_field",
    "ideal_product",
    "ideal_gcd",
    "ideal_intersection",
    "factor_into_primes",
    "class_of",
    "enumerate_bounded_norm",
    "lattice_points",
    "lattice_minimum",
    "exact_divide",
    "primes_above",
    "prime_ideal_norms",
    "reduce_form",
    "compose_forms",
    "reduced_forms",
    "hnf_from_vectors",
]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _is_squarefree(n: int) -> bool:
    return all(e == 1 for e in factorint(abs(n)).values())


def hnf_from_vectors(vecs: Iterable[tuple[int, int]]) -> tuple[int, int, int]:
    """Hermite normal form (a, b, c) of the lattice spanned by integer vectors.

    The lattice is ``a*Z + (b + c*omega)*Z`` with ``a, c > 0`` and
    ``0 <= b < a``.  Raises ValueError if the span is not of rank 2.
    """
    a = 0
    b = 0
    c = 0
    for x, y in vecs:
        if y == 0:
            a = gcd(a, x)
            continue
        if c == 0:
            if y < 0:
                x, y = -x, -y
            b, c = x, y
            continue
        g, u, v = _xgcd(c, y)
        nb = u * b + v * x
        z = x * (c // g) - b * (y // g)
        a = gcd(a, z)
        b, c = nb, g
    if a == 0 or c == 0:
        raise ValueError("vectors do not span a rank-2 lattice")
    return a, b % a, c


@dataclass(frozen=True, eq=False)
class FieldParams:
    """Arithmetic data of Q (d = 0) or of Q(sqrt(d)) for squarefree d < 0."""

    d: int
    disc: int
    trace: int
    nrm: int
    num_units: int
    class_number: int
    forms: tuple[tuple[int, int, int], ...]
    regulator: int = 1

    @property
    def is_rational(self) -> bool:
        return self.d == 0

    @property
    def name(self) -> str:
        return "Q" if self.d == 0 else f"Q(sqrt({self.d}))"

    @property
    def spec(self) -> str:
        return "q" if self.d == 0 else f"iq:{self.d}"

    @property
    def omega(self) -> "Elem":
        if self.is_rational:
            raise ValueError("Q has no second basis element")
        return Elem(self, 0, 1)

    @property
    def one(self) -> "Elem":
        return Elem(self, 1, 0)

    def elem(self, a: int | Fraction, b: int | Fraction = 0) -> "Elem":
        a, b = Fraction(a), Fraction(b)
        den = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
        return Elem(self, int(a * den), int(b * den), den)

    @property
    def units(self) -> tuple["Elem", ...]:
        return _units(self.d)

    @property
    def unit_ideal(self) -> "FracIdeal":
        return FracIdeal(self, 1, 0, 1)

    @property
    def class_reps(self) -> tuple["FracIdeal", ...]:
        return _class_reps(self.d)

    @property
    def rho(self) -> sympy.Expr:
        """Residue factor 2*pi*h/(omega_K*sqrt|disc|); equals 1 for Q."""
        if self.is_rational:
            return sympy.Integer(1)
        return 2 * sympy.pi * self.class_number / (self.num_units * sympy.sqrt(abs(self.disc)))

    def ideal(self, *gens: "Elem | int") -> "FracIdeal":
        return ideal_from_elements(self, [g if isinstance(g, Elem) else self.elem(g) for g in gens])

    def __repr__(self) -> str:
        return f"FieldParams({self.name})"

    def __reduce__(self):
        return make_field, (self.d,)


@lru_cache(maxsize=None)
def make_field(d: int) -> FieldParams:
    """Build Q (d = 0) or the imaginary quadratic field Q(sqrt(d))."""
    if not isinstance(d, int):
        raise TypeError("d must be an integer")
    if d > 0:
        raise ValueError(f"d={d}: only Q (d=0) and imaginary quadratic fields (d<0) are supported")
    if d == 0:
        return FieldParams(d=0, disc=1, trace=0, nrm=0, num_units=2, class_number=1, forms=((1, 1, 0),))
    if not _is_squarefree(d):
        raise ValueError(f"d={d} is not squarefree")
    if d % 4 == 1:
        disc, trace, nrm = d, 1, (1 - d) // 4
    else:
        disc, trace, nrm = 4 * d, 0, -d
    num_units = {-1: 4, -3: 6}.get(d, 2)
    forms = reduced_forms(disc)
    return FieldParams(
        d=d, disc=disc, trace=trace, nrm=nrm, num_units=num_units,
        class_number=len(forms), forms=tuple(forms),
    )


def parse_field(spec: str) -> FieldParams:
    """Parse ``q`` or ``iq:<d>``."""
    s = spec.strip().lower()
    if s == "q":
        return make_field(0)
    if s.startswith("iq:"):
        try:
            d = int(s[3:])
        except ValueError:
            raise ValueError(f"bad field spec {spec!r}") from None
        if d >= 0:
            raise ValueError(f"bad field spec {spec!r}: d must be negative")
        return make_field(d)
    raise ValueError(f"bad field spec {spec!r}: expected 'q' or 'iq:<d>'")


# ---------------------------------------------------------------------------
# elements


class Elem:
    """Field element (a + b*omega)/den in lowest terms."""

    __slots__ = ("field", "a", "b", "den")

    def __init__(self, field: FieldParams, a: int, b: int = 0, den: int = 1):
        if den <= 0:
            if den == 0:
                raise ZeroDivisionError("zero denominator")
            a, b, den = -a, -b, -den
        if field.d == 0 and b != 0:
            raise ValueError("rational elements have b = 0")
        g = gcd(gcd(a, b), den)
        if g > 1:
            a, b, den = a // g, b // g, den // g
        self.field = field
        self.a = a
        self.b = b
        self.den = den

    # coordinates as rationals
    @property
    def coords(self) -> tuple[Fraction, Fraction]:
        return Fraction(self.a, self.den), Fraction(self.b, self.den)

    def is_integral(self) -> bool:
        return self.den == 1

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def _coerce(self, other) -> "Elem":
        if isinstance(other, Elem):
            if other.field is not self.field:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, int):
            return Elem(self.field, other)
        if isinstance(other, Fraction):
            return Elem(self.field, other.numerator, 0, other.denominator)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Elem(self.field, self.a * o.den + o.a * self.den, self.b * o.den + o.b * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return Elem(self.field, -self.a, -self.b, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        t, n = self.field.trace, self.field.nrm
        bd = self.b * o.b
        return Elem(self.field, self.a * o.a - n * bd, self.a * o.b + self.b * o.a + t * bd, self.den * o.den)

    __rmul__ = __mul__

    def conj(self) -> "Elem":
        if self.field.d == 0:
            return self
        return Elem(self.field, self.a + self.b * self.field.trace, -self.b, self.den)

    def norm_numerator(self) -> int:
        """N(a + b*omega) of the numerator (signed for Q)."""
        t, n = self.field.trace, self.field.nrm
        if self.field.d == 0:
            return self.a
        return self.a * self.a + t * self.a * self.b + n * self.b * self.b

    def field_norm(self) -> Fraction:
        if self.field.d == 0:
            return Fraction(self.a, self.den)
        return Fraction(self.norm_numerator(), self.den * self.den)

    def norm(self) -> Fraction:
        """Size function: |N(x)|, i.e. |x|^2 for imaginary quadratic and |x| for Q."""
        return abs(self.field_norm())

    def inverse(self) -> "Elem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.field.d == 0:
            return Elem(self.field, self.den, 0, self.a)
        return _inverse(self)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        r = Elem(self.field, 1)
        x = self
        while k:
            if k & 1:
                r = r * x
            x = x * x
            k >>= 1
        return r

    def __eq__(self, other):
        if isinstance(other, int):
            return self.a == other and self.b == 0 and self.den == 1
        if not isinstance(other, Elem):
            return NotImplemented
        return self.field is other.field and (self.a, self.b, self.den) == (other.a, other.b, other.den)

    def __hash__(self):
        return hash((self.field.d, self.a, self.b, self.den))

    def __repr__(self):
        if self.field.d == 0:
            s = f"{self.a}"
        else:
            s = f"{self.a}{self.b:+d}w"
        return s if self.den == 1 else f"({s})/{self.den}"


def _inverse(x: Elem) -> Elem:
    # x = p/den, p = a + b*omega; x^-1 = den*conj(p)/N(p)
    f = x.field
    p = Elem(f, x.a, x.b)
    c = p.conj()
    nn = p.norm_numerator()
    return Elem(f, c.a * x.den, c.b * x.den, nn)


def exact_divide(x: Elem, y: Elem) -> Elem | None:
    """Return q with x = q*y if q is integral, else None."""
    if y.is_zero():
        raise ZeroDivisionError("division by zero")
    q = x / y
    return q if q.is_integral() else None


# ---------------------------------------------------------------------------
# ideals


class FracIdeal:
    """Fractional ideal L/den with L = a*Z + (b + c*omega)*Z in HNF."""

    __slots__ = ("field", "a", "b", "c", "den")

    def __init__(self, field: FieldParams, a: int, b: int, c: int, den: int = 1):
        if a <= 0 or c <= 0 or den <= 0:
            raise ValueError("HNF entries and denominator must be positive")
        if a % c or b % c:
            raise ValueError("c must divide a and b")
        b %= a
        g = gcd(gcd(gcd(a, b), c), den)
        if g > 1:
            a, b, c, den = a // g, b // g, c // g, den // g
        self.field = field
        self.a = a
        self.b = b
        self.c = c
        self.den = den

    @property
    def hnf(self) -> tuple[int, int, int]:
        return self.a, self.b, self.c

    def basis(self) -> tuple[Elem, Elem]:
        f = self.field
        if f.d == 0:
            return (Elem(f, self.a, 0, self.den),)  # type: ignore[return-value]
        return Elem(f, self.a, 0, self.den), Elem(f, self.b, self.c, self.den)

    def integral_norm(self) -> int:
        return self.a * self.c

    def norm(self) -> Fraction:
        if self.field.d == 0:
            return Fraction(self.a, self.den)
        return Fraction(self.a * self.c, self.den * self.den)

    def is_integral(self) -> bool:
        return self.den == 1

    def is_unit_ideal(self) -> bool:
        return self.den == 1 and self.a == 1 and self.c == 1

    def contains(self, x: Elem) -> bool:
        if x.is_zero():
            return True
        # x*den must lie in L
        num, xd = self.den, x.den
        if (x.a * num) % xd or (x.b * num) % xd:
            return False
        p, q = x.a * num // xd, x.b * num // xd
        return _lattice_contains(self.a, self.b, self.c, p, q)

    __contains__ = contains

    def conj(self) -> "FracIdeal":
        f = self.field
        if f.d == 0:
            return self
        a, b, c = hnf_from_vectors([(self.a, 0), (self.b + self.c * f.trace, -self.c)])
        return FracIdeal(f, a, b, c, self.den)

    def inverse(self) -> "FracIdeal":
        f = self.field
        if f.d == 0:
            return FracIdeal(f, self.den, 0, 1, self.a)
        cj = self.conj()
        # (L/den)^-1 = den * conj(L) / N(L)
        return FracIdeal(f, cj.a * self.den, cj.b * self.den, cj.c * self.den, self.integral_norm())

    def __mul__(self, other: "FracIdeal") -> "FracIdeal":
        return ideal_product(self, other)

    def __add__(self, other: "FracIdeal") -> "FracIdeal":
        return ideal_gcd(self, other)

    def __truediv__(self, other: "FracIdeal") -> "FracIdeal":
        return ideal_product(self, other.inverse())

    def __pow__(self, k: int) -> "FracIdeal":
        if k < 0:
            return self.inverse() ** (-k)
        r = self.field.unit_ideal
        x = self
        while k:
            if k & 1:
                r = r * x
            x = x * x
            k >>= 1
        return r

    def scale(self, x: Elem) -> "FracIdeal":
        """The ideal x*I."""
        return ideal_product(self, ideal_from_elements(self.field, [x]))

    def __le__(self, other: "FracIdeal") -> bool:
        """Containment self ⊆ other."""
        return all(other.contains(g) for g in self.basis())

    def __eq__(self, other):
        if not isinstance(other, FracIdeal):
            return NotImplemented
        return self.field is other.field and (self.a, self.b, self.c, self.den) == (other.a, other.b, other.c, other.den)

    def __hash__(self):
        return hash((self.field.d, self.a, self.b, self.c, self.den))

    def __repr__(self):
        if self.field.d == 0:
            s = f"({self.a})"
        else:
            s = f"[{self.a}, {self.b}+{self.c}w]"
        return s if self.den == 1 else f"{s}/{self.den}"


def _lattice_contains(a: int, b: int, c: int, p: int, q: int) -> bool:
    if q % c:
        return False
    return (p - (q // c) * b) % a == 0


def _times_omega(field: FieldParams, p: int, q: int) -> tuple[int, int]:
    # (p + q w) w = -n q + (p + t q) w
    return -field.nrm * q, p + field.trace * q


def ideal_from_elements(field: FieldParams, elems: Sequence[Elem]) -> FracIdeal:
    """The fractional ideal generated by ``elems`` (not all zero)."""
    nz = [e for e in elems if not e.is_zero()]
    if not nz:
        raise ValueError("the zero ideal is not a fractional ideal")
    den = 1
    for e in nz:
        den = den * e.den // gcd(den, e.den)
    if field.d == 0:
        g = 0
        for e in nz:
            g = gcd(g, e.a * (den // e.den))
        return FracIdeal(field, g, 0, 1, den)
    vecs = []
    for e in nz:
        p, q = e.a * (den // e.den), e.b * (den // e.den)
        vecs.append((p, q))
        vecs.append(_times_omega(field, p, q))
    a, b, c = hnf_from_vectors(vecs)
    return FracIdeal(field, a, b, c, den)


def ideal_product(I: FracIdeal, J: FracIdeal) -> FracIdeal:
    f = I.field
    if J.field is not f:
        raise ValueError("ideals of different fields")
    if f.d == 0:
        return FracIdeal(f, I.a * J.a, 0, 1, I.den * J.den)
    gi = [(I.a, 0), (I.b, I.c)]
    gj = [(J.a, 0), (J.b, J.c)]
    t, n = f.trace, f.nrm
    vecs = []
    for p1, q1 in gi:
        for p2, q2 in gj:
            qq = q1 * q2
            vecs.append((p1 * p2 - n * qq, p1 * q2 + q1 * p2 + t * qq))
    a, b, c = hnf_from_vectors(vecs)
    return FracIdeal(f, a, b, c, I.den * J.den)


def ideal_gcd(I: FracIdeal, J: FracIdeal) -> FracIdeal:
    """I + J."""
    f = I.field
    if J.field is not f:
        raise ValueError("ideals of different fields")
    den = I.den * J.den // gcd(I.den, J.den)
    si, sj = den // I.den, den // J.den
    if f.d == 0:
        return FracIdeal(f, gcd(I.a * si, J.a * sj), 0, 1, den)
    a, b, c = hnf_from_vectors([
        (I.a * si, 0), (I.b * si, I.c * si), (J.a * sj, 0), (J.b * sj, J.c * sj),
    ])
    return FracIdeal(f, a, b, c, den)


def ideal_intersection(I: FracIdeal, J: FracIdeal) -> FracIdeal:
    """I ∩ J, computed as (I^-1 + J^-1)^-1."""
    return ideal_gcd(I.inverse(), J.inverse()).inverse()


# ---------------------------------------------------------------------------
# binary quadratic forms and the class group


def _normalize_form(a: int, b: int, c: int) -> tuple[int, int, int]:
    r = (a - b) // (2 * a)
    return a, b + 2 * r * a, a * r * r + b * r + c


def reduce_form(f: tuple[int, int, int]) -> tuple[int, int, int]:
    """Reduce a positive definite binary quadratic form."""
    a, b, c = f
    if a <= 0 or b * b - 4 * a * c >= 0:
        raise ValueError("form is not positive definite")
    a, b, c = _normalize_form(a, b, c)
    while a > c:
        a, b, c = _normalize_form(c, -b, a)
    if a == c and b < 0:
        b = -b
    return a, b, c


def reduced_forms(disc: int) -> list[tuple[int, int, int]]:
    """All reduced primitive forms of negative discriminant, sorted by (a, b)."""
    out = []
    a = 1
    while 3 * a * a <= -disc:
        for b in range(-a + 1, a + 1):
            if (b * b - disc) % (4 * a):
                continue
            c = (b * b - disc) // (4 * a)
            if c < a or (a == c and b < 0):
                continue
            if gcd(gcd(a, b), c) != 1:
                continue
            out.append((a, b, c))
        a += 1
    out.sort(key=lambda f: (f[0], abs(f[1]), -f[1]))
    return out


def compose_forms(f1: tuple[int, int, int], f2: tuple[int, int, int]) -> tuple[int, int, int]:
    """Gauss composition of two primitive forms of the same discriminant."""
    a1, b1, c1 = f1
    a2, b2, c2 = f2
    if b1 * b1 - 4 * a1 * c1 != b2 * b2 - 4 * a2 * c2:
        raise ValueError("forms of different discriminants")
    if a1 > a2:
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, u, _ = _xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, x2, y2 = _xgcd(s, d)
        y2 = -y2
    v1, v2 = a1 // d1, a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (c2 * d1 + r * (b2 + v2 * r)) // v1
    return reduce_form((a3, b3, c3))


def _ideal_form(I: FracIdeal) -> tuple[int, int, int]:
    f = I.field
    a, b = I.a // I.c, I.b // I.c
    t, n = f.trace, f.nrm
    return reduce_form((a, 2 * b + t, (b * b + t * b + n) // a))


@lru_cache(maxsize=None)
def _class_reps(d: int) -> tuple[FracIdeal, ...]:
    f = make_field(d)
    if d == 0:
        return (f.unit_ideal,)
    reps = []
    for a, b, _c in f.forms:
        # a*Z + ((-b + sqrt(disc))/2)*Z
        if f.disc % 4 == 0:
            shift = -b // 2
        else:
            shift = (-b - 1) // 2
        reps.append(FracIdeal(f, a, shift % a, 1))
    return tuple(reps)


@lru_cache(maxsize=None)
def _rep_forms(d: int) -> dict[tuple[int, int, int], int]:
    return {_ideal_form(P): j for j, P in enumerate(_class_reps(d))}


def class_of(I: FracIdeal) -> int:
    """Index j such that I/P_j is principal."""
    f = I.field
    if f.d == 0:
        return 0
    return _rep_forms(f.d)[_ideal_form(I)]


def class_form(I: FracIdeal) -> tuple[int, int, int]:
    """Reduced form attached to the class of I."""
    if I.field.d == 0:
        return (1, 1, 0)
    return _ideal_form(I)


@lru_cache(maxsize=None)
def _units(d: int) -> tuple[Elem, ...]:
    f = make_field(d)
    if d == 0:
        return (Elem(f, 1), Elem(f, -1))
    us = [Elem(f, p, q) for p, q, _ in lattice_points(f, (1, 0, 1), 1)]
    us.sort(key=lambda u: (u != Elem(f, 1), -u.a, -u.b))
    return tuple(us)


# ---------------------------------------------------------------------------
# primes


@dataclass(frozen=True)
class PrimeIdeal:
    p: int
    splitting: str
    ideal: FracIdeal
    norm: int

    def __repr__(self):
        return f"PrimeIdeal({self.p}, {self.splitting}, {self.ideal!r})"


def splitting_type(field: FieldParams, p: int) -> str:
    """'split', 'inert' or 'ramified' for a rational prime p."""
    if field.d == 0:
        return "split1"
    D = field.disc
    if D % p == 0:
        return "ramified"
    if p == 2:
        return "split" if D % 8 == 1 else "inert"
    return "split" if pow(D % p, (p - 1) // 2, p) == 1 else "inert"


def _min_poly_roots(field: FieldParams, p: int) -> list[int]:
    t, n = field.trace, field.nrm
    if p == 2:
        return [r for r in range(2) if (r * r - t * r + n) % 2 == 0]
    # r = (t ± sqrt(disc)) / 2 mod p
    s = sqrt_mod(field.disc % p, p, all_roots=True) or []
    inv2 = pow(2, -1, p)
    return sorted({(t + x) * inv2 % p for x in s})


@lru_cache(maxsize=4096)
def primes_above(field: FieldParams, p: int) -> tuple[PrimeIdeal, ...]:
    """Prime ideals above p, conjugates ordered by their HNF."""
    if field.d == 0:
        return (PrimeIdeal(p, "split1", FracIdeal(field, p, 0, 1), p),)
    kind = splitting_type(field, p)
    if kind == "inert":
        return (PrimeIdeal(p, kind, FracIdeal(field, p, 0, p), p * p),)
    roots = _min_poly_roots(field, p)
    # omega - r generates together with p
    ideals = sorted({FracIdeal(field, p, (-r) % p, 1) for r in roots}, key=lambda I: I.b)
    return tuple(PrimeIdeal(p, kind, I, p) for I in ideals)


def prime_ideal_norms(field: FieldParams, P: int) -> Iterator[int]:
    """Norms of all prime ideals of norm <= P, with multiplicity, ascending by p."""
    for p in sympy.sieve.primerange(2, P + 1):
        if field.d == 0:
            yield p
            continue
        kind = splitting_type(field, p)
        if kind == "split":
            yield p
            yield p
        elif kind == "ramified":
            yield p
        elif p * p <= P:
            yield p * p


def factor_into_primes(I: FracIdeal) -> list[tuple[PrimeIdeal, int]]:
    """Prime factorisation of a nonzero integral ideal."""
    if not I.is_integral():
        raise ValueError("factor_into_primes expects an integral ideal")
    f = I.field
    N = int(I.norm())
    out = []
    for p in sorted(factorint(N)):
        for P in primes_above(f, p):
            v = 0
            J = I
            inv = P.ideal.inverse()
            while True:
                K = J * inv
                if not K.is_integral():
                    break
                J = K
                v += 1
            if v:
                out.append((P, v))
    return out


# ---------------------------------------------------------------------------
# lattice enumeration


def _gram(field: FieldParams, v1: tuple[int, int], v2: tuple[int, int]) -> tuple[int, int, int]:
    def nm(p, q):
        return p * p + field.trace * p * q + field.nrm * q * q
    A = nm(*v1)
    C = nm(*v2)
    B = nm(v1[0] + v2[0], v1[1] + v2[1]) - A - C
    return A, B, C


def lattice_points(field: FieldParams, hnf: tuple[int, int, int], X: int) -> list[tuple[int, int, int]]:
    """Nonzero points (p, q, N) of the lattice with 0 < N(p + q*omega) <= X.

    Sorted by (N, p, q).  For Q the lattice is a*Z and N is |p|.
    """
    a, b, c = hnf
    if X < 1:
        return []
    if field.d == 0:
        out = []
        for k in range(1, X // a + 1):
            out.append((-k * a, 0, k * a))
            out.append((k * a, 0, k * a))
        out.sort(key=lambda r: (r[2], r[0]))
        return out
    v1, v2 = (a, 0), (b, c)
    # Lagrange reduction of the basis
    A, B, C = _gram(field, v1, v2)
    if C < A:
        v1, v2, A, C = v2, v1, C, A
    while True:
        k = round(Fraction(B, 2 * A))
        v2 = (v2[0] - k * v1[0], v2[1] - k * v1[1])
        A, B, C = _gram(field, v1, v2)
        if C < A:
            v1, v2 = v2, v1
            A, B, C = _gram(field, v1, v2)
            continue
        break
    A, B, C = _gram(field, v1, v2)
    D = 4 * A * C - B * B
    mmax = isqrt(4 * C * X // D)
    nmax = isqrt(4 * A * X // D)
    out = []
    for m in range(-mmax, mmax + 1):
        for n in range(-nmax, nmax + 1):
            N = A * m * m + B * m * n + C * n * n
            if 0 < N <= X:
                out.append((m * v1[0] + n * v2[0], m * v1[1] + n * v2[1], N))
    out.sort(key=lambda r: (r[2], r[0], r[1]))
    return out


def lattice_minimum(field: FieldParams, hnf: tuple[int, int, int]) -> int:
    """Smallest nonzero N(p + q*omega) on the lattice (a for Q)."""
    a, b, c = hnf
    if field.d == 0:
        return a
    X = a * c
    while True:
        pts = lattice_points(field, hnf, X)
        if pts:
            return pts[0][2]
        X *= 2


def enumerate_bounded_norm(I: FracIdeal, T: int | Fraction) -> list[Elem]:
    """Elements x of I with 0 < ||x|| <= T, sorted by size."""
    f = I.field
    T = Fraction(T)
    if T < 0:
        return []
    scale = I.den if f.d == 0 else I.den * I.den
    X = (T * scale).__floor__()
    return [Elem(f, p, q, I.den) for p, q, _ in lattice_points(f, I.hnf, X)]
