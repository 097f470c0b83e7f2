"""Picard-lattice data of the minimal desingularisation.

Classes live in the basis l0..l5 with intersection form diag(1,-1,-1,-1,-1,-1).
Everything here is constant data; the functions below recompute the
combinatorics (adjacency, degrees, ranks) from the raw classes so the
tables can be checked against each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

__all__ = [
    "PicClass",
    "E",
    "ANTICANONICAL",
    "FIGURE_EDGES",
    "BOUNDARY",
    "PSI_EXPONENTS",
    "M_EXPONENTS",
    "HEIGHT_EXPONENTS",
    "IRRELEVANT_MONOMIALS",
    "PRINCIPAL_RELATIONS",
    "pairing",
    "degree_of_monomial",
    "adjacency",
    "coprimality_pairs",
    "log_anticanonical",
    "pic_rank",
    "clemens_faces",
    "b_exponent",
]


@dataclass(frozen=True)
class PicClass:
    coeffs: tuple[int, int, int, int, int, int]

    def __add__(self, other: "PicClass") -> "PicClass":
        return PicClass(tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "PicClass") -> "PicClass":
        return PicClass(tuple(x - y for x, y in zip(self.coeffs, other.coeffs)))

    def __rmul__(self, k: int) -> "PicClass":
        return PicClass(tuple(k * x for x in self.coeffs))

    def __neg__(self) -> "PicClass":
        return PicClass(tuple(-x for x in self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)


_FORM = (1, -1, -1, -1, -1, -1)
ZERO = PicClass((0,) * 6)


def _l(i: int) -> PicClass:
    v = [0] * 6
    v[i] = 1
    return PicClass(tuple(v))


L = tuple(_l(i) for i in range(6))

# [E1], ..., [E9]; index 0 unused so E[j] matches the curve label
E: tuple[PicClass, ...] = (
    ZERO,
    L[1] - L[4],
    L[0] - L[1] - L[2] - L[3],
    L[2] - L[5],
    L[4],
    L[3],
    L[5],
    L[0] - L[1] - L[4],
    L[0] - L[2] - L[5],
    L[0] - L[3],
)

ANTICANONICAL = 3 * L[0] - L[1] - L[2] - L[3] - L[4] - L[5]

FIGURE_EDGES = frozenset(frozenset(p) for p in [
    (1, 2), (1, 4), (2, 3), (2, 5), (3, 6), (4, 7), (5, 9), (6, 8), (7, 8), (7, 9), (8, 9),
])

BOUNDARY = {1: (1, 2, 3), 2: (1, 2, 3, 4)}


def _exps(**powers: int) -> tuple[int, ...]:
    v = [0] * 9
    for k, e in powers.items():
        v[int(k[1:]) - 1] = e
    return tuple(v)


# coordinates x0..x4 of the anticanonical map
PSI_EXPONENTS = (
    _exps(e1=2, e2=2, e3=1, e4=2, e5=1, e7=1),
    _exps(e1=1, e2=2, e3=2, e5=1, e6=2, e8=1),
    _exps(e1=2, e2=3, e3=2, e4=1, e5=2, e6=1),
    _exps(e1=1, e2=1, e3=1, e4=1, e6=1, e7=1, e8=1),
    _exps(e7=1, e8=1, e9=1),
)

# height sections, full monomials including the boundary variables
M_EXPONENTS = {
    1: (
        _exps(e1=1, e2=1, e4=2, e5=1, e7=1),
        _exps(e2=1, e3=1, e5=1, e6=2, e8=1),
        _exps(e1=1, e2=2, e3=1, e4=1, e5=2, e6=1),
        _exps(e4=1, e6=1, e7=1, e8=1),
    ),
    2: (
        _exps(e1=1, e2=1, e4=1, e5=1, e7=1),
        _exps(e1=1, e2=2, e3=1, e5=2, e6=1),
        _exps(e6=1, e7=1, e8=1),
    ),
}

# the same sections with the unit coordinates dropped
HEIGHT_EXPONENTS = {
    i: tuple(tuple(0 if j + 1 in BOUNDARY[i] else e for j, e in enumerate(m)) for m in ms)
    for i, ms in M_EXPONENTS.items()
}


def _all_but(*skip: int) -> tuple[int, ...]:
    return tuple(0 if j + 1 in skip else 1 for j in range(9))


IRRELEVANT_MONOMIALS = (
    _all_but(7, 8, 9),
    _all_but(1, 2),
    _all_but(1, 4),
    _all_but(2, 3),
    _all_but(2, 5),
    _all_but(3, 6),
    _all_but(4, 7),
    _all_but(5, 9),
    _all_but(6, 8),
)

PRINCIPAL_RELATIONS = (
    (0, 0, 1, 1, -1, 1, 1, -1, 0, 0)[1:],
    (0, 1, 1, 0, 1, 1, -1, 0, -1, 0)[1:],
)


def pairing(a: PicClass, b: PicClass) -> int:
    return sum(w * x * y for w, x, y in zip(_FORM, a.coeffs, b.coeffs))


def degree_of_monomial(exponents: Sequence[int]) -> PicClass:
    """Sum of e_j [E_j] for an exponent vector of length 9."""
    if len(exponents) != 9:
        raise ValueError("need 9 exponents")
    out = ZERO
    for j, e in enumerate(exponents, start=1):
        if e:
            out = out + e * E[j]
    return out


def adjacency() -> frozenset[frozenset[int]]:
    """Pairs {j, k} with positive intersection number."""
    return frozenset(
        frozenset((j, k)) for j, k in combinations(range(1, 10), 2) if pairing(E[j], E[k]) >= 1
    )


def coprimality_pairs() -> frozenset[frozenset[int]]:
    """Pairs of curves that do not meet; their ideals must be coprime."""
    adj = adjacency()
    return frozenset(frozenset(p) for p in combinations(range(1, 10), 2) if frozenset(p) not in adj)


def log_anticanonical(i: int) -> PicClass:
    """Anticanonical class minus the boundary divisor."""
    out = ANTICANONICAL
    for j in BOUNDARY[i]:
        out = out - E[j]
    return out


def pic_rank(i: int) -> int:
    """Rank of the Picard group of the complement of the boundary."""
    return 6 - len(BOUNDARY[i])


def clemens_faces(i: int) -> list[tuple[int, ...]]:
    """Maximal sets of boundary curves meeting pairwise, i.e. the top faces."""
    comps = BOUNDARY[i]
    adj = adjacency()
    faces = []
    for r in range(len(comps), 0, -1):
        for S in combinations(comps, r):
            if all(frozenset(p) in adj for p in combinations(S, 2)):
                if not any(set(S) <= set(F) for F in faces):
                    faces.append(S)
    top = max(len(F) for F in faces)
    return sorted(F for F in faces if len(F) == top)


def b_exponent(i: int) -> int:
    """Picard rank of the open part plus the Clemens dimension plus one."""
    return pic_rank(i) + len(clemens_faces(i)[0])
