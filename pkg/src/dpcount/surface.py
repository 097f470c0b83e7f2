"""Direct enumeration of integral points of bounded height.

The surface is cut out by x0*x1 - x2*x3 = 0 and x0*x3 + x1*x3 + x2*x4 = 0
in P^4, restricted to the open set x0*x3 != 0.  A point is represented by
coordinates whose gcd ideal is one of the fixed class representatives P_j.

Boundary 1 requires gcd(x0, x1, x2, x3) = P_j and uses the height
max ||x0..x3|| / N(gcd).  Boundary 2 requires gcd(x0, x2, x3) = P_j and
uses max(||x0||, ||x2||, ||x3||) / N(gcd).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from . import kernels
from ._parallel import resolve_workers, run_tasks
from .qfield import (
    Elem,
    FieldParams,
    FracIdeal,
    enumerate_bounded_norm,
    exact_divide,
    ideal_from_elements,
    lattice_points,
    make_field,
)

__all__ = [
    "SurfacePoint",
    "CountResult",
    "on_surface",
    "gcd_ideal",
    "height",
    "integrality",
    "count_direct",
    "count_naive",
    "enumerate_direct",
    "projective_key",
]

HEIGHT_COORDS = {1: (0, 1, 2, 3), 2: (0, 2, 3)}


@dataclass(frozen=True)
class SurfacePoint:
    coords: tuple[Elem, Elem, Elem, Elem, Elem]
    j: int


@dataclass
class CountResult:
    field: str
    boundary: int
    B: Fraction
    raw_tuples: int
    count: int
    method: str
    seconds: float = 0.0
    impl: str = ""
    per_class: list[int] = dc_field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "field": self.field,
            "boundary": self.boundary,
            "B": str(self.B),
            "raw_tuples": self.raw_tuples,
            "count": self.count,
            "method": self.method,
        }


def _check_args(i: int, B) -> Fraction:
    if i not in (1, 2):
        raise ValueError("boundary must be 1 or 2")
    B = Fraction(B)
    if B < 0:
        raise ValueError("B must be nonnegative")
    return B


def _as_elems(field: FieldParams, xs: Sequence) -> list[Elem]:
    return [x if isinstance(x, Elem) else field.elem(x) for x in xs]


def on_surface(x: Sequence, field: FieldParams | None = None) -> bool:
    field = field or (x[0].field if isinstance(x[0], Elem) else make_field(0))
    x0, x1, x2, x3, x4 = _as_elems(field, x)
    return (x0 * x1 - x2 * x3).is_zero() and (x0 * x3 + x1 * x3 + x2 * x4).is_zero()


def gcd_ideal(xs: Sequence[Elem]) -> FracIdeal:
    return ideal_from_elements(xs[0].field, list(xs))


def height(i: int, x: SurfacePoint | Sequence, field: FieldParams | None = None) -> Fraction:
    """Height of a point of V; invariant under scaling of the coordinates."""
    coords = x.coords if isinstance(x, SurfacePoint) else x
    field = field or (coords[0].field if isinstance(coords[0], Elem) else make_field(0))
    coords = _as_elems(field, coords)
    if (coords[0] * coords[3]).is_zero():
        raise ValueError("point is not in V (x0*x3 = 0)")
    sub = [coords[k] for k in HEIGHT_COORDS[i]]
    return max(c.norm() for c in sub) / gcd_ideal(sub).norm()


def integrality(i: int, x: SurfacePoint) -> bool:
    """Sub-gcd ideal equals the representative P_j."""
    field = x.coords[0].field
    P = field.class_reps[x.j]
    return gcd_ideal([x.coords[k] for k in HEIGHT_COORDS[i]]) == P


def projective_key(coords: Sequence[Elem]) -> tuple[Elem, ...]:
    """(x1/x0, ..., x4/x0): equal exactly for proportional tuples."""
    x0 = coords[0]
    return tuple(c / x0 for c in coords[1:])


# ---------------------------------------------------------------------------
# literal enumeration (reference, small B)


def enumerate_direct(field: FieldParams, i: int, B) -> Iterator[SurfacePoint]:
    """All counted tuples, in deterministic order, using exact element arithmetic."""
    B = _check_args(i, B)
    for j, P in enumerate(field.class_reps):
        T = P.norm() * B
        elems = enumerate_bounded_norm(P, T)
        for x2 in elems:
            for x0 in elems:
                for x3 in elems:
                    x1 = exact_divide(x2 * x3, x0)
                    if x1 is None or x1 not in P:
                        continue
                    if i == 1 and x1.norm() > T:
                        continue
                    x4 = exact_divide(-(x0 + x1) * x3, x2)
                    if x4 is None or x4 not in P:
                        continue
                    pt = SurfacePoint((x0, x1, x2, x3, x4), j)
                    if gcd_ideal(pt.coords) != P or not integrality(i, pt):
                        continue
                    yield pt


def count_naive(field: FieldParams, i: int, B) -> int:
    """Independent count: scan x0, x1, x2, x3 over boxes, match x0*x1 = x2*x3, solve x4.

    x4 is not bounded by the height, so it is solved from the second
    quadric rather than scanned.
    """
    B = _check_args(i, B)
    raw = 0
    for j, P in enumerate(field.class_reps):
        T = P.norm() * B
        small = enumerate_bounded_norm(P, T)
        if not small:
            continue
        if i == 1:
            big = small
        else:
            # x1 = x2*x3/x0 and N(x0) >= N(P)
            big = enumerate_bounded_norm(P, T * T / P.norm())
        products: dict[Elem, list[tuple[Elem, Elem]]] = {}
        for x2 in small:
            for x3 in small:
                products.setdefault(x2 * x3, []).append((x2, x3))
        for x0 in small:
            for x1 in big:
                for x2, x3 in products.get(x0 * x1, ()):
                    x4 = -(x0 * x3 + x1 * x3) / x2
                    if x4 not in P:
                        continue
                    coords = (x0, x1, x2, x3, x4)
                    if not on_surface(coords):
                        continue
                    sub = [coords[k] for k in HEIGHT_COORDS[i]]
                    if gcd_ideal(list(coords)) != P or gcd_ideal(sub) != P:
                        continue
                    if max(c.norm() for c in sub) > T:
                        continue
                    raw += 1
    if raw % field.num_units:
        raise AssertionError("unit action is not free on counted tuples")
    return raw // field.num_units


# ---------------------------------------------------------------------------
# fast counting


def _q_direct_task(T: int, i: int, start: int, step: int, impl: str | None) -> int:
    return kernels.get(impl).q_direct(T, i, start, step)


def _iq_direct_task(d: int, i: int, j: int, B: Fraction, start: int, step: int, impl: str | None) -> int:
    field = make_field(d)
    P = field.class_reps[j]
    X = (P.norm() * B).__floor__()
    pts = np.array(lattice_points(field, P.hnf, X), dtype=np.int64).reshape(-1, 3)
    if not len(pts):
        return 0
    k = kernels.get(impl)
    arg = pts if k.IMPL == "cython" else [tuple(map(int, r)) for r in pts]
    return k.iq_direct(field.trace, field.nrm, arg, P.hnf, int(P.norm()), X, i, start, step)


def count_direct(field: FieldParams, i: int, B, workers: int | None = None,
                 impl: str | None = None) -> CountResult:
    """N_i(B) by enumerating x0, x2, x3 and deriving x1, x4."""
    B = _check_args(i, B)
    workers = resolve_workers(workers)
    t0 = time.perf_counter()
    per_class = []
    if field.is_rational:
        T = B.__floor__()
        tasks = [(T, i, 1 + w, workers, impl) for w in range(workers)]
        raw = 2 * sum(run_tasks(_q_direct_task, tasks, workers))
        per_class.append(raw)
    else:
        raw = 0
        for j in range(field.class_number):
            tasks = [(field.d, i, j, B, w, workers, impl) for w in range(workers)]
            r = sum(run_tasks(_iq_direct_task, tasks, workers))
            per_class.append(r)
            raw += r
    if raw % field.num_units:
        raise AssertionError("raw tuple count not divisible by the number of units")
    return CountResult(
        field=field.spec, boundary=i, B=B, raw_tuples=raw, count=raw // field.num_units,
        method="direct", seconds=time.perf_counter() - t0, impl=kernels.get(impl).IMPL,
        per_class=per_class,
    )
