"""Command-line entry point: count, scan, predict, constants, verify.

Exit codes: 0 success, 1 verification or equality failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import mpmath

from .. import constants
from .._parallel import resolve_workers
from ..qfield import FieldParams, parse_field, primes_above
from ..surface import count_direct
from ..torsor import count_torsor
from . import verify as verify_mod
from .output import emit, interval_strs, number, to_csv, to_json

SCAN_HEADER = ["B", "count", "main_lo", "main_hi", "ratio_lo", "ratio_hi", "ms"]
COUNT_HEADER = ["field", "boundary", "B", "method", "count", "raw_tuples", "ms"]
METHODS = ("direct", "torsor", "both")


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    field: FieldParams
    boundary: int = 1
    B: list[Fraction] = dc_field(default_factory=list)
    method: str = "torsor"
    prime_bound: int = 10**5
    depth: int = 12
    workers: int = 1
    fmt: str = "csv"
    seed: int = 0
    timing: bool = False
    out: str | None = None

    def __post_init__(self):
        if self.boundary not in (1, 2):
            raise UsageError("boundary must be 1 or 2")
        if any(b <= 0 for b in self.B):
            raise UsageError("B values must be positive")
        if any(x >= y for x, y in zip(self.B, self.B[1:])):
            raise UsageError("B values must be increasing")
        if self.method not in METHODS:
            raise UsageError(f"method must be one of {', '.join(METHODS)}")
        if self.prime_bound < 1:
            raise UsageError("prime bound must be >= 1")
        if self.depth < 1:
            raise UsageError("depth must be >= 1")
        if self.workers < 1:
            raise UsageError("worker count must be >= 1")


def default_grid(field: FieldParams) -> list[Fraction]:
    top = 4 if field.is_rational else 2
    return [Fraction(10 ** k) for k in range(1, top + 1)]


def _b_str(B: Fraction) -> str:
    return str(B.numerator) if B.denominator == 1 else str(B)


# ---------------------------------------------------------------------------
# commands


def _run_counts(cfg: RunConfig, B: Fraction) -> tuple[list, bool]:
    methods = ("direct", "torsor") if cfg.method == "both" else (cfg.method,)
    results = []
    for m in methods:
        fn = count_direct if m == "direct" else count_torsor
        t0 = time.perf_counter()
        r = fn(cfg.field, cfg.boundary, B, workers=cfg.workers)
        r.seconds = time.perf_counter() - t0
        results.append(r)
    return results, len({r.count for r in results}) == 1


def cmd_count(cfg: RunConfig) -> tuple[list, bool]:
    """All requested counts; the flag is False when two methods disagree."""
    out, ok = [], True
    for B in cfg.B:
        rs, same = _run_counts(cfg, B)
        out.extend(rs)
        ok &= same
    return out, ok


def main_term(pred: constants.Prediction, B: Fraction) -> tuple[Fraction, Fraction]:
    """Enclosure of c * B * (log B)^(b-1)."""
    Bi = constants._from_fractions(B, B)
    val = pred.c * Bi * mpmath.iv.log(Bi) ** (pred.b - 1)
    return constants._endpoints(val)


def cmd_scan(cfg: RunConfig) -> tuple[list[dict], bool]:
    pred = constants.predict(cfg.field, cfg.boundary, P=cfg.prime_bound, workers=cfg.workers)
    rows, ok = [], True
    for B in cfg.B:
        t0 = time.perf_counter()
        rs, same = _run_counts(cfg, B)
        ms = (time.perf_counter() - t0) * 1000
        ok &= same
        count = rs[0].count
        mlo, mhi = main_term(pred, B)
        if mlo > 0:
            ratio = (Fraction(count) / mhi, Fraction(count) / mlo)
        else:
            ratio = None
        rows.append({"B": B, "count": count, "main": (mlo, mhi), "ratio": ratio,
                     "ms": round(ms, 3) if cfg.timing else None})
    return rows, ok


def cmd_predict(cfg: RunConfig) -> dict:
    p = constants.predict(cfg.field, cfg.boundary, P=cfg.prime_bound, workers=cfg.workers)
    c_lo, c_hi = constants._endpoints(p.c)
    f_lo, f_hi = constants._endpoints(p.c_fin)
    e = p.euler
    return {
        "field": p.field, "boundary": p.boundary, "b": p.b,
        "c": interval_strs(c_lo, c_hi), "c_fin": interval_strs(f_lo, f_hi),
        "c_inf": str(p.c_inf), "prefactor": str(p.symbolic), "closed_form": str(p.closed_form),
        "closed_form_match": p.closed_form_match,
        "euler_product": {"P": e.P, "factors": e.num_factors, "interval": interval_strs(e.lo, e.hi)},
        "alpha_sum": str(p.parts["alpha_sum"]), "rank": p.parts["rank"],
        "rho_power": str(p.parts["rho_power"]),
    }


def cmd_constants(cfg: RunConfig, samples: int) -> dict:
    i = cfg.boundary
    faces = {}
    for A in constants.FACE_LABELS[i]:
        poly = constants.ALPHA_REGIONS[(i, A)]
        est, sigma = constants.monte_carlo_volume(poly, samples=samples, seed=cfg.seed)
        faces[A] = {"alpha": str(constants.alpha(i, A)), "monte_carlo": [est, sigma]}
    oracle = []
    for p in (2, 3, 5, 7):
        for pr in primes_above(cfg.field, p):
            o = constants.tamagawa_p_oracle(i, pr, cfg.depth)
            oracle.append({"p": p, "type": pr.splitting, "norm": pr.norm,
                           "closed": str(constants.tamagawa_p(i, pr.norm)),
                           "oracle": interval_strs(o.lo, o.hi)})
    e = constants.euler_product(cfg.field, i, cfg.prime_bound, workers=cfg.workers)
    return {
        "field": cfg.field.spec, "boundary": i,
        "region_volume": str(constants.region_volume(i)),
        "alpha": faces, "alpha_sum": str(constants.alpha_sum(i)),
        "tamagawa": oracle, "depth": cfg.depth, "seed": cfg.seed, "samples": samples,
        "euler_product": {"P": e.P, "factors": e.num_factors, "interval": interval_strs(e.lo, e.hi)},
    }


def cmd_verify(suite: str, cfg: RunConfig) -> list[dict]:
    return verify_mod.run_suite(suite, depth=cfg.depth, prime_bound=min(cfg.prime_bound, 10**4),
                                workers=cfg.workers)


# ---------------------------------------------------------------------------
# formatting


def _format_counts(results, fmt: str, timing: bool, match: bool) -> str:
    recs = []
    for r in results:
        recs.append({"field": r.field, "boundary": r.boundary, "B": _b_str(r.B), "method": r.method,
                     "count": r.count, "raw_tuples": r.raw_tuples,
                     "ms": round(r.seconds * 1000, 3) if timing else None})
    if fmt == "json":
        return to_json({"results": recs, "match": match})
    return to_csv(COUNT_HEADER, [[x[k] for k in COUNT_HEADER] for x in recs])


def _format_scan(rows, fmt: str) -> str:
    out = []
    for r in rows:
        main = interval_strs(*r["main"])
        ratio = interval_strs(*r["ratio"]) if r["ratio"] else (None, None)
        out.append((_b_str(r["B"]), r["count"], main, ratio, r["ms"]))
    if fmt == "json":
        return to_json({"rows": [
            {"B": number(B), "count": c, "main": [number(m[0]), number(m[1])],
             "ratio": [number(q[0]), number(q[1])] if q[0] is not None else None, "ms": ms}
            for B, c, m, q, ms in out]})
    return to_csv(SCAN_HEADER, [[B, c, m[0], m[1], q[0], q[1], ms] for B, c, m, q, ms in out])


def _format_mapping(obj: dict, fmt: str) -> str:
    if fmt == "json":
        return to_json(obj)
    rows = []

    def walk(prefix, v):
        if isinstance(v, dict):
            for k in sorted(v):
                walk(f"{prefix}.{k}" if prefix else str(k), v[k])
        elif isinstance(v, (list, tuple)) and v and isinstance(v[0], dict):
            for n, item in enumerate(v):
                walk(f"{prefix}[{n}]", item)
        elif isinstance(v, (list, tuple)):
            rows.append([prefix, " ".join(str(x) for x in v)])
        else:
            rows.append([prefix, v])

    walk("", obj)
    return to_csv(["key", "value"], rows)


def _format_verify(suite: str, recs: list[dict], fmt: str) -> str:
    if fmt == "json":
        failed = sum(not r["ok"] for r in recs)
        return to_json({"suite": suite, "checks": recs, "passed": len(recs) - failed, "failed": failed})
    return to_csv(["suite", "check", "ok", "detail"],
                  [[r["suite"], r["check"], "pass" if r["ok"] else "FAIL", r["detail"]] for r in recs])


# ---------------------------------------------------------------------------
# argument parsing


def _parse_B(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid bound {s!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dpcount", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, counts=False):
        p.add_argument("--field", default="q", help="'q' or 'iq:<d>' with d < 0 squarefree")
        p.add_argument("--boundary", type=int, default=1, choices=(1, 2))
        p.add_argument("--workers", type=int, default=None, help="worker processes (default DPCOUNT_WORKERS or 1)")
        p.add_argument("--format", default="csv", choices=("csv", "json"))
        p.add_argument("--out", default=None, help="output file (written atomically); default stdout")
        p.add_argument("--prime-bound", type=int, default=10**5, help="Euler product truncation P")
        p.add_argument("--depth", type=int, default=12, help="local volume oracle depth M")
        p.add_argument("--seed", type=int, default=0, help="Monte Carlo seed")
        if counts:
            p.add_argument("--B", type=_parse_B, nargs="*", default=None, help="height bounds")
            p.add_argument("--method", default="torsor", choices=METHODS)
            p.add_argument("--timing", action="store_true", help="fill the ms column")

    common(sub.add_parser("count", help="count points of bounded height"), counts=True)
    common(sub.add_parser("scan", help="counts against the predicted main term"), counts=True)
    common(sub.add_parser("predict", help="predicted leading constant and exponent"))
    pc = sub.add_parser("constants", help="ingredients of the leading constant")
    common(pc)
    pc.add_argument("--samples", type=int, default=10**6, help="Monte Carlo samples per polytope")
    pv = sub.add_parser("verify", help="run invariant suites")
    common(pv)
    pv.add_argument("suite", nargs="?", default="all", choices=("all", *verify_mod.SUITES))
    return ap


def _config(args) -> RunConfig:
    field = parse_field(args.field)
    B = getattr(args, "B", None)
    if B is None:
        B = default_grid(field) if args.command == "scan" else []
    if args.command == "count" and not B:
        raise UsageError("count needs at least one --B value")
    return RunConfig(
        field=field, boundary=args.boundary, B=list(B), method=getattr(args, "method", "torsor"),
        prime_bound=args.prime_bound, depth=args.depth, workers=resolve_workers(args.workers),
        fmt=args.format, seed=args.seed, timing=getattr(args, "timing", False), out=args.out,
    )


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = _config(args)
    except ValueError as exc:
        print(f"dpcount: error: {exc}", file=sys.stderr)
        return 2
    if args.command == "count":
        results, ok = cmd_count(cfg)
        emit(_format_counts(results, cfg.fmt, cfg.timing, ok), cfg.out)
        if not ok:
            print("dpcount: direct and torsor counts differ", file=sys.stderr)
        return 0 if ok else 1
    if args.command == "scan":
        rows, ok = cmd_scan(cfg)
        emit(_format_scan(rows, cfg.fmt), cfg.out)
        if not ok:
            print("dpcount: direct and torsor counts differ", file=sys.stderr)
        return 0 if ok else 1
    if args.command == "predict":
        res = cmd_predict(cfg)
        emit(_format_mapping(res, cfg.fmt), cfg.out)
        return 0 if res["closed_form_match"] else 1
    if args.command == "constants":
        if args.samples < 1:
            print("dpcount: error: samples must be >= 1", file=sys.stderr)
            return 2
        emit(_format_mapping(cmd_constants(cfg, args.samples), cfg.fmt), cfg.out)
        return 0
    recs = cmd_verify(args.suite, cfg)
    emit(_format_verify(args.suite, recs, cfg.fmt), cfg.out)
    return 0 if all(r["ok"] for r in recs) else 1


if __name__ == "__main__":
    sys.exit(main())
