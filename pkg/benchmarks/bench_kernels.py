"""Compare the compiled and pure-Python kernels on the same workloads.

    python benchmarks/bench_kernels.py [--repeat 3] [--quick]

Every workload is run with both implementations; results must agree.
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time

from dpcount import kernels
from dpcount.qfield import make_field
from dpcount.surface import count_direct
from dpcount.torsor import count_torsor, verify_points

WORKLOADS = [
    ("direct", 0, 1, 300),
    ("direct", -1, 2, 20),
    ("direct", -5, 1, 25),
    ("torsor", 0, 1, 3000),
    ("torsor", -1, 1, 25),
    ("torsor", -2, 2, 50),
    ("check", 0, 2, 100),
    ("check", -1, 1, 5),
]
QUICK = [w for w in WORKLOADS if w[0] != "direct" or w[3] <= 25][:5]


def run(kind: str, d: int, i: int, B: int, impl: str):
    F = make_field(d)
    if kind == "direct":
        return count_direct(F, i, B, impl=impl).count
    if kind == "torsor":
        return count_torsor(F, i, B, impl=impl).count
    return tuple(sorted(verify_points(F, i, B, impl=impl).items()))


def timed(fn, repeat: int):
    times, out = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return out, statistics.median(times)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="small workloads only")
    args = ap.parse_args(argv)
    if kernels.compiled is None:
        print("compiled kernels are not built; nothing to compare", file=sys.stderr)
        return 1
    print(f"{'workload':<28}{'python s':>11}{'cython s':>11}{'speedup':>9}  result")
    ok = True
    for kind, d, i, B in (QUICK if args.quick else WORKLOADS):
        label = f"{kind} {make_field(d).spec} i={i} B={B}"
        rp, tp = timed(lambda: run(kind, d, i, B, "python"), 1)
        rc, tc = timed(lambda: run(kind, d, i, B, "cython"), args.repeat)
        same = rp == rc
        ok &= same
        print(f"{label:<28}{tp:>11.3f}{tc:>11.3f}{tp / max(tc, 1e-9):>8.1f}x  "
              f"{rc if kind != 'check' else dict(rc)['checked']}{'' if same else '  MISMATCH'}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
