"""Serialization: outward-rounded decimals, CSV/JSON tables, atomic writes."""

from __future__ import annotations

import csv
import io
import json
import os
import sys
import tempfile
from decimal import ROUND_CEILING, ROUND_FLOOR, Context, Decimal
from fractions import Fraction

DIGITS = 15


def _dec(x: Fraction, rounding) -> str:
    ctx = Context(prec=DIGITS, rounding=rounding)
    d = ctx.divide(Decimal(x.numerator), Decimal(x.denominator))
    return format(d, "g") if d else "0"


def lo_str(x) -> str:
    """Decimal not above x."""
    return _dec(Fraction(x), ROUND_FLOOR)


def hi_str(x) -> str:
    """Decimal not below x."""
    return _dec(Fraction(x), ROUND_CEILING)


def interval_strs(lo, hi) -> tuple[str, str]:
    return lo_str(lo), hi_str(hi)


def number(s: str) -> float | int:
    """JSON number from a decimal string produced above."""
    return int(s) if s.lstrip("-").isdigit() else float(s)


def to_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow(["" if v is None else v for v in r])
    return buf.getvalue()


def to_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def emit(text: str, out: str | None) -> None:
    """Write to stdout, or atomically to a file (temporary file, then rename)."""
    if out is None or out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(prefix=".dpcount-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
