"""Counting kernels: the compiled extension if importable, else pure Python.

Set ``DPCOUNT_PURE=1`` to force the pure-Python implementation.
"""

from __future__ import annotations

import os

from . import _pykernels as python

compiled = None
if os.environ.get("DPCOUNT_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as compiled  # type: ignore[no-redef]
    except ImportError:  # extension not built
        compiled = None

active = compiled if compiled is not None else python
IMPL = active.IMPL

__all__ = ["active", "compiled", "python", "IMPL", "get"]


def get(impl: str | None = None):
    """Kernel module by name: 'cython', 'python' or None for the default."""
    if impl is None:
        return active
    if impl == "python":
        return python
    if impl == "cython":
        if compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return compiled
    raise ValueError(f"unknown kernel implementation {impl!r}")
