"""Timing of the compiled and numpy transform backends on one spec."""
from __future__ import annotations

import timeit

import numpy as np

from . import _fallback
from .core import SystemSpec
from .transform import _output_perm

try:
    from . import _kernel
except ImportError:
    _kernel = None


def available_backends() -> dict:
    out = {"numpy": _fallback.vilenkin_transform}
    if _kernel is not None:
        out["cython"] = _kernel.vilenkin_transform
    return out


def run_benchmark(spec: SystemSpec, batch: int = 1, repeat: int = 20, seed: int = 0) -> list[dict]:
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((batch, spec.N)) + 1j * rng.standard_normal((batch, spec.N))
    radices = np.asarray(spec.p, dtype=np.int64)
    perm = _output_perm(spec)
    rows = []
    results = {}
    for name, fn in available_backends().items():
        for op, inverse in (("forward", False), ("inverse", True)):
            results[name, op] = fn(x, radices, perm, inverse)
            best = min(timeit.repeat(lambda: fn(x, radices, perm, inverse), number=1, repeat=repeat))
            rows.append({"backend": name, "op": op, "seconds": best, "N": spec.N, "batch": batch})
    if _kernel is not None:
        for op in ("forward", "inverse"):
            a, b = results["numpy", op], results["cython", op]
            diff = float(np.max(np.abs(a - b)) / np.max(np.abs(a)))
            for r in rows:
                if r["op"] == op:
                    r["max_rel_diff"] = diff
    return rows
