"""Kernel backend selection.

The compiled extension is preferred; ``PIECEPERM_BACKEND=python`` forces the
numpy fallback, which is also used whenever the extension failed to build.
"""
from __future__ import annotations

import importlib
import os
from concurrent.futures import ThreadPoolExecutor
from types import ModuleType

BACKENDS = ("cython", "python")
_MODULES = {"cython": "pieceperm._ckernels", "python": "pieceperm._pykernels"}


def load(name: str) -> ModuleType:
    if name not in _MODULES:
        raise ValueError(f"unknown backend {name!r}; choose from {BACKENDS}")
    return importlib.import_module(_MODULES[name])


def available() -> list[str]:
    out = []
    for name in BACKENDS:
        try:
            load(name)
        except ImportError:
            continue
        out.append(name)
    return out


def _select() -> tuple[str, ModuleType]:
    forced = os.environ.get("PIECEPERM_BACKEND", "").strip().lower()
    if forced:
        return forced, load(forced)
    try:
        return "cython", load("cython")
    except ImportError:
        return "python", load("python")


BACKEND, kernels = _select()


def get(name: str | None) -> ModuleType:
    return kernels if name is None else load(name)


def run_ranges(work, total_lo: int, total_hi: int, threads: int) -> None:
    """Run ``work(lo, hi)`` over a partition of ``[total_lo, total_hi)`` on a thread pool."""
    threads = max(1, int(threads or 1))
    span = total_hi - total_lo
    if threads == 1 or span < 2 * threads:
        work(total_lo, total_hi)
        return
    step = -(-span // threads)
    bounds = [(lo, min(lo + step, total_hi)) for lo in range(total_lo, total_hi, step)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for fut in [pool.submit(work, lo, hi) for lo, hi in bounds]:
            fut.result()
