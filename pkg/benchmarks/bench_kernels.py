"""Time the compiled and numpy kernels on the same inputs and check they agree.

    python benchmarks/bench_kernels.py --n 6 8 10 --repeat 3
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from pieceperm import _backend, spectra
from pieceperm.constructions import corollary1
from pieceperm.funcrep import AffineMap, LutFunction
from pieceperm.gf2n import make_field

KERNELS = {
    "ddt": lambda f, b: spectra.ddt(f, full=True, backend=b).table,
    "walsh": lambda f, b: spectra.walsh(f, full=True, backend=b).table,
    "bct": lambda f, b: spectra.bct(f, full=True, backend=b).table,
}


def sample(n: int) -> LutFunction:
    spec = make_field(n, s=2)
    if n % 2 == 0 and (n // 2) % 2 == 1:
        return corollary1(spec, 2, 2, AffineMap(spec, 2, (spec.omega, 0), 0))
    rng = np.random.default_rng(n)
    return LutFunction(spec, rng.permutation(spec.order))


def best_of(fn, repeat: int) -> tuple[float, np.ndarray]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, nargs="+", default=[6, 8, 10])
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    backends = _backend.available()
    print(f"backends available: {', '.join(backends)}")
    print(f"{'n':>3} {'kernel':>6} " + " ".join(f"{b + ' [s]':>12}" for b in backends) + f"{'speedup':>9}")
    for n in args.n:
        f = sample(n)
        for name, run in KERNELS.items():
            times, outs = [], []
            for b in backends:
                t, out = best_of(lambda: run(f, b), args.repeat)
                times.append(t)
                outs.append(out)
            if any(not np.array_equal(outs[0], o) for o in outs[1:]):
                raise SystemExit(f"backend mismatch for {name} at n={n}")
            speed = f"{times[-1] / times[0]:8.1f}x" if len(times) > 1 else ""
            print(f"{n:>3} {name:>6} " + " ".join(f"{t:12.4f}" for t in times) + f" {speed}")


if __name__ == "__main__":
    main()
