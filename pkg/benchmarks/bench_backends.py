"""Time the numba kernels against the pure-numpy fallback.

Usage:
    python3 benchmarks/bench_backends.py [--lanes N] [--repeat R] [--end-to-end]

Kernel timings call both backends in one process; the end-to-end run
certifies a job in a subprocess per backend, since the backend is fixed at
import through MORANIMG_BACKEND.
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import tempfile
import time
from dataclasses import dataclass

import numpy as np

from moranimg.kernels import ENV_VAR, get_backend


@dataclass
class Timing:
    kernel: str
    numpy_s: float
    numba_s: float

    @property
    def speedup(self) -> float:
        return self.numpy_s / self.numba_s if self.numba_s > 0 else float("inf")


def _boxes(rng: np.random.Generator, n: int, lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
    a = rng.uniform(lo, hi, n)
    b = rng.uniform(lo, hi, n)
    return np.minimum(a, b), np.maximum(a, b)


def _cases(n: int):
    rng = np.random.default_rng(7)
    alo, ahi = _boxes(rng, n, -3, 3)
    blo, bhi = _boxes(rng, n, -3, 3)
    plo, phi = _boxes(rng, n, 0.1, 3)
    mlo = np.sort(rng.uniform(0, 1, n))
    mhi = mlo + rng.uniform(0, 1e-4, n)
    return {
        "add": lambda k: k.add(alo, ahi, blo, bhi),
        "mul": lambda k: k.mul(alo, ahi, blo, bhi),
        "div": lambda k: k.div(alo, ahi, plo, phi),
        "pow_int(3)": lambda k: k.pow_int(alo, ahi, 3),
        "pow_real(0.5)": lambda k: k.pow_real(plo, phi, 0.5),
        "sin": lambda k: k.sin(alo, ahi),
        "exp": lambda k: k.exp(alo, ahi),
        "log": lambda k: k.log(plo, phi),
        "merge_sorted": lambda k: k.merge_sorted(mlo, mhi, 1e-5),
    }


def _best(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def bench_kernels(n: int, repeat: int) -> list[Timing]:
    np_k, nb_k = get_backend("numpy"), get_backend("numba")
    out = []
    for name, call in _cases(n).items():
        call(nb_k)  # compile outside the timed region
        a, b = call(np_k), call(nb_k)
        for x, y in zip(a, b):
            # arithmetic agrees exactly; transcendentals within a couple of ulps
            np.testing.assert_allclose(x, y, rtol=1e-15, atol=0, equal_nan=True)
        out.append(Timing(name, _best(lambda: call(np_k), repeat), _best(lambda: call(nb_k), repeat)))
    return out


JOB = {
    "schema": "moranimg.job/1",
    "function": "sin(-0.5*x*y) + 12*x + 6*y",
    "fractal1": {"kind": "ifs", "lambda": "1/3", "a": ["0", "2/3"]},
    "image": {"k_max": 9},
}


def bench_end_to_end() -> dict[str, float]:
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "job.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(JOB, fh)
        out = {}
        for name in ("numpy", "numba"):
            env = dict(os.environ, **{ENV_VAR: name})
            # warm run first so numba's on-disk compile is not billed
            cmd = [sys.executable, "-m", "moranimg", "image", "--job", path]
            subprocess.run(cmd, env=env, check=True, capture_output=True)
            t = time.perf_counter()
            subprocess.run(cmd, env=env, check=True, capture_output=True)
            out[name] = time.perf_counter() - t
        return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lanes", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--end-to-end", action="store_true")
    args = ap.parse_args()

    print(f"{'kernel':<15}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}   ({args.lanes} lanes)")
    for t in bench_kernels(args.lanes, args.repeat):
        print(f"{t.kernel:<15}{t.numpy_s * 1e3:>12.2f}{t.numba_s * 1e3:>12.2f}{t.speedup:>10.2f}")
    if args.end_to_end:
        e = bench_end_to_end()
        print(f"\nimage job (example 10, k_max 9): numpy {e['numpy']:.2f}s, numba {e['numba']:.2f}s")


if __name__ == "__main__":
    main()
