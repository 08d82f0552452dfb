"""Benchmark the compiled tridiagonal kernel against the pure-Python twin.

Run as ``python benchmarks/bench_kernels.py``; forcing the fallback in a
subprocess keeps both implementations importable side by side.
"""

import json
import os
import subprocess
import sys
import time

import numpy as np

SIZES = (65, 257, 1025, 4097, 16385)
REPEATS = 200


def bench_current():
    from kwcflow._kernels import IMPLEMENTATION, thomas_solve

    rng = np.random.default_rng(42)
    out = {"implementation": IMPLEMENTATION, "timings": {}}
    for n in SIZES:
        diag = 2.0 + rng.random(n)
        off = -rng.random(n - 1)
        rhs = rng.standard_normal(n)
        thomas_solve(off, diag, off, rhs)  # warm up
        t0 = time.perf_counter()
        for _ in range(REPEATS):
            thomas_solve(off, diag, off, rhs)
        out["timings"][n] = (time.perf_counter() - t0) / REPEATS
    return out


def main():
    if os.environ.get("_KWCFLOW_BENCH_CHILD") == "1":
        print(json.dumps(bench_current()))
        return

    results = []
    for force in ("0", "1"):
        env = dict(os.environ, _KWCFLOW_BENCH_CHILD="1",
                   KWCFLOW_FORCE_PYTHON_KERNELS=force)
        proc = subprocess.run([sys.executable, __file__], env=env,
                              capture_output=True, text=True, check=True)
        results.append(json.loads(proc.stdout))

    fast, slow = results
    print(f"{'n':>8} {fast['implementation']:>12} {slow['implementation']:>12} "
          f"{'speedup':>9}")
    for n in SIZES:
        a = fast["timings"][str(n)]
        b = slow["timings"][str(n)]
        print(f"{n:>8} {a * 1e6:>10.1f}us {b * 1e6:>10.1f}us {b / a:>8.1f}x")


if __name__ == "__main__":
    main()
