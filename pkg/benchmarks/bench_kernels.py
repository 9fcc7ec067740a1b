"""Compare the compiled and NumPy kernel backends.

Two views: microbenchmarks of the congruence kernel itself, and one
end-to-end steerable-weight solve per backend (the backend is chosen at
import time, so the solve runs in a subprocess with QSCRAMBLE_PURE_PY
set or cleared).

Run:  python3 benchmarks/bench_kernels.py [--dim 16] [--repeat 5]
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))


def bench_congruence(repeat: int) -> None:
    from qscramble.sdp import _kernels_py
    try:
        from qscramble.sdp import _kernels_c
    except ImportError:
        print("compiled backend not built; microbenchmark skipped")
        return
    rng = np.random.default_rng(0)
    print(f"{'size':>6} {'numpy (ms)':>12} {'cython (ms)':>12} {'speedup':>9}")
    for d in (4, 8, 12, 16, 24):
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        ref = _kernels_py.congruence_rep(a)
        got = _kernels_c.congruence_rep(a)
        assert np.allclose(ref, got, atol=1e-12)
        times = {}
        for name, fn in (("numpy", _kernels_py.congruence_rep),
                         ("cython", _kernels_c.congruence_rep)):
            best = min(
                _time_one(fn, a) for _ in range(repeat))
            times[name] = best
        print(f"{d:>6} {times['numpy'] * 1e3:>12.3f} "
              f"{times['cython'] * 1e3:>12.3f} "
              f"{times['numpy'] / times['cython']:>8.2f}x")


def _time_one(fn, a) -> float:
    n = 1
    while True:
        start = time.perf_counter()
        for _ in range(n):
            fn(a)
        dt = time.perf_counter() - start
        if dt > 0.02:
            return dt / n
        n *= 4


_SOLVE_SNIPPET = """
import time
import numpy as np
from qscramble.sdp import BACKEND
from qscramble.models import haar_random_unitary
from qscramble.steering import MeasurementSet, encode_and_evolve, \\
    reduce_assemblage, temporal_steerable_weight
n = {n}
rng = np.random.default_rng(1)
asm = reduce_assemblage(
    encode_and_evolve(haar_random_unitary(2 ** n, rng), MeasurementSet.pauli()),
    tuple(f"q{{i}}" for i in range(1, n)))
temporal_steerable_weight(asm)   # warm caches
start = time.perf_counter()
w = temporal_steerable_weight(asm)
print(f"  backend {{BACKEND:>6}}: weight {{w:.6f}} in "
      f"{{time.perf_counter() - start:.2f}}s")
"""


def bench_solve(dim: int) -> None:
    n = dim.bit_length()
    print(f"full steerable-weight solve, member dimension {dim}:")
    sys.stdout.flush()
    for pure in (False, True):
        env = dict(os.environ)
        env.pop("QSCRAMBLE_PURE_PY", None)
        if pure:
            env["QSCRAMBLE_PURE_PY"] = "1"
        subprocess.run([sys.executable, "-c", _SOLVE_SNIPPET.format(n=n)],
                       env=env, check=True)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dim", type=int, default=16,
                        help="member dimension of the end-to-end solve")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    bench_congruence(args.repeat)
    bench_solve(args.dim)


if __name__ == "__main__":
    main()
