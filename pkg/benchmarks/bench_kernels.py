"""Time the numba kernels against the numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel is called once per backend before timing so JIT compilation is
not counted. Also times a short end-to-end coded run in a subprocess per
backend, since the backend is fixed at import time.
"""
from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from mdsmod import kernels
from mdsmod._jit import NUMBA_AVAILABLE
from mdsmod.fec import K7

E2E = (
    "import time; from mdsmod.sim import *; from mdsmod.modem import ModemConfig;"
    "cfg = SimConfig(ModemConfig(2, 4, 1), Pipeline.CODED_LC_SOFT_SPC, max_frames=400, min_errors=10**9);"
    "t = time.perf_counter(); run_point(cfg, 8.0); print(time.perf_counter() - t)"
)


def cases(rng):
    Q = 16
    nxt = ((np.arange(Q)[:, None] + np.arange(Q)[None, :] + 1) % Q).astype(np.int64)
    d = rng.random((20_000, 4, Q))
    pred, out = K7.trellis()
    gains = rng.normal(size=(2048, 4))
    labels = ((np.arange(256)[:, None] >> np.arange(8)) & 1).astype(np.uint8)
    e = rng.normal(0, 5, (4000, 256))
    return {
        "trellis_min": (d, nxt),
        "viterbi_max": (gains, pred, out, True),
        "llr_lse": (e, labels),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--skip-e2e", action="store_true")
    args = ap.parse_args()

    if not NUMBA_AVAILABLE:
        sys.exit("numba is not importable; nothing to compare")
    work = cases(np.random.default_rng(0))
    print(f"{'kernel':<14}{'numba ms':>12}{'numpy ms':>12}{'speedup':>10}")
    for name, call_args in work.items():
        times = {}
        for backend in ("numba", "numpy"):
            fn = kernels.IMPLEMENTATIONS[backend][name]
            fn(*call_args)
            times[backend] = min(timeit.repeat(lambda: fn(*call_args), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<14}{times['numba']:>12.2f}{times['numpy']:>12.2f}{times['numpy'] / times['numba']:>9.1f}x")

    if args.skip_e2e:
        return
    print("\ncoded LC Soft (SPC) run, 400 frames of 1024 bits (includes JIT warm-up for numba):")
    for flag, label in (("0", "numba"), ("1", "numpy")):
        env = dict(os.environ, MDSMOD_DISABLE_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", E2E], env=env, capture_output=True, text=True, check=True)
        print(f"  {label:<6} {float(out.stdout):.2f} s")


if __name__ == "__main__":
    main()
