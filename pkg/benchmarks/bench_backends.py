"""Timing comparison of the two kernel backends.

The four hot kernels are imported from both implementations directly and
timed on pipeline-sized inputs, then one full Christoffel sweep runs per
backend in a subprocess (the backend is frozen at import, so switching
needs a fresh interpreter) to show the end-to-end difference and that the
two backends produce bit-identical numbers.

Run from the repository root:

    python3 benchmarks/bench_backends.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from arcszego import _pykernels as pyk

try:
    from arcszego import _ckernels as cyk
except ImportError:
    cyk = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_cases(rng):
    m = 1 << 18
    a = rng.normal(size=m) + 1j * rng.normal(size=m)
    b = rng.normal(size=m) + 1j * rng.normal(size=m)
    w = rng.uniform(0.5, 1.5, size=m)

    coeffs = (rng.normal(size=1024) + 1j * rng.normal(size=1024)) / 40.0
    u = 0.9 * np.exp(2j * np.pi * rng.uniform(size=4096))

    n = 60
    hess = (rng.normal(size=(n + 1, n)) + 1j * rng.normal(size=(n + 1, n)))
    hess[np.tril_indices(n + 1, -2)[0], np.tril_indices(n + 1, -2)[1]] = 0.0
    for k in range(n):
        hess[k + 1, k] = abs(hess[k + 1, k].real) + 0.5  # real positive
    xi = rng.normal(size=4096) + 1j * rng.normal(size=4096)

    return [
        ("pairwise_sum (2^18)", lambda im: im.pairwise_sum(a)),
        ("wdot         (2^18)", lambda im: im.wdot(w, a, b)),
        ("power series (1024x4096)", lambda im: im.eval_power_series(coeffs, u)),
        ("orthopolys   (n=60, 4096)",
         lambda im: im.eval_orthopolys(hess, 1.0 + 0j, xi, n)),
    ]


def bench_kernels(repeat):
    rng = np.random.default_rng(5)
    print("%-26s %12s %12s %9s" % ("kernel", "python ms", "cython ms", "ratio"))
    for name, call in kernel_cases(rng):
        tp = best_of(lambda: call(pyk), repeat) * 1e3
        if cyk is None:
            print("%-26s %12.3f %12s %9s" % (name, tp, "-", "-"))
            continue
        tc = best_of(lambda: call(cyk), repeat) * 1e3
        print("%-26s %12.3f %12.3f %8.1fx" % (name, tp, tc, tp / tc))


_SWEEP = r"""
import json, sys, time
import numpy as np
from arcszego import BACKEND
from arcszego.experiments import ExperimentConfig, run_widom_sweep
from arcszego.measure import MeasureSpec

cfg = ExperimentConfig(z0=2j, spec=MeasureSpec("quad_bump"),
                       degrees=(10, 20, 40, 80), nodes=4096)
t0 = time.perf_counter()
rep = run_widom_sweep(cfg)
el = time.perf_counter() - t0
bits = [float(r[k]).hex() for r in rep.rows for k in ("lambda", "widom_sq")]
json.dump({"backend": BACKEND, "seconds": el, "bits": bits}, sys.stdout)
"""


def bench_pipeline():
    results = {}
    for backend in ("python", "cython"):
        if backend == "cython" and cyk is None:
            continue
        env = dict(os.environ, ARC_SZEGO_BACKEND=backend)
        out = subprocess.run([sys.executable, "-c", _SWEEP], env=env,
                             capture_output=True, text=True, check=True)
        results[backend] = json.loads(out.stdout)
    print()
    print("full sweep (quad_bump, z0=2i, n<=80, 4096 nodes):")
    for backend, r in results.items():
        print("  %-7s %7.3f s   (backend reports %r)"
              % (backend, r["seconds"], r["backend"]))
    if len(results) == 2:
        same = results["python"]["bits"] == results["cython"]["bits"]
        print("  results bit-identical across backends: %s"
              % ("yes" if same else "NO"))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5,
                    help="timing repetitions per kernel (best is kept)")
    args = ap.parse_args(argv)
    if cyk is None:
        print("compiled backend not importable; timing python only")
    bench_kernels(args.repeat)
    bench_pipeline()


if __name__ == "__main__":
    main()
