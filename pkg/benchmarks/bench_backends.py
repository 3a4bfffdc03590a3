"""Timing comparison of the numba and numpy backends.

Runs the two hot loops (Hermite tables and the kernel tau sums) under
both implementations and prints a small table.  Usage:

    python benchmarks/bench_backends.py [--repeat N]

The numba rows include a separate warmup call so jit compilation is not
billed to the measurement.
"""

import argparse
import time

import numpy as np

from hlab import backend


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(7)
    x = rng.standard_normal(20000)
    rho = rng.uniform(0.0, 6.0, 3000)
    s = rng.uniform(-3.0, 3.0, 3000)
    tau = np.linspace(-12.0, 12.0, 320)
    w = np.full(tau.size, 24.0 / tau.size)
    from hlab.special import sinh_ratio_log, tau_over_tanh2
    logratio = sinh_ratio_log(tau, 1)
    t2t = tau_over_tanh2(tau)
    inv2z = 1.0 / (2.0 * complex(0.0, -2.0))

    cases = {
        "hermite_table(60)": lambda: backend.hermite_table(60, x),
        "kernel_tau_sum": lambda: backend.kernel_tau_sum(
            rho, s, inv2z, tau, w, logratio, t2t),
    }

    names = ["numpy"]
    if backend.NUMBA_AVAILABLE:
        names.append("numba")
    else:
        print("numba not importable; timing numpy only")

    print("%-22s" % "case" + "".join("%12s" % n for n in names))
    for label, fn in cases.items():
        row = "%-22s" % label
        for name in names:
            backend.set_backend(name)
            fn()  # warmup / jit
            row += "%12.4f" % _time(fn, args.repeat)
        print(row)
    backend.set_backend(None)


if __name__ == "__main__":
    main()
