#!/usr/bin/env python3
"""Time the numba kernels against their numpy twins.

Both backends are imported directly, so the comparison runs in one process
regardless of DISCRETE_HARDY_DISABLE_JIT.  The first numba call of each
kernel is a warm-up that pays the compilation cost and is not timed.

    python3 benchmarks/bench_backends.py --sizes 256 1024 4096 --repeats 5
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from discrete_hardy import _numba_kernels as nb
from discrete_hardy import _numpy_kernels as npk


def best_seconds(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def workloads(n, rng):
    """(name, callable taking a backend module) pairs at problem size n."""
    values = rng.uniform(-1.0, 1.0, n)
    js = np.arange(-n, n + 1, dtype=np.int64)
    absvals = np.abs(values)
    return [
        ("hilbert_window", lambda k: k.hilbert_window(-n // 2, values, js)),
        ("frac_window", lambda k: k.frac_window(-n // 2, values, 0.35, 0.35, js)),
        ("maximal_window", lambda k: k.maximal_window(-n // 2, absvals, js)),
        ("frac_abs_power_sum", lambda k: k.frac_abs_power_sum(-8, values[:17], 0.5, 0.5, 1.0, -100 * n, 100 * n)),
        ("ce_term_sum", lambda k: k.ce_term_sum(0.5, 2, 1000 * n)),
    ]


def run(sizes, repeats, seed, check):
    rng = np.random.default_rng(seed)
    rows = []
    for n in sizes:
        for name, job in workloads(n, rng):
            ref = job(npk)
            got = job(nb)  # warm-up and compile
            if check:
                a, b = np.atleast_1d(np.asarray(got, dtype=float)), np.atleast_1d(np.asarray(ref, dtype=float))
                scale = 1.0 + float(np.max(np.abs(b)))
                if not np.allclose(a, b, rtol=1e-10, atol=1e-12 * scale):
                    raise SystemExit(f"{name} at n={n}: backends disagree")
            t_np = best_seconds(lambda: job(npk), repeats)
            t_nb = best_seconds(lambda: job(nb), repeats)
            rows.append({"kernel": name, "size": n, "numpy_s": t_np, "numba_s": t_nb, "speedup": t_np / t_nb})
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[256, 1024, 4096])
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--no-check", action="store_true", help="skip the agreement check")
    ap.add_argument("--json", action="store_true", help="emit JSON instead of a table")
    args = ap.parse_args(argv)

    rows = run(args.sizes, max(1, args.repeats), args.seed, not args.no_check)
    if args.json:
        json.dump(rows, sys.stdout, indent=2)
        sys.stdout.write("\n")
        return
    print(f"{'kernel':<20}{'size':>8}{'numpy [s]':>14}{'numba [s]':>14}{'speedup':>10}")
    for r in rows:
        print(f"{r['kernel']:<20}{r['size']:>8}{r['numpy_s']:>14.6f}{r['numba_s']:>14.6f}{r['speedup']:>10.1f}")


if __name__ == "__main__":
    main()
