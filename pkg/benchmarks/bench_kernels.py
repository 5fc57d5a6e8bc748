#!/usr/bin/env python3
"""Benchmark: compiled kernels vs the pure-Python fallback.

Runs each hot kernel on a fixed workload with both backends, verifies they
agree (bit-exact for the integer-driven kernels, 1e-12 relative for the
weight scan), and prints a throughput table.

    python benchmarks/bench_kernels.py [--quick]
"""

import argparse
import time

import numpy as np

from growthlab._backend import HAVE_COMPILED, get_kernels


def timer(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


def bench_corner(mod, rows, cols):
    return timer(mod.corner_value, 12345, 0, 1.0, rows, cols)


def bench_exclusion(mod, n_att, m):
    rng = np.random.default_rng(0)
    eta = (rng.random(m) < 0.5).astype(np.int8)
    eta[0] = 0
    h = np.zeros(m, dtype=np.int64)
    np.cumsum(eta[1:], out=h[1:])
    out, secs = timer(mod.exclusion_attempts, eta, h, 1, 1.0, n_att, 99, 0)
    return (tuple(out), h.sum()), secs


def bench_hammersley(mod, n_particles, n_points):
    rng = np.random.default_rng(1)
    pos = np.sort(rng.random(n_particles) * n_particles)
    xs = np.ascontiguousarray(rng.random(n_points) * n_particles)
    idx = np.empty(n_points, dtype=np.int64)
    out, secs = timer(mod.hammersley_pulls, pos, xs, idx)
    return (out, pos.sum()), secs


def bench_lis(mod, P):
    rng = np.random.default_rng(2)
    ts = np.ascontiguousarray(rng.random(P))
    return timer(mod.lis_strict, ts)


def bench_tail(mod, reps):
    return timer(mod.lis_tail_hits, 7, 0, 8.0, 8.0, 20, reps, 0)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true",
                    help="smaller workloads (CI-sized)")
    args = ap.parse_args()
    if not HAVE_COMPILED:
        raise SystemExit("compiled extension not built; nothing to compare")
    kc, kp = get_kernels(), get_kernels(pure_python=True)
    q = args.quick
    cases = [
        ("corner scan", bench_corner,
         (500, 500) if q else (1500, 1500), "cells",
         (500 * 500) if q else (1500 * 1500)),
        ("exclusion race", bench_exclusion,
         (200_000 if q else 2_000_000, 2001), "attempts",
         200_000 if q else 2_000_000),
        ("hammersley pulls", bench_hammersley,
         (2000, 50_000 if q else 500_000), "points",
         50_000 if q else 500_000),
        ("patience LIS", bench_lis, (100_000 if q else 1_000_000,), "items",
         100_000 if q else 1_000_000),
        ("streaming tail MC", bench_tail, (2_000 if q else 20_000,), "reps",
         2_000 if q else 20_000),
    ]
    print(f"{'kernel':20s} {'compiled':>12s} {'fallback':>12s} "
          f"{'speedup':>8s}  {'throughput (compiled)':>24s}")
    for name, fn, params, unit, work in cases:
        out_c, t_c = fn(kc, *params)
        out_p, t_p = fn(kp, *params)
        if name == "corner scan":
            ok = abs(out_c - out_p) <= 1e-12 * abs(out_c)
        else:
            ok = out_c == out_p
        if not ok:
            raise SystemExit(f"backend mismatch in {name}: {out_c} vs {out_p}")
        rate = work / t_c
        print(f"{name:20s} {t_c:11.4f}s {t_p:11.4f}s {t_p / t_c:7.1f}x "
              f"{rate / 1e6:16.1f} M{unit}/s")
    print("agreement checks passed for all kernels")


if __name__ == "__main__":
    main()
