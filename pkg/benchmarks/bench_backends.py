#!/usr/bin/env python3
"""Benchmark the compiled polynomial kernel against the pure-Python fallback.

Runs each workload in a subprocess per backend (the kernel is chosen at
import time) and prints a comparison table.

    python3 benchmarks/bench_backends.py            # both backends
    python3 benchmarks/bench_backends.py --inner    # one backend, used internally
"""

import argparse
import json
import os
import random
import subprocess
import sys
import time


def bench_kernel_mul(reps=40000):
    from klvwb.laurent import LaurentPoly

    rng = random.Random(12345)
    polys = [
        LaurentPoly({rng.randint(-6, 6): rng.randint(-9, 9) for _ in range(5)})
        for _ in range(64)
    ]
    start = time.perf_counter()
    acc = LaurentPoly.zero()
    for i in range(reps):
        a = polys[i % 64]
        b = polys[(i * 7 + 3) % 64]
        acc = a * b
    return time.perf_counter() - start


def bench_kl_basis(label="C3"):
    from klvwb.coxeter import build_system
    from klvwb.hecke import kl_basis

    sys_ = build_system(label)
    start = time.perf_counter()
    kl_basis(sys_)
    return time.perf_counter() - start


def bench_klv_table(name="hecke-regular:A3"):
    from klvwb.datum import builtin_datum
    from klvwb.klv import klv_table

    d = builtin_datum(name)
    start = time.perf_counter()
    klv_table(d)
    return time.perf_counter() - start


def bench_check_suites(name="hecke-regular:A3"):
    from klvwb.checks import run_check_suites
    from klvwb.datum import builtin_datum

    d = builtin_datum(name)
    start = time.perf_counter()
    report = run_check_suites(d)
    assert report.ok
    return time.perf_counter() - start


WORKLOADS = {
    "kernel-mul (40k products)": bench_kernel_mul,
    "kl-basis C3": bench_kl_basis,
    "klv-table hecke-regular:A3": bench_klv_table,
    "check-suites hecke-regular:A3": bench_check_suites,
}


def run_inner():
    import klvwb

    results = {"backend": klvwb.kernel_backend()}
    for name, fn in WORKLOADS.items():
        results[name] = fn()
    print(json.dumps(results))


def run_outer():
    rows = {}
    for pure in (False, True):
        env = dict(os.environ)
        if pure:
            env["KLVWB_PURE_PYTHON"] = "1"
        else:
            env.pop("KLVWB_PURE_PYTHON", None)
        out = subprocess.run(
            [sys.executable, __file__, "--inner"],
            capture_output=True,
            text=True,
            env=env,
            check=True,
        )
        data = json.loads(out.stdout)
        rows[data.pop("backend")] = data
    if set(rows) != {"compiled", "pure"}:
        print("warning: compiled kernel unavailable; timings are pure-only")
    name_w = max(len(n) for n in WORKLOADS)
    print(f"{'workload'.ljust(name_w)}  {'pure':>9}  {'compiled':>9}  {'speedup':>8}")
    for name in WORKLOADS:
        pure_t = rows.get("pure", {}).get(name)
        fast_t = rows.get("compiled", {}).get(name)
        ratio = f"{pure_t / fast_t:6.2f}x" if pure_t and fast_t else "     n/a"
        pure_s = f"{pure_t:8.3f}s" if pure_t is not None else "     n/a"
        fast_s = f"{fast_t:8.3f}s" if fast_t is not None else "     n/a"
        print(f"{name.ljust(name_w)}  {pure_s}  {fast_s}  {ratio}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument("--inner", action="store_true")
    args = parser.parse_args()
    if args.inner:
        run_inner()
    else:
        run_outer()
