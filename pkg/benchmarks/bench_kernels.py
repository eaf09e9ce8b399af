"""Timing comparison of the jitted kernels against the pure numpy fallback.

Runs each workload twice: once in this process (jit on, unless FINGEO_NO_JIT
is already set) and once in a subprocess with FINGEO_NO_JIT=1. Compile time
is excluded by a warmup pass.

Usage: python3 benchmarks/bench_kernels.py
"""

import json
import os
import subprocess
import sys
import time


def run_workloads() -> dict:
    import numpy as np

    import fingeo
    from fingeo import linalg
    from fingeo.autcount import automorphism_group_order
    from fingeo.fields import GF
    from fingeo.xgeom import build_x

    results = {"jit": fingeo.JIT_ENABLED}

    F = GF.prime(3)
    rng = np.random.default_rng(99)
    mats = np.ascontiguousarray(rng.integers(0, 3, size=(100_000, 4, 6)))
    linalg.rank_batch(F, mats[:100])  # warmup / compile
    start = time.perf_counter()
    ranks = linalg.rank_batch(F, mats)
    results["rank_batch_100k_4x6"] = time.perf_counter() - start
    results["rank_batch_checksum"] = int(ranks.sum())

    small = build_x(1, 2, GF.prime(2))
    big = build_x(1, 2, GF.prime(3))
    automorphism_group_order(small)  # warmup / compile
    start = time.perf_counter()
    order = automorphism_group_order(big)
    results["aut_group_x_1_2_3"] = time.perf_counter() - start
    results["aut_group_order"] = order
    return results


def main() -> int:
    if "--child" in sys.argv:
        print(json.dumps(run_workloads()))
        return 0

    here = run_workloads()
    env = dict(os.environ, FINGEO_NO_JIT="1")
    proc = subprocess.run(
        [sys.executable, os.path.abspath(__file__), "--child"],
        capture_output=True,
        text=True,
        env=env,
    )
    if proc.returncode != 0:
        sys.stderr.write(proc.stderr)
        return 1
    other = json.loads(proc.stdout.strip().splitlines()[-1])
    if here["jit"] == other["jit"]:
        sys.stderr.write("both runs used the same kernel path; nothing to compare\n")
        return 1
    jit, plain = (here, other) if here["jit"] else (other, here)
    assert jit["jit"] and not plain["jit"]
    assert jit["rank_batch_checksum"] == plain["rank_batch_checksum"]
    assert jit["aut_group_order"] == plain["aut_group_order"]

    print(f"{'workload':<24} {'jit (s)':>10} {'numpy (s)':>10} {'speedup':>8}")
    for key in ("rank_batch_100k_4x6", "aut_group_x_1_2_3"):
        tj, tp = jit[key], plain[key]
        print(f"{key:<24} {tj:>10.4f} {tp:>10.4f} {tp / tj:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
