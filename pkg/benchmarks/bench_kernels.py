"""Compare the compiled and pure-numpy sum-rate kernels on the workload that
dominates everything else: utility evaluations inside the matching search.

Usage: python benchmarks/bench_kernels.py [drops]
"""

import sys
import time

from pinchsim import (BACKEND, PowerAllocation, SetEvaluator, SystemConfig,
                      implementations, make_deployment, matching_activation,
                      random_matching, stream_rng)


def run_search(kernel, cfg, drops):
    alloc = PowerAllocation.equal(cfg.n_users)
    evals = 0
    start = time.perf_counter()
    for trial in range(drops):
        dep = make_deployment(cfg, stream_rng(cfg.seed, 0, trial))
        ev = SetEvaluator(cfg, dep, alloc, kernel=kernel)
        initial = random_matching(cfg, dep, stream_rng(cfg.seed, 1, trial))
        matching_activation(cfg, dep, alloc, initial, evaluator=ev)
        evals += ev.calls
    return evals, time.perf_counter() - start


def main():
    drops = int(sys.argv[1]) if len(sys.argv) > 1 else 300
    cfg = SystemConfig(d1=20.0, n_users=4, k_antennas=4, l_positions=30,
                       seed=11)
    impls = implementations()
    print(f"matching search, N={cfg.n_users} K={cfg.k_antennas} "
          f"L={cfg.l_positions}, {drops} drops (default backend: {BACKEND})")
    times = {}
    for name in sorted(impls):
        evals, elapsed = run_search(impls[name], cfg, drops)
        times[name] = elapsed
        print(f"  {name:>8}: {elapsed:7.2f} s  "
              f"({evals / elapsed / 1e3:8.1f}k evals/s, {evals} evals)")
    if len(times) == 2:
        print(f"  speedup: {times['python'] / times['compiled']:.1f}x")
    else:
        print("  (extension not built; only the numpy kernel was timed)")


if __name__ == "__main__":
    main()
