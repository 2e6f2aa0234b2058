"""Time the jitted scoring and simplex kernels against the numpy fallback.

Run:  python3 benchmarks/bench_kernels.py [--repeats 7] [--batch 200]

Both backends are called directly (ignoring the ZEROSUM_NUMBA switch), so
one run reports the real speedup on this machine. Timings are medians
over --repeats passes, each scoring/solving --batch matrices per size.
"""

import argparse
import statistics
import time

import numpy as np

from zerosum._kernels import HAS_NUMBA, exploit_terms_numpy, lp_kernel_numpy
from zerosum.rng import child_seed, generator
from zerosum.solver import MAX_PIVOTS


def make_instances(n, batch, seed=7):
    rng = generator(child_seed(seed, n))
    mats = [rng.random((n, n)) * 2.0 - 1.0 for _ in range(batch)]
    pairs = []
    for _ in range(batch):
        p = rng.random(n)
        q = rng.random(n)
        pairs.append((p / p.sum(), q / q.sum()))
    shifted = [m - m.min() + 1.0 for m in mats]
    return mats, pairs, shifted


def time_median(fn, repeats):
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=7)
    ap.add_argument("--batch", type=int, default=200)
    ap.add_argument("--sizes", default="4,8,16,32")
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    if not HAS_NUMBA:
        print("numba is not importable here; only the numpy backend can run.")
        return

    from zerosum._kernels import exploit_terms_numba, lp_kernel_numba

    # trigger (or load the cached) JIT compilation outside the timed region
    warm, warm_pairs, warm_shifted = make_instances(4, 1)
    exploit_terms_numba(warm[0], *warm_pairs[0])
    lp_kernel_numba(warm_shifted[0], MAX_PIVOTS)

    header = (
        f"{'n':>4} | {'score jit':>10} {'score np':>10} {'x':>6} | "
        f"{'lp jit':>10} {'lp np':>10} {'x':>6}"
    )
    print(f"batch={args.batch}, repeats={args.repeats}, median seconds per batch")
    print(header)
    print("-" * len(header))
    for n in sizes:
        mats, pairs, shifted = make_instances(n, args.batch)

        def score(kernel):
            def run():
                for m, (p, q) in zip(mats, pairs):
                    kernel(m, p, q)
            return run

        def solve(kernel):
            def run():
                for m in shifted:
                    kernel(m, MAX_PIVOTS)
            return run

        s_jit = time_median(score(exploit_terms_numba), args.repeats)
        s_np = time_median(score(exploit_terms_numpy), args.repeats)
        l_jit = time_median(solve(lp_kernel_numba), args.repeats)
        l_np = time_median(solve(lp_kernel_numpy), args.repeats)
        print(
            f"{n:>4} | {s_jit:>10.4f} {s_np:>10.4f} {s_np / s_jit:>5.1f}x | "
            f"{l_jit:>10.4f} {l_np:>10.4f} {l_np / l_jit:>5.1f}x"
        )


if __name__ == "__main__":
    main()
