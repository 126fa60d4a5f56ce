"""Compare the numba and numpy kernel backends.

    python3 benchmarks/bench_kernels.py --size 1000000 --repeat 5
"""
import argparse
import time

import numpy as np

from hardy_bench import _kernels


def _best(fn, repeat):
    fn()  # warm-up (triggers JIT compilation)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(size, rng):
    r = rng.uniform(0.0, 1.0, size)
    f = rng.normal(size=size) + 1j * rng.normal(size=size)
    w = rng.normal(size=size) + 1j * rng.normal(size=size)
    x = rng.uniform(-1.0, 1.0, (size, 2))
    panels = max(1, size // 21)
    fx = rng.normal(size=(panels, 21))
    hw = rng.uniform(0.1, 1.0, panels)
    v = rng.normal(size=size)
    return {
        "bump": lambda k: k.bump(r, 0.2, 0.8),
        "smooth_step": lambda k: k.smooth_step(r),
        "young_gap": lambda k: k.young_gap(f, w, 3.0),
        "gk21_panels": lambda k: k.gk21_panels(fx, hw),
        "sum_moments": lambda k: k.sum_moments(v),
        "bump_angular": lambda k: k.bump_angular(x, 0.2, 0.8),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--size", type=int, default=10 ** 6)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if _kernels.NUMBA is None:
        print("numba is not installed; nothing to compare")
        return 1
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<14}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}")
    for name, call in cases(args.size, rng).items():
        t_np = _best(lambda: call(_kernels.NUMPY), args.repeat)
        t_nb = _best(lambda: call(_kernels.NUMBA), args.repeat)
        print(f"{name:<14}{1e3 * t_np:>12.2f}{1e3 * t_nb:>12.2f}{t_np / t_nb:>10.2f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
