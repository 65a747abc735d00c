"""Compare the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_core.py --repeat 5
"""

import argparse
import time

import numpy as np

from mollipath import _fallback
from mollipath.kernel import BUMP

try:
    from mollipath import _core
except ImportError:
    _core = None

C1 = BUMP.normalization


def _cases(n_samples, n_points, seed):
    rng = np.random.default_rng(seed)
    verts = np.cumsum(rng.uniform(-1, 1, size=(n_points, 3)), axis=0)
    ts = np.linspace(0, n_points - 1, n_samples)
    u = np.linspace(-1.1, 1.1, n_samples)
    return {
        "bump_cdf": lambda m: m.bump_cdf(u, C1, 1e-13, 40),
        "convolve order 0": lambda m: m.polyline_convolve(verts, False, [0.3, 0.6, 0.9], ts,
                                                          0, C1, 1e-10, 40),
        "convolve order 2": lambda m: m.polyline_convolve(verts, False, [0.3, 0.6, 0.9], ts,
                                                          2, C1, 1e-10, 40),
    }


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=2000)
    ap.add_argument("--points", type=int, default=12)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if _core is None:
        print("compiled extension not built; only the fallback is timed")
    print(f"{'case':<18} {'python [s]':>11} {'compiled [s]':>13} {'speedup':>8} {'max diff':>10}")
    for name, run in _cases(args.samples, args.points, args.seed).items():
        t_py, ref = best_of(lambda: run(_fallback), args.repeat)
        if _core is None:
            print(f"{name:<18} {t_py:11.4f}")
            continue
        t_c, got = best_of(lambda: run(_core), args.repeat)
        diff = float(np.max(np.abs(np.asarray(got) - np.asarray(ref))))
        print(f"{name:<18} {t_py:11.4f} {t_c:13.4f} {t_py / t_c:8.1f} {diff:10.2e}")


if __name__ == "__main__":
    main()
