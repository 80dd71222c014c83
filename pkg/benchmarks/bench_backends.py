"""Time the numba and numpy kernel backends on the hot paths.

    python3 benchmarks/bench_backends.py [--repeat N]
"""

import argparse
import time

import numpy as np

from qkpr import _kernels
from qkpr.channels import DEPOLARIZING, make_channel
from qkpr.engine import GameConfig, deviation_form
from qkpr.states import ghz3
from qkpr.strategies import ANGLE_LOWER, ANGLE_PERIODIC, ANGLE_UPPER


def timed(fn, repeat):
    fn()  # warm-up, includes jit compile
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases():
    rho = ghz3()
    channel = make_channel(DEPOLARIZING, 0.4)
    form = deviation_form(GameConfig(channel=DEPOLARIZING, p=0.4), "alice")
    axes = np.stack([np.linspace(lo, hi, 5, endpoint=not per)
                     for lo, hi, per in zip(ANGLE_LOWER, ANGLE_UPPER, ANGLE_PERIODIC)])
    x0 = 0.5 * (ANGLE_LOWER + ANGLE_UPPER)
    step = (ANGLE_UPPER - ANGLE_LOWER) / 8
    return {
        "kraus_sum (dep, 729 ops)": lambda: _kernels.kraus_sum(channel.packed, rho),
        "form_grid (5^8 points)": lambda: _kernels.form_grid(form, axes),
        "pattern_search (<=20k evals)": lambda: _kernels.pattern_search(
            form, x0, step, ANGLE_LOWER, ANGLE_UPPER, ANGLE_PERIODIC, 1e-9, 20000),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    results = {}
    for name in ("numba", "numpy"):
        prev = _kernels.use_backend(name)
        try:
            results[name] = {label: timed(fn, args.repeat) for label, fn in cases().items()}
        finally:
            _kernels.use_backend(prev)
    print(f"{'kernel':30s} {'numba [s]':>11s} {'numpy [s]':>11s} {'ratio':>7s}")
    for label in results["numba"]:
        a, b = results["numba"][label], results["numpy"][label]
        print(f"{label:30s} {a:11.4f} {b:11.4f} {b / a:7.1f}")


if __name__ == "__main__":
    main()
