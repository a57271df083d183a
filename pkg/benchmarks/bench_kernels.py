"""Time the numba and numpy kernel backends on one MC block.

    python3 benchmarks/bench_kernels.py [--reps 20]

Also times a full 10^5-sample detection curve under whichever backend is
active (set RIS_SENSING_DISABLE_NUMBA=1 to force numpy).
"""
import argparse
import timeit

import numpy as np

from ris_sensing import ChannelParams, RisConfigKind, RngStream, backend, kernels, montecarlo
from ris_sensing._accel import HAS_NUMBA


def best(fn, reps):
    return min(timeit.repeat(fn, number=1, repeat=reps))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--reps", type=int, default=20)
    ap.add_argument("--rows", type=int, default=montecarlo.BLOCK_SIZE)
    args = ap.parse_args()

    u = 1.0 - np.random.default_rng(0).random((args.rows, 64))
    print(f"active backend: {backend()}  rows={args.rows}  reps={args.reps}")
    print(f"{'kernel':<22}{'numpy ms':>10}{'numba ms':>10}{'speedup':>9}")
    for name, n, relay in (("gain_sums ap N=32", 32, False), ("gain_sums relay N=32", 32, True)):
        t_np = best(lambda: kernels.gain_sums_numpy(u, n, relay), args.reps)
        if HAS_NUMBA:
            kernels.gain_sums_numba(u, n, relay)  # compile
            t_nb = best(lambda: kernels.gain_sums_numba(u, n, relay), args.reps)
            print(f"{name:<22}{t_np * 1e3:>10.2f}{t_nb * 1e3:>10.2f}{t_np / t_nb:>8.1f}x")
        else:
            print(f"{name:<22}{t_np * 1e3:>10.2f}{'-':>10}{'-':>9}")

    v = np.random.default_rng(1).normal(size=montecarlo.DEFAULT_SAMPLES)
    thr = np.array([-1.0, 0.0, 1.0])
    t_np = best(lambda: kernels.count_above_numpy(np.sort(v), thr), args.reps)
    if HAS_NUMBA:
        kernels.count_above_numba(v, thr)
        t_nb = best(lambda: kernels.count_above_numba(v, thr), args.reps)
        print(f"{'count_above 3 thr':<22}{t_np * 1e3:>10.2f}{t_nb * 1e3:>10.2f}{t_np / t_nb:>8.1f}x")

    params = ChannelParams(32)
    y = np.linspace(20.0, 80.0, 13)
    curve = best(lambda: montecarlo.mc_p_detection_curve(params, y, RisConfigKind.RELAY,
                                                         montecarlo.DEFAULT_SAMPLES, RngStream(0), workers=1), 3)
    print(f"relay N=32 detection curve, 1e5 samples, {backend()}: {curve * 1e3:.1f} ms")


if __name__ == "__main__":
    main()
