"""Hot loops of the Monte Carlo estimators.

Each kernel has a numba body and a numpy body with the same contract.
``gain_sums`` dispatches to numba unless it is disabled (see ``_accel``); the
two bodies agree to rounding, not bit-for-bit, since numpy sums pairwise and
the jitted loop sums sequentially.  ``count_above`` always sorts, which
measured faster than the jitted scan.
"""
from __future__ import annotations

import math

import numpy as np

from ._accel import HAS_NUMBA, njit


def gain_sums_numpy(u: np.ndarray, n_reflectors: int, relay: bool) -> np.ndarray:
    """Per-row sum of Rayleigh gains built from uniforms ``u`` in (0, 1].

    Row layout is ``n_reflectors`` columns for the AP case and
    ``[g_r uniforms | g_c uniforms]`` (``2 * n_reflectors`` columns) for the relay.
    """
    g = np.sqrt(-2.0 * np.log(u))
    if relay:
        return (g[:, :n_reflectors] * g[:, n_reflectors:]).sum(axis=1)
    return g[:, :n_reflectors].sum(axis=1)


@njit(cache=True, nogil=True)
def _gain_sums_jit(u, n_reflectors, relay):
    n = u.shape[0]
    out = np.empty(n)
    for i in range(n):
        acc = 0.0
        if relay:
            for k in range(n_reflectors):
                acc += math.sqrt(-2.0 * math.log(u[i, k])) * math.sqrt(-2.0 * math.log(u[i, n_reflectors + k]))
        else:
            for k in range(n_reflectors):
                acc += math.sqrt(-2.0 * math.log(u[i, k]))
        out[i] = acc
    return out


def gain_sums_numba(u: np.ndarray, n_reflectors: int, relay: bool) -> np.ndarray:
    return _gain_sums_jit(np.ascontiguousarray(u), int(n_reflectors), bool(relay))


def count_above_numpy(sorted_values: np.ndarray, thresholds: np.ndarray) -> np.ndarray:
    """Number of entries strictly greater than each threshold (input sorted ascending)."""
    idx = np.searchsorted(sorted_values, thresholds, side="right")
    return sorted_values.size - idx


@njit(cache=True, nogil=True)
def _count_above_jit(values, thresholds):
    out = np.zeros(thresholds.size, dtype=np.int64)
    for i in range(values.size):
        v = values[i]
        for j in range(thresholds.size):
            if v > thresholds[j]:
                out[j] += 1
    return out


def count_above_numba(values: np.ndarray, thresholds: np.ndarray) -> np.ndarray:
    return _count_above_jit(np.ascontiguousarray(values, dtype=np.float64),
                            np.ascontiguousarray(thresholds, dtype=np.float64))


if HAS_NUMBA:
    gain_sums = gain_sums_numba
else:
    gain_sums = gain_sums_numpy


def count_above(values: np.ndarray, thresholds) -> np.ndarray:
    """Count ``values > t`` for every ``t`` in ``thresholds``."""
    thresholds = np.atleast_1d(np.asarray(thresholds, dtype=np.float64))
    # one sort beats the jitted scan even for a handful of thresholds
    # (benchmarks/bench_kernels.py), so numba is not used here
    return count_above_numpy(np.sort(values), thresholds)
