"""Seeded Monte Carlo estimators for the sensing probabilities.

Samples are drawn in fixed-size blocks; block ``b`` always uses
``rng.substream(b)``, so the estimate is the same whether blocks run on one
thread or many.  Estimates are plain exceedance counts with binomial
standard errors.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import analytic, kernels
from .analytic import MetricBundle
from .model import (
    ChannelParams,
    RisConfigKind,
    RngStream,
    SecondaryNetParams,
    SensingParams,
    sample_h0_energy,
)

BLOCK_SIZE = 1 << 14
DEFAULT_SAMPLES = 100_000


@dataclass(frozen=True)
class McEstimate:
    p_hat: float
    n_samples: int
    std_err: float
    count: int

    @classmethod
    def from_count(cls, count: int, n_samples: int) -> "McEstimate":
        if n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        p = count / n_samples
        return cls(p_hat=p, n_samples=int(n_samples), std_err=math.sqrt(p * (1.0 - p) / n_samples), count=int(count))


def _blocks(n_samples: int) -> list[int]:
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    full, rest = divmod(n_samples, BLOCK_SIZE)
    return [BLOCK_SIZE] * full + ([rest] if rest else [])


def _run_blocks(fn, rng: RngStream, n_samples: int, workers: int | None) -> np.ndarray:
    sizes = _blocks(n_samples)
    jobs = [(rng.substream(b), m) for b, m in enumerate(sizes)]
    if workers is None:
        workers = os.cpu_count() or 1
    if workers <= 1 or len(jobs) == 1:
        parts = [fn(sub, m) for sub, m in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda job: fn(*job), jobs))
    return np.concatenate(parts)


def h1_samples(params: ChannelParams, kind: RisConfigKind, n_samples: int, rng: RngStream,
               workers: int | None = None) -> np.ndarray:
    """``n_samples`` phase-matched SNR realisations under H1, in block order."""
    relay = kind is RisConfigKind.RELAY
    n_refl = params.n_reflectors
    width = 2 * n_refl if relay else n_refl
    scale = params.path_gain(kind)

    def block(sub, m):
        return scale * kernels.gain_sums(sub.uniform_open0((m, width)), n_refl, relay)

    return _run_blocks(block, rng, n_samples, workers)


def h0_samples(n0: float, n_samples: int, rng: RngStream, workers: int | None = None) -> np.ndarray:
    return _run_blocks(lambda sub, m: sample_h0_energy(n0, sub, m), rng, n_samples, workers)


def _estimates(samples: np.ndarray, thresholds) -> list[McEstimate]:
    counts = kernels.count_above(samples, thresholds)
    return [McEstimate.from_count(int(c), samples.size) for c in counts]


def mc_p_false_alarm_curve(thresholds, n0: float, n_samples: int, rng: RngStream,
                           workers: int | None = None) -> list[McEstimate]:
    """False-alarm estimates at several thresholds from one shared H0 sample set."""
    return _estimates(h0_samples(n0, n_samples, rng, workers), thresholds)


def mc_p_false_alarm(y_th: float, n0: float, n_samples: int = DEFAULT_SAMPLES, rng: RngStream | None = None,
                     workers: int | None = None) -> McEstimate:
    rng = rng if rng is not None else RngStream(0)
    return mc_p_false_alarm_curve([y_th], n0, n_samples, rng, workers)[0]


def mc_p_detection_curve(params: ChannelParams, thresholds, kind: RisConfigKind, n_samples: int,
                         rng: RngStream, workers: int | None = None) -> list[McEstimate]:
    """Detection estimates at several thresholds from one shared H1 sample set."""
    return _estimates(h1_samples(params, kind, n_samples, rng, workers), thresholds)


def mc_p_detection(params: ChannelParams, y_th: float, kind: RisConfigKind, n_samples: int = DEFAULT_SAMPLES,
                   rng: RngStream | None = None, workers: int | None = None) -> McEstimate:
    rng = rng if rng is not None else RngStream(0)
    return mc_p_detection_curve(params, [y_th], kind, n_samples, rng, workers)[0]


def mc_metric_bundle(params: ChannelParams, sensing: SensingParams, net: SecondaryNetParams,
                     kind: RisConfigKind, n_samples: int = DEFAULT_SAMPLES, rng: RngStream | None = None,
                     workers: int | None = None) -> MetricBundle:
    """Metrics composed from simulated ``p_f``/``p_d``; ``throughput_asym`` is analytic."""
    rng = rng if rng is not None else RngStream(0)
    pf = mc_p_false_alarm(sensing.y_th, params.n0, n_samples, rng.substream(0), workers)
    pd = mc_p_detection(params, sensing.y_th, kind, n_samples, rng.substream(1), workers)
    pt = analytic.p_transmission(pd.p_hat, pf.p_hat, sensing.alpha)
    return MetricBundle(
        p_f=pf.p_hat,
        p_d=pd.p_hat,
        p_m=1.0 - pd.p_hat,
        p_t=pt,
        throughput=analytic.throughput(net, pt),
        throughput_asym=analytic.throughput_asymptotic(params, sensing, net, kind, analytic.FormulaMode.PHYSICAL),
    )
