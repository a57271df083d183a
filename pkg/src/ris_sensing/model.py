"""Parameter types, the two RIS channel models and seeded sampling.

Gains follow the unit-scale Rayleigh density ``x * exp(-x**2 / 2)``, so
``E[g] = sqrt(pi/2)`` and ``E[g**2] = 2``.  The RIS phases are assumed to be
perfectly matched, which turns the received SNR into a plain sum of gains.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import kernels


class RisConfigKind(enum.Enum):
    ACCESS_POINT = "ap"
    RELAY = "relay"

    @classmethod
    def parse(cls, text: str) -> "RisConfigKind":
        key = text.strip().lower()
        aliases = {"ap": cls.ACCESS_POINT, "access_point": cls.ACCESS_POINT, "accesspoint": cls.ACCESS_POINT,
                   "relay": cls.RELAY, "rel": cls.RELAY}
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown RIS configuration {text!r} (expected 'ap' or 'relay')") from None


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


@dataclass(frozen=True)
class ChannelParams:
    n_reflectors: int = 16
    beta: float = 2.0
    r_c: float = 1.0
    r_r: float = 1.0
    gamma_bar: float = 1.0
    n0: float = 1.0

    def __post_init__(self):
        _require(int(self.n_reflectors) == self.n_reflectors and self.n_reflectors >= 1,
                 "n_reflectors must be a positive integer")
        for name in ("beta", "r_c", "r_r", "gamma_bar", "n0"):
            v = getattr(self, name)
            _require(math.isfinite(v) and v > 0, f"{name} must be positive and finite, got {v!r}")

    def path_gain(self, kind: RisConfigKind) -> float:
        """Large-scale factor multiplying the summed gains: ``gamma_bar * distance**-beta``."""
        if kind is RisConfigKind.ACCESS_POINT:
            return self.gamma_bar * self.r_c ** (-self.beta)
        return self.gamma_bar * (self.r_c * self.r_r) ** (-self.beta)


@dataclass(frozen=True)
class SensingParams:
    y_th: float = 5.0
    alpha: float = 0.95

    def __post_init__(self):
        _require(math.isfinite(self.y_th) and self.y_th >= 0, "y_th must be nonnegative")
        _require(0.0 <= self.alpha <= 1.0, "alpha must lie in [0, 1]")


@dataclass(frozen=True)
class SecondaryNetParams:
    lambda_density: float = 1.0
    r_s: float = 10.0

    def __post_init__(self):
        _require(math.isfinite(self.lambda_density) and self.lambda_density >= 0,
                 "lambda_density must be nonnegative")
        _require(math.isfinite(self.r_s) and self.r_s >= 0, "r_s must be nonnegative")


class RngStream:
    """Reproducible random stream keyed by ``(seed, stream_index)``.

    Uses Philox, a counter-based generator, seeded through ``SeedSequence`` so
    the draw sequence does not depend on platform or thread count.
    :meth:`substream` derives independent children for block-parallel work.
    """

    def __init__(self, seed: int, stream_index: int = 0, _path: tuple[int, ...] = ()):
        _require(0 <= seed < 2**64 and 0 <= stream_index < 2**64, "seed and stream_index must be u64")
        self.seed = int(seed)
        self.stream_index = int(stream_index)
        self._path = tuple(_path)
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_index, *self._path))
        self.generator = np.random.Generator(np.random.Philox(ss))

    def substream(self, index: int) -> "RngStream":
        return RngStream(self.seed, self.stream_index, (*self._path, int(index)))

    def uniform_open0(self, size=None):
        """Uniform draws on (0, 1]."""
        return 1.0 - self.generator.random(size)

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_index={self.stream_index}, path={self._path})"


def rayleigh_from_uniform(u):
    """Inverse transform ``sqrt(-2 ln u)``; ``u`` must lie in (0, 1]."""
    return np.sqrt(-2.0 * np.log(u))


def sample_rayleigh(rng: RngStream, size=None):
    g = rayleigh_from_uniform(rng.uniform_open0(size))
    return float(g) if size is None else g


def h1_statistic_from_gains(params: ChannelParams, kind: RisConfigKind, g_c, g_r=None):
    """Phase-matched SNR from explicit gains; last axis runs over reflectors."""
    g_c = np.asarray(g_c, dtype=np.float64)
    if kind is RisConfigKind.ACCESS_POINT:
        total = g_c.sum(axis=-1)
    else:
        if g_r is None:
            raise ValueError("relay configuration needs both g_r and g_c")
        total = (np.asarray(g_r, dtype=np.float64) * g_c).sum(axis=-1)
    return params.path_gain(kind) * total


def sample_h1_statistic(params: ChannelParams, kind: RisConfigKind, rng: RngStream, size=None):
    """Draw the sensed SNR under H1 (PU active).

    Access point: ``gamma_bar * r_c**-beta * sum_n g_c[n]``.
    Relay: ``gamma_bar * (r_c * r_r)**-beta * sum_n g_r[n] * g_c[n]``.
    """
    n = 1 if size is None else int(size)
    n_refl = params.n_reflectors
    width = n_refl if kind is RisConfigKind.ACCESS_POINT else 2 * n_refl
    u = rng.uniform_open0((n, width))
    sums = kernels.gain_sums(u, n_refl, kind is RisConfigKind.RELAY)
    out = params.path_gain(kind) * sums
    return float(out[0]) if size is None else out


def sample_h0_energy(n0: float, rng: RngStream, size=None):
    """Draw the sensed noise energy ``w**2`` with ``w ~ N(0, n0)`` (PU idle)."""
    _require(n0 > 0, "n0 must be positive")
    w = math.sqrt(n0) * rng.generator.standard_normal(size)
    return w * w
