"""Closed-form sensing metrics for both RIS configurations.

The sum of per-reflector gains is replaced by a Gaussian with matched mean and
variance.  Two orientations of the resulting detection formula are offered:

``FormulaMode.PHYSICAL``
    ``P_d = Pr(statistic > y_th) = 0.5 * erfc(z)``.  This is the orientation the
    Monte Carlo estimator reproduces and the default everywhere.
``FormulaMode.PAPER_LITERAL``
    ``P_d = 0.5 * (1 + erf(z))`` and the throughput expressions built on
    ``erf(z)`` exactly as they are usually printed.  Kept to regenerate the
    published curves; note that it equals ``1 - PHYSICAL``.

``z = (Theta - mu) / sqrt(2 sigma^2)`` with ``Theta = y_th / (gamma_bar * d**-beta)``.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .model import ChannelParams, RisConfigKind, SecondaryNetParams, SensingParams
from .specfun import erf, erfc, inv_erfc

CLT_MIN_REFLECTORS = 8
_PROB_SLACK = 1e-15


class FormulaMode(enum.Enum):
    PHYSICAL = "physical"
    PAPER_LITERAL = "paper-literal"

    @classmethod
    def parse(cls, text: str) -> "FormulaMode":
        key = text.strip().lower().replace("_", "-")
        for m in cls:
            if m.value == key:
                return m
        raise ValueError(f"unknown formula mode {text!r}")


class NumericError(ArithmeticError):
    """A computed probability escaped [0, 1] by more than rounding."""


class CltAccuracyWarning(UserWarning):
    pass


@dataclass(frozen=True)
class CltMoments:
    mu: float
    sigma2: float

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise ValueError("sigma2 must be positive")


@dataclass(frozen=True)
class MetricBundle:
    p_f: float
    p_d: float
    p_m: float
    p_t: float
    throughput: float
    throughput_asym: float


def _prob(p, name="probability"):
    """Clamp rounding-level excursions outside [0, 1]; anything larger is a bug."""
    arr = np.asarray(p, dtype=np.float64)
    if np.any(np.isnan(arr)) or np.any(arr < -_PROB_SLACK) or np.any(arr > 1.0 + _PROB_SLACK):
        raise NumericError(f"{name} outside [0, 1]: {p!r}")
    out = np.clip(arr, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def _check_unit(value, name):
    arr = np.asarray(value, dtype=np.float64)
    if np.any(~((arr >= 0.0) & (arr <= 1.0))):
        raise ValueError(f"{name} must lie in [0, 1]")


def _check_threshold(y_th):
    arr = np.asarray(y_th, dtype=np.float64)
    if np.any(~(arr >= 0.0)) or np.any(~np.isfinite(arr)):
        raise ValueError("y_th must be finite and nonnegative")
    return arr


def p_false_alarm(y_th, n0: float):
    """``erfc(sqrt(y_th / (2 n0)))``, the exact H0 exceedance probability."""
    if not n0 > 0:
        raise ValueError("n0 must be positive")
    y = _check_threshold(y_th)
    return _prob(erfc(np.sqrt(y / (2.0 * n0))), "p_f")


def clt_moments(n_reflectors: int, kind: RisConfigKind) -> CltMoments:
    if n_reflectors < 1:
        raise ValueError("n_reflectors must be >= 1")
    n = float(n_reflectors)
    if kind is RisConfigKind.ACCESS_POINT:
        return CltMoments(n * math.sqrt(math.pi / 2.0), n * (2.0 - math.pi / 2.0))
    return CltMoments(n * math.pi / 2.0, n * (4.0 - math.pi**2 / 4.0))


def normalized_threshold(params: ChannelParams, y_th, kind: RisConfigKind):
    """Theta: the threshold expressed in units of the summed gains."""
    return _check_threshold(y_th) / params.path_gain(kind)


def detection_argument(params: ChannelParams, y_th, kind: RisConfigKind, moments: CltMoments | None = None):
    """``(Theta - mu) / sqrt(2 sigma^2)``.

    ``moments`` overrides the CLT moments (used to inject faults in validation).
    """
    m = moments if moments is not None else clt_moments(params.n_reflectors, kind)
    z = (normalized_threshold(params, y_th, kind) - m.mu) / math.sqrt(2.0 * m.sigma2)
    return float(z) if np.ndim(z) == 0 else z


def threshold_for_argument(params: ChannelParams, z, kind: RisConfigKind):
    """Inverse of :func:`detection_argument` (may be negative for very negative ``z``)."""
    m = clt_moments(params.n_reflectors, kind)
    return (m.mu + np.asarray(z, dtype=np.float64) * math.sqrt(2.0 * m.sigma2)) * params.path_gain(kind)


def _warn_small_n(params):
    if params.n_reflectors < CLT_MIN_REFLECTORS:
        warnings.warn(
            f"Gaussian approximation is coarse for N={params.n_reflectors} < {CLT_MIN_REFLECTORS}",
            CltAccuracyWarning, stacklevel=3,
        )


def p_detection(params: ChannelParams, y_th, kind: RisConfigKind,
                mode: FormulaMode = FormulaMode.PHYSICAL, moments: CltMoments | None = None):
    _warn_small_n(params)
    z = detection_argument(params, y_th, kind, moments)
    if mode is FormulaMode.PHYSICAL:
        return _prob(0.5 * erfc(z), "p_d")
    return _prob(0.5 * (1.0 + erf(z)), "p_d")


def p_missed(params: ChannelParams, y_th, kind: RisConfigKind,
             mode: FormulaMode = FormulaMode.PHYSICAL, moments: CltMoments | None = None):
    """``1 - p_detection``; in PHYSICAL mode evaluated as ``0.5 erfc(-z)`` to keep the small tail."""
    if mode is FormulaMode.PHYSICAL:
        _warn_small_n(params)
        z = detection_argument(params, y_th, kind, moments)
        return _prob(0.5 * erfc(-np.asarray(z)), "p_m")
    return _prob(1.0 - p_detection(params, y_th, kind, mode, moments), "p_m")


def p_transmission(p_d, p_f, alpha):
    """``alpha (1 - p_d) + (1 - alpha)(1 - p_f)``."""
    _check_unit(p_d, "p_d")
    _check_unit(p_f, "p_f")
    _check_unit(alpha, "alpha")
    pt = alpha * (1.0 - np.asarray(p_d)) + (1.0 - np.asarray(alpha)) * (1.0 - np.asarray(p_f))
    return _prob(pt, "p_t")


def throughput(net: SecondaryNetParams, p_t):
    _check_unit(p_t, "p_t")
    t = net.lambda_density * net.r_s * np.asarray(p_t, dtype=np.float64)
    return float(t) if t.ndim == 0 else t


def throughput_paper_literal(params: ChannelParams, sensing: SensingParams, net: SecondaryNetParams,
                             kind: RisConfigKind, y_th=None):
    """``lambda R_s {alpha erf(z) + (1 - alpha) erf(sqrt(y_th / 2 N0))}``, verbatim.

    Not clipped: for thresholds below the CLT mean ``erf(z) < 0`` and the
    expression goes negative.  ``y_th`` overrides ``sensing.y_th`` and may be an array.
    """
    y = _check_threshold(sensing.y_th if y_th is None else y_th)
    z = detection_argument(params, y, kind)
    a = sensing.alpha
    t = net.lambda_density * net.r_s * (a * erf(z) + (1.0 - a) * erf(np.sqrt(y / (2.0 * params.n0))))
    return float(t) if np.ndim(t) == 0 else t


def throughput_asymptotic(params: ChannelParams, sensing: SensingParams, net: SecondaryNetParams,
                          kind: RisConfigKind, mode: FormulaMode = FormulaMode.PAPER_LITERAL, y_th=None):
    """Throughput with the false-alarm term driven to zero.

    PAPER_LITERAL: ``lambda R_s {1 - alpha + alpha erf(z)}``.
    PHYSICAL: ``lambda R_s {1 - alpha + alpha P_m}``.
    """
    y = _check_threshold(sensing.y_th if y_th is None else y_th)
    a = sensing.alpha
    if mode is FormulaMode.PAPER_LITERAL:
        inner = 1.0 - a + a * erf(detection_argument(params, y, kind))
    else:
        inner = 1.0 - a + a * p_missed(params, y, kind)
    t = net.lambda_density * net.r_s * inner
    return float(t) if np.ndim(t) == 0 else t


def throughput_exact(params: ChannelParams, sensing: SensingParams, net: SecondaryNetParams,
                     kind: RisConfigKind, mode: FormulaMode = FormulaMode.PHYSICAL, y_th=None):
    if mode is FormulaMode.PAPER_LITERAL:
        return throughput_paper_literal(params, sensing, net, kind, y_th)
    y = sensing.y_th if y_th is None else y_th
    pt = p_transmission(p_detection(params, y, kind), p_false_alarm(y, params.n0), sensing.alpha)
    return throughput(net, pt)


def metric_bundle(params: ChannelParams, sensing: SensingParams, net: SecondaryNetParams,
                  kind: RisConfigKind) -> MetricBundle:
    """All PHYSICAL-mode metrics at ``sensing.y_th``."""
    p_f = p_false_alarm(sensing.y_th, params.n0)
    p_d = p_detection(params, sensing.y_th, kind)
    p_t = p_transmission(p_d, p_f, sensing.alpha)
    return MetricBundle(
        p_f=p_f, p_d=p_d, p_m=1.0 - p_d, p_t=p_t,
        throughput=throughput(net, p_t),
        throughput_asym=throughput_asymptotic(params, sensing, net, kind, FormulaMode.PHYSICAL),
    )


def threshold_from_pf(p_f_target, n0: float):
    """Threshold giving false-alarm probability ``p_f_target``: ``2 n0 inv_erfc(p)**2``."""
    if not n0 > 0:
        raise ValueError("n0 must be positive")
    p = np.asarray(p_f_target, dtype=np.float64)
    if np.any(~((p > 0.0) & (p < 1.0))):
        raise ValueError("p_f_target must lie in (0, 1)")
    y = 2.0 * n0 * np.asarray(inv_erfc(p)) ** 2
    return float(y) if y.ndim == 0 else y
