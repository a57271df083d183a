"""Oracle suite run by ``ris-sensing validate``.

Every check compares an analytic quantity with an independent reference
(stdlib ``math.erf`` or a seeded simulation) and records the observed error,
the tolerance and, for simulated checks, the sample count and standard error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import analytic, montecarlo, specfun
from .analytic import CltMoments, FormulaMode
from .model import ChannelParams, RisConfigKind, RngStream, SecondaryNetParams, SensingParams

Z_GRID = np.linspace(-3.0, 3.0, 13)
MOMENT_RTOL = 0.01
CLT_ALLOWANCE = 0.02
ASYM_TOL = 1e-3
ASYM_THRESHOLD = 5.0


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    observed: float
    tolerance: float
    n_samples: int | None = None
    std_err: float | None = None
    detail: str = ""


def _moments(n: int, kind: RisConfigKind, variance_scale: float) -> CltMoments:
    m = analytic.clt_moments(n, kind)
    return CltMoments(m.mu, m.sigma2 * variance_scale)


def check_specfun() -> list[CheckResult]:
    xs = np.linspace(-6.0, 6.0, 1001)
    ref = np.array([math.erf(x) for x in xs])
    ref_c = np.array([math.erfc(x) for x in xs])
    e1 = float(np.max(np.abs(specfun.erf(xs) - ref)))
    e2 = float(np.max(np.abs(specfun.erfc(xs) - ref_c)))
    ps = np.concatenate([np.logspace(-10, 0, 200), 2.0 - np.logspace(-10, 0, 200)[::-1][1:]])
    e3 = float(np.max(np.abs(specfun.erfc(specfun.inv_erfc(ps)) - ps)))
    return [
        CheckResult("erf vs math.erf", e1 <= 1e-12, e1, 1e-12),
        CheckResult("erfc vs math.erfc", e2 <= 1e-12, e2, 1e-12),
        CheckResult("inv_erfc round trip", e3 <= 1e-10, e3, 1e-10),
    ]


def check_moments(channel: ChannelParams, kinds, n_values, seed: int, n_samples: int,
                  variance_scale: float = 1.0) -> list[CheckResult]:
    out = []
    unit = replace(channel, gamma_bar=1.0, r_c=1.0, r_r=1.0)
    for ki, kind in enumerate(kinds):
        for n in sorted({1, *n_values}):
            params = replace(unit, n_reflectors=n)
            s = montecarlo.h1_samples(params, kind, n_samples, RngStream(seed, 100 + ki).substream(n))
            m = _moments(n, kind, variance_scale)
            err_mu = abs(s.mean() / m.mu - 1.0)
            err_var = abs(s.var() / m.sigma2 - 1.0)
            tag = f"{kind.value} N={n}"
            out.append(CheckResult(f"moment mean {tag}", err_mu <= MOMENT_RTOL, err_mu, MOMENT_RTOL, n_samples,
                                   float(s.std() / math.sqrt(n_samples) / m.mu), "relative error"))
            out.append(CheckResult(f"moment variance {tag}", err_var <= MOMENT_RTOL, err_var, MOMENT_RTOL,
                                   n_samples, None, "relative error"))
    return out


def check_false_alarm(channel: ChannelParams, seed: int, n_samples: int) -> list[CheckResult]:
    y = np.linspace(0.0, 9.0, 10)
    est = montecarlo.mc_p_false_alarm_curve(y, channel.n0, n_samples, RngStream(seed, 1))
    exact = analytic.p_false_alarm(y, channel.n0)
    worst, worst_se, ok = 0.0, 0.0, True
    for e, p in zip(est, exact):
        err = abs(e.p_hat - p)
        ok &= err <= 3.0 * e.std_err or (e.std_err == 0.0 and err == 0.0)
        if err >= worst:
            worst, worst_se = err, e.std_err
    return [CheckResult("false alarm exact vs MC", ok, worst, 3.0 * worst_se, n_samples, worst_se,
                        "max |analytic - MC| over 10 thresholds; tol 3 SE")]


def check_detection(channel: ChannelParams, kinds, n_values, seed: int, n_samples: int,
                    variance_scale: float = 1.0) -> list[CheckResult]:
    out = []
    for ki, kind in enumerate(kinds):
        for n in n_values:
            params = replace(channel, n_reflectors=n)
            moments = _moments(n, kind, variance_scale)
            y = np.clip(analytic.threshold_for_argument(params, Z_GRID, kind), 0.0, None)
            est = montecarlo.mc_p_detection_curve(params, y, kind, n_samples, RngStream(seed, 200 + ki).substream(n))
            exact = np.atleast_1d(analytic.p_detection(params, y, kind, FormulaMode.PHYSICAL, moments))
            errs = np.array([abs(e.p_hat - p) for e, p in zip(est, exact)])
            tols = np.array([max(3.0 * e.std_err, CLT_ALLOWANCE) for e in est])
            i = int(np.argmax(errs - tols))
            ok = bool(np.all(errs <= tols))
            out.append(CheckResult(f"detection analytic vs MC {kind.value} N={n}", ok, float(errs[i]),
                                   float(tols[i]), n_samples, est[i].std_err,
                                   f"worst at z={Z_GRID[i]:+.2f}; tol max(3 SE, {CLT_ALLOWANCE})"))
            p = [e.p_hat for e in est]
            mono = all(b <= a for a, b in zip(p, p[1:])) and p[0] > p[-1]
            pl = np.atleast_1d(analytic.p_detection(params, y, kind, FormulaMode.PAPER_LITERAL, moments))
            # the decisive comparison: does the simulated curve follow PHYSICAL or PAPER_LITERAL?
            closer = np.mean(np.abs(np.array(p) - exact)) < np.mean(np.abs(np.array(p) - pl))
            out.append(CheckResult(f"orientation {kind.value} N={n}", bool(mono and closer), float(p[0] - p[-1]),
                                   0.0, n_samples, None, "MC nonincreasing in y_th and closer to physical mode"))
    return out


def check_complement(channel: ChannelParams, kinds, n_values) -> list[CheckResult]:
    worst = 0.0
    for kind in kinds:
        for n in n_values:
            params = replace(channel, n_reflectors=n)
            y = np.clip(analytic.threshold_for_argument(params, np.linspace(-4, 4, 41), kind), 0.0, None)
            s = analytic.p_detection(params, y, kind, FormulaMode.PHYSICAL) + analytic.p_detection(
                params, y, kind, FormulaMode.PAPER_LITERAL)
            worst = max(worst, float(np.max(np.abs(s - 1.0))))
    return [CheckResult("paper-literal + physical = 1", worst <= 1e-12, worst, 1e-12)]


def check_asymptote(channel: ChannelParams, kinds) -> list[CheckResult]:
    unit = SecondaryNetParams(1.0, 1.0)
    params = replace(channel, n_reflectors=16)
    out = []
    for kind in kinds:
        gaps = []
        for a in np.linspace(0.0, 1.0, 101):
            s = SensingParams(ASYM_THRESHOLD, float(a))
            gaps.append(abs(analytic.throughput_paper_literal(params, s, unit, kind)
                            - analytic.throughput_asymptotic(params, s, unit, kind)))
        worst = max(gaps)
        out.append(CheckResult(f"asymptote convergence {kind.value} y_th={ASYM_THRESHOLD:g}", worst <= ASYM_TOL,
                               worst, ASYM_TOL, detail="max over alpha in [0,1] of |exact - asymptotic| P_t"))
    return out


def run_validation(channel: ChannelParams | None = None, kinds=(RisConfigKind.ACCESS_POINT, RisConfigKind.RELAY),
                   n_values=(16, 32), seed: int = 0, mc_samples: int = montecarlo.DEFAULT_SAMPLES,
                   moment_samples: int = 1_000_000, variance_scale: float = 1.0) -> list[CheckResult]:
    """Run every check.  ``variance_scale`` != 1 corrupts the CLT variance (negative control)."""
    channel = channel if channel is not None else ChannelParams()
    results = check_specfun()
    results += check_moments(channel, kinds, n_values, seed, moment_samples, variance_scale)
    results += check_false_alarm(channel, seed, mc_samples)
    results += check_detection(channel, kinds, n_values, seed, mc_samples, variance_scale)
    results += check_complement(channel, kinds, n_values)
    results += check_asymptote(channel, kinds)
    return results
