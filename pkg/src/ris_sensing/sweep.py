"""Figure-style parameter sweeps: complementary ROC, throughput vs threshold, P_t vs alpha."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import analytic, montecarlo
from .analytic import FormulaMode
from .model import ChannelParams, RisConfigKind, RngStream, SecondaryNetParams, SensingParams

DEFAULT_CONFIGS = (
    (RisConfigKind.ACCESS_POINT, 16),
    (RisConfigKind.ACCESS_POINT, 32),
    (RisConfigKind.RELAY, 16),
    (RisConfigKind.RELAY, 32),
)
DEFAULT_MODES = (FormulaMode.PHYSICAL, FormulaMode.PAPER_LITERAL)
DEFAULT_PT_THRESHOLDS = (5.0, 15.0, 25.0)
PT_REFLECTORS = 16
# MC columns are left empty where the analytic probability sits this many
# expected hits from either boundary, and wherever the simulated count itself
# sits on a boundary (zero standard error carries no information)
TAIL_HITS = 10


class SweepVariable(enum.Enum):
    PF_GRID = "pf"
    THRESHOLD_GRID = "yth"
    ALPHA_GRID = "alpha"


class SweepSpecError(ValueError):
    pass


@dataclass(frozen=True)
class SweepSpec:
    variable: SweepVariable
    grid: tuple[float, ...]
    configs: tuple[tuple[RisConfigKind, int], ...] = DEFAULT_CONFIGS
    modes: tuple[FormulaMode, ...] = DEFAULT_MODES
    mc_samples: int | None = None
    seed: int = 0
    channel: ChannelParams = field(default_factory=ChannelParams)
    # MC thread count; does not affect results (see montecarlo)
    workers: int | None = None

    def __post_init__(self):
        grid = tuple(float(g) for g in self.grid)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "configs", tuple(self.configs))
        object.__setattr__(self, "modes", tuple(self.modes))
        if not grid:
            raise SweepSpecError("grid must not be empty")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise SweepSpecError("grid must be strictly increasing")
        lo, hi = grid[0], grid[-1]
        if self.variable is SweepVariable.PF_GRID and not (lo > 0.0 and hi < 1.0):
            raise SweepSpecError("false-alarm grid must lie in (0, 1)")
        if self.variable is SweepVariable.ALPHA_GRID and not (lo >= 0.0 and hi <= 1.0):
            raise SweepSpecError("alpha grid must lie in [0, 1]")
        if self.variable is SweepVariable.THRESHOLD_GRID and not (lo >= 0.0 and math.isfinite(hi)):
            raise SweepSpecError("threshold grid must lie in [0, inf)")
        if not self.configs or not self.modes:
            raise SweepSpecError("configs and modes must not be empty")
        if self.mc_samples is not None and self.mc_samples < 1:
            raise SweepSpecError("mc_samples must be positive")

    def params_for(self, n_reflectors: int) -> ChannelParams:
        return replace(self.channel, n_reflectors=n_reflectors)

    def require(self, variable: SweepVariable) -> None:
        if self.variable is not variable:
            raise SweepSpecError(f"expected a {variable.value} sweep, got {self.variable.value}")


@dataclass(frozen=True)
class SweepRow:
    x: float
    kind: RisConfigKind
    n_reflectors: int
    mode: FormulaMode
    value: float
    value_asym: float | None = None
    y_th: float | None = None
    mc: float | None = None
    mc_se: float | None = None
    n_samples: int | None = None


def default_pf_grid(points: int = 40) -> np.ndarray:
    return np.logspace(-4.0, math.log10(0.99), points)


def default_threshold_grid(channel: ChannelParams, configs=DEFAULT_CONFIGS, points: int = 60,
                           z_span: float = 4.0) -> np.ndarray:
    """One shared linear grid covering ``z`` in [-z_span, z_span] for every configuration."""
    lo, hi = math.inf, -math.inf
    for kind, n in configs:
        params = replace(channel, n_reflectors=n)
        ends = analytic.threshold_for_argument(params, [-z_span, z_span], kind)
        lo, hi = min(lo, ends[0]), max(hi, ends[1])
    return np.linspace(max(lo, 0.0), hi, points)


def default_alpha_grid(points: int = 21) -> np.ndarray:
    return np.linspace(0.0, 1.0, points)


def _deep_tail(p: float, n_samples: int) -> bool:
    margin = TAIL_HITS / n_samples
    return p < margin or p > 1.0 - margin


def run_roc(spec: SweepSpec) -> list[SweepRow]:
    """Missed detection against false alarm; rows ordered by grid point, then config, then mode."""
    spec.require(SweepVariable.PF_GRID)
    pf = np.asarray(spec.grid)
    y = np.atleast_1d(analytic.threshold_from_pf(pf, spec.channel.n0))
    table = {}
    for ci, (kind, n) in enumerate(spec.configs):
        params = spec.params_for(n)
        pm = {mode: np.atleast_1d(analytic.p_missed(params, y, kind, mode)) for mode in spec.modes}
        mc = None
        if spec.mc_samples:
            mc = montecarlo.mc_p_detection_curve(params, y, kind, spec.mc_samples, RngStream(spec.seed, ci),
                                                   spec.workers)
        table[ci] = (pm, mc)

    rows = []
    for gi, p in enumerate(pf):
        for ci, (kind, n) in enumerate(spec.configs):
            pm, mc = table[ci]
            for mode in spec.modes:
                row = SweepRow(x=float(p), kind=kind, n_reflectors=n, mode=mode, value=float(pm[mode][gi]),
                               y_th=float(y[gi]))
                est = mc[gi] if mc is not None else None
                if est is not None and mode is FormulaMode.PHYSICAL and not _deep_tail(row.value, spec.mc_samples) \
                        and est.std_err > 0.0:
                    row = replace(row, mc=1.0 - est.p_hat, mc_se=est.std_err, n_samples=est.n_samples)
                rows.append(row)
    return rows


def run_throughput_sweep(spec: SweepSpec, sensing: SensingParams, net: SecondaryNetParams) -> list[SweepRow]:
    """Throughput against threshold; rows ordered by config, then threshold, then mode.

    ``sensing.y_th`` is ignored (the grid supplies thresholds); ``sensing.alpha`` is used.
    MC columns accompany PHYSICAL rows only.
    """
    spec.require(SweepVariable.THRESHOLD_GRID)
    y = np.asarray(spec.grid)
    rows = []
    for ci, (kind, n) in enumerate(spec.configs):
        params = spec.params_for(n)
        values = {mode: np.atleast_1d(analytic.throughput_exact(params, sensing, net, kind, mode, y_th=y))
                  for mode in spec.modes}
        asym = {mode: np.atleast_1d(analytic.throughput_asymptotic(params, sensing, net, kind, mode, y_th=y))
                for mode in spec.modes}
        mc_pd = mc_pf = None
        if spec.mc_samples:
            stream = RngStream(spec.seed, ci)
            mc_pd = montecarlo.mc_p_detection_curve(params, y, kind, spec.mc_samples, stream.substream(0),
                                                    spec.workers)
            mc_pf = montecarlo.mc_p_false_alarm_curve(y, params.n0, spec.mc_samples, stream.substream(1),
                                                      spec.workers)
        pm_exact = np.atleast_1d(analytic.p_missed(params, y, kind))
        pf_exact = np.atleast_1d(analytic.p_false_alarm(y, params.n0))
        scale = net.lambda_density * net.r_s
        a = sensing.alpha
        for gi, yv in enumerate(y):
            for mode in spec.modes:
                row = SweepRow(x=float(yv), kind=kind, n_reflectors=n, mode=mode, value=float(values[mode][gi]),
                               value_asym=float(asym[mode][gi]), y_th=float(yv))
                tails = (_deep_tail(pm_exact[gi], spec.mc_samples) and _deep_tail(pf_exact[gi], spec.mc_samples)
                         if spec.mc_samples else True)
                if mc_pd is not None and mode is FormulaMode.PHYSICAL and not tails:
                    d, f = mc_pd[gi], mc_pf[gi]
                    se = scale * math.hypot(a * d.std_err, (1.0 - a) * f.std_err)
                    if se > 0.0:
                        pt = analytic.p_transmission(d.p_hat, f.p_hat, a)
                        row = replace(row, mc=scale * pt, mc_se=se, n_samples=spec.mc_samples)
                rows.append(row)
    return rows


def run_pt_sweep(spec: SweepSpec, thresholds=DEFAULT_PT_THRESHOLDS) -> list[SweepRow]:
    """Transmission probability against PU activity, exact and asymptotic.

    Evaluated with ``lambda = R_s = 1`` so throughput and ``P_t`` coincide.
    Rows ordered by config, threshold, mode, alpha.  PAPER_LITERAL values are
    the raw expressions and are not confined to [0, 1].
    """
    spec.require(SweepVariable.ALPHA_GRID)
    unit = SecondaryNetParams(lambda_density=1.0, r_s=1.0)
    alphas = spec.grid
    rows = []
    for kind, n in spec.configs:
        params = spec.params_for(n)
        for yv in thresholds:
            for mode in spec.modes:
                for a in alphas:
                    s = SensingParams(y_th=float(yv), alpha=a)
                    rows.append(SweepRow(
                        x=a, kind=kind, n_reflectors=n, mode=mode,
                        value=analytic.throughput_exact(params, s, unit, kind, mode),
                        value_asym=analytic.throughput_asymptotic(params, s, unit, kind, mode),
                        y_th=float(yv),
                    ))
    return rows
