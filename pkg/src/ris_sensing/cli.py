"""Command-line entry point: ``ris-sensing {roc,throughput,pt,validate}``.

Exit codes: 0 success, 1 numeric or validation failure, 2 usage/config error.
Precedence: command-line flags > ``--config`` file (TOML) > built-in defaults.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from . import montecarlo, sweep, validation
from .analytic import FormulaMode, NumericError
from .model import ChannelParams, RisConfigKind, SecondaryNetParams, SensingParams

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

HEADERS = {
    "roc": ["pf", "config", "n", "mode", "pm", "pm_mc", "pm_mc_se"],
    "throughput": ["yth", "config", "n", "mode", "throughput", "throughput_mc", "throughput_mc_se"],
    "pt": ["alpha", "config", "yth", "mode", "pt_exact", "pt_asym"],
}

DEFAULTS = {
    "n_reflectors": None,  # per-command: [16, 32] or [16] for pt
    "beta": 2.0,
    "r_c": 1.0,
    "r_r": 1.0,
    "gamma_bar": None,
    "gamma_bar_db": None,
    "n0": 1.0,
    "y_th": None,
    "alpha": 0.95,
    "lambda_density": 1.0,
    "r_s": 10.0,
    "kinds": ["ap", "relay"],
    "mode": "both",
    "mc_samples": montecarlo.DEFAULT_SAMPLES,
    "no_mc": False,
    "seed": 0,
    "workers": None,
    "out": None,
    "format": "csv",
}


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    channel: ChannelParams
    n_values: tuple[int, ...]
    kinds: tuple[RisConfigKind, ...]
    modes: tuple[FormulaMode, ...]
    sensing: SensingParams
    net: SecondaryNetParams
    thresholds: tuple[float, ...] | None
    mc_samples: int | None
    seed: int
    workers: int | None
    out: str | None
    fmt: str

    @property
    def configs(self):
        return tuple((k, n) for k in self.kinds for n in self.n_values)


def _split(value, cast):
    if isinstance(value, str):
        items = [v for v in value.split(",") if v.strip()]
    elif isinstance(value, (list, tuple)):
        items = list(value)
    else:
        items = [value]
    return [cast(v.strip() if isinstance(v, str) else v) for v in items]


def _to_int(v):
    if isinstance(v, float) and not v.is_integer():
        raise ValueError(f"expected an integer, got {v}")
    return int(v)


def load_config_file(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed config file {path}: {exc}") from exc
    unknown = sorted(set(data) - set(DEFAULTS))
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
    return data


def build_config(command: str, args: argparse.Namespace) -> RunConfig:
    merged = dict(DEFAULTS)
    if args.config:
        merged.update(load_config_file(args.config))
    for key in DEFAULTS:
        v = getattr(args, key, None)
        if v is not None and v is not False:
            merged[key] = v

    try:
        if merged["gamma_bar"] is not None and merged["gamma_bar_db"] is not None:
            raise ConfigError("gamma_bar and gamma_bar_db are mutually exclusive")
        if merged["gamma_bar_db"] is not None:
            gamma_bar = 10.0 ** (float(merged["gamma_bar_db"]) / 10.0)
        else:
            gamma_bar = float(merged["gamma_bar"]) if merged["gamma_bar"] is not None else 1.0

        n_values = merged["n_reflectors"]
        if n_values is None:
            n_values = [sweep.PT_REFLECTORS] if command == "pt" else [16, 32]
        n_values = tuple(sorted(set(_split(n_values, _to_int))))
        kinds = tuple(sorted(set(_split(merged["kinds"], RisConfigKind.parse)), key=lambda k: k.value))
        mode = str(merged["mode"]).lower()
        modes = tuple(sweep.DEFAULT_MODES) if mode == "both" else (FormulaMode.parse(mode),)

        channel = ChannelParams(n_reflectors=n_values[0], beta=float(merged["beta"]), r_c=float(merged["r_c"]),
                                r_r=float(merged["r_r"]), gamma_bar=gamma_bar, n0=float(merged["n0"]))
        thresholds = None
        if merged["y_th"] is not None:
            thresholds = tuple(sorted(set(_split(merged["y_th"], float))))
        sensing = SensingParams(y_th=thresholds[0] if thresholds else 5.0, alpha=float(merged["alpha"]))
        net = SecondaryNetParams(float(merged["lambda_density"]), float(merged["r_s"]))
        mc = None if merged["no_mc"] else _to_int(merged["mc_samples"])
        if mc is not None and mc < 1:
            raise ConfigError("mc_samples must be positive")
        seed = _to_int(merged["seed"])
        if not 0 <= seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        fmt = str(merged["format"]).lower()
        if fmt not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        workers = None if merged["workers"] is None else _to_int(merged["workers"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    if not kinds:
        raise ConfigError("at least one RIS configuration is required")

    return RunConfig(channel=channel, n_values=n_values, kinds=kinds, modes=modes, sensing=sensing, net=net,
                     thresholds=thresholds, mc_samples=mc, seed=seed, workers=workers,
                     out=merged["out"], fmt=fmt)


def _num(v):
    if v is None:
        return ""
    if isinstance(v, int):
        return str(v)
    return format(float(v), ".12g")


def _json_num(v):
    if v is None or isinstance(v, int):
        return v
    v = float(v)
    return float(format(v, ".12g")) if math.isfinite(v) else None


def _records(command: str, rows) -> list[list]:
    out = []
    for r in rows:
        if command == "roc":
            out.append([r.x, r.kind.value, r.n_reflectors, r.mode.value, r.value, r.mc, r.mc_se])
        elif command == "throughput":
            out.append([r.x, r.kind.value, r.n_reflectors, r.mode.value, r.value, r.mc, r.mc_se])
        else:
            out.append([r.x, r.kind.value, r.y_th, r.mode.value, r.value, r.value_asym])
    return out


def render(command: str, rows, fmt: str) -> str:
    header = HEADERS[command]
    records = _records(command, rows)
    if fmt == "json":
        objs = [{k: (v if isinstance(v, str) else _json_num(v)) for k, v in zip(header, rec)} for rec in records]
        return json.dumps(objs, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for rec in records:
        w.writerow([v if isinstance(v, str) else _num(v) for v in rec])
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    Path(out).write_text(text, encoding="utf-8", newline="")


def cmd_roc(cfg: RunConfig) -> int:
    spec = sweep.SweepSpec(sweep.SweepVariable.PF_GRID, tuple(sweep.default_pf_grid()), cfg.configs, cfg.modes,
                           cfg.mc_samples, cfg.seed, cfg.channel, cfg.workers)
    _emit(render("roc", sweep.run_roc(spec), cfg.fmt), cfg.out)
    return 0


def cmd_throughput(cfg: RunConfig) -> int:
    grid = sweep.default_threshold_grid(cfg.channel, cfg.configs)
    spec = sweep.SweepSpec(sweep.SweepVariable.THRESHOLD_GRID, tuple(grid), cfg.configs, cfg.modes,
                           cfg.mc_samples, cfg.seed, cfg.channel, cfg.workers)
    _emit(render("throughput", sweep.run_throughput_sweep(spec, cfg.sensing, cfg.net), cfg.fmt), cfg.out)
    return 0


def cmd_pt(cfg: RunConfig) -> int:
    spec = sweep.SweepSpec(sweep.SweepVariable.ALPHA_GRID, tuple(sweep.default_alpha_grid()), cfg.configs,
                           cfg.modes, None, cfg.seed, cfg.channel)
    rows = sweep.run_pt_sweep(spec, cfg.thresholds or sweep.DEFAULT_PT_THRESHOLDS)
    _emit(render("pt", rows, cfg.fmt), cfg.out)
    return 0


def format_report(results) -> str:
    lines = [f"{'check':<44} {'status':<6} {'observed':>12} {'tolerance':>12} {'n_samples':>10} {'std_err':>10}"]
    for r in results:
        lines.append(
            f"{r.name:<44} {'PASS' if r.passed else 'FAIL':<6} {r.observed:>12.4g} {r.tolerance:>12.4g} "
            f"{'' if r.n_samples is None else r.n_samples:>10} "
            f"{'' if r.std_err is None else format(r.std_err, '.3g'):>10}"
        )
    failed = [r for r in results if not r.passed]
    lines.append(f"{len(results) - len(failed)}/{len(results)} checks passed")
    for r in failed:
        lines.append(f"FAILED {r.name}: observed {r.observed:.6g} > tolerance {r.tolerance:.6g} ({r.detail})")
    return "\n".join(lines) + "\n"


def cmd_validate(cfg: RunConfig, variance_scale: float = 1.0) -> int:
    results = validation.run_validation(
        cfg.channel, cfg.kinds, cfg.n_values, cfg.seed,
        mc_samples=cfg.mc_samples or montecarlo.DEFAULT_SAMPLES, variance_scale=variance_scale,
    )
    sys.stdout.write(format_report(results))
    if cfg.out:
        payload = [
            {"check": r.name, "passed": bool(r.passed), "observed": float(r.observed),
             "tolerance": float(r.tolerance), "n_samples": None if r.n_samples is None else int(r.n_samples),
             "std_err": None if r.std_err is None else float(r.std_err), "detail": r.detail}
            for r in results
        ]
        Path(cfg.out).write_text(json.dumps(payload, indent=1) + "\n", encoding="utf-8")
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML file with parameter overrides")
    common.add_argument("--seed", type=int)
    common.add_argument("--samples", dest="mc_samples", type=int, help="Monte Carlo samples per point")
    common.add_argument("--no-mc", action="store_true", default=None, help="analytic columns only")
    common.add_argument("--mode", choices=["physical", "paper-literal", "both"])
    common.add_argument("--kinds", help="comma list of ap,relay")
    common.add_argument("--n", dest="n_reflectors", help="comma list of reflector counts")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--alpha", type=float, help="PU activity fraction")
    common.add_argument("--gamma-bar", dest="gamma_bar", type=float, help="mean SNR, linear")
    common.add_argument("--gamma-bar-db", dest="gamma_bar_db", type=float, help="mean SNR in dB")
    common.add_argument("--beta", type=float, help="path-loss exponent")
    common.add_argument("--n0", type=float, help="noise power")
    common.add_argument("--yth", dest="y_th", help="detection threshold(s), comma list (pt)")
    common.add_argument("--workers", type=int, help="MC worker threads (1 = sequential)")

    parser = argparse.ArgumentParser(prog="ris-sensing", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("roc", parents=[common], help="complementary ROC dataset")
    sub.add_parser("throughput", parents=[common], help="throughput vs threshold dataset")
    sub.add_parser("pt", parents=[common], help="transmission probability vs PU activity dataset")
    v = sub.add_parser("validate", parents=[common], help="run the analytic-vs-simulation oracle suite")
    v.add_argument("--inject-variance-scale", type=float, default=1.0, help=argparse.SUPPRESS)
    return parser


COMMANDS = {"roc": cmd_roc, "throughput": cmd_throughput, "pt": cmd_pt}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args.command, args)
    except ConfigError as exc:
        print(f"ris-sensing: config error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.command == "validate":
            return cmd_validate(cfg, args.inject_variance_scale)
        return COMMANDS[args.command](cfg)
    except sweep.SweepSpecError as exc:
        print(f"ris-sensing: config error: {exc}", file=sys.stderr)
        return 2
    except (NumericError, ArithmeticError, ValueError) as exc:
        print(f"ris-sensing: numeric failure: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())
