"""Command-line entry point.

    fracwave simulate   --alpha 2 --a 0.1 --times 1,5,10 --output out/
    fracwave validate   --alpha 2 --a 0.1 --times 1,5,10
    fracwave dispersion --alpha 2.5 --xi-range -50,50
    fracwave regularity --s -0.6 --u0 point_mass
    fracwave wavefront  --alpha 2.5
    fracwave figures
    fracwave --config out/resolved.json          # rerun a resolved config

Values from ``--config`` (JSON) are overridden by explicit flags. The fully
resolved configuration is written to ``<output>/resolved.json``. Set
``FRACWAVE_LOG`` to a logging level name (e.g. ``INFO``) for more output.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import warnings
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    mode_energy_residual,
    operator_residuals,
    regularity_check,
    singularity_map,
)
from .figures import (
    DEFAULT_TIMES,
    DEFAULT_X,
    FIGURE_PRESETS,
    figure_checks,
    plot_profile,
    profile_features,
)
from .io import write_dispersion, write_field, write_json, write_table
from .multiplier import FractionalOrder, dispersion_curve
from .quadrature import QuadratureSpec, evaluate_profile
from .spectral import InitialData, Profile, make_grid, sample_initial, solve_at_times

log = logging.getLogger("fracwave")

COMMANDS = ("simulate", "dispersion", "regularity", "wavefront", "validate", "figures")
METHODS = ("spectral", "quadrature", "both")
EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str = "simulate"
    alpha: float = 2.0
    a: float = 0.1
    method: str = "spectral"
    half_width: float = 200.0
    n: int = 2**14
    times: list = field(default_factory=lambda: list(DEFAULT_TIMES))
    x_range: list = field(default_factory=lambda: [DEFAULT_X[0], DEFAULT_X[1]])
    x_count: int = DEFAULT_X[2]
    u0: str = "gaussian_delta"
    v0: str = "zero"
    v0_a: float = 0.1
    s: float = 0.0
    tolerance: float = 1e-6
    abs_tol: float = 1e-10
    xi_range: list = field(default_factory=lambda: [-50.0, 50.0])
    xi_count: int = 1001
    probe_time: float = 5.0
    a_list: list = field(default_factory=lambda: [0.1, 0.05, 0.02])
    x0_list: list = field(default_factory=lambda: [0.0, 2.0, 3.0, 5.0])
    window_width: float = 1.0
    output: str = "out"

    def validate(self) -> "RunConfig":
        def need(cond, key, constraint):
            if not cond:
                raise ConfigError(f"invalid {key}={getattr(self, key)!r}: {constraint}")

        need(self.command in COMMANDS, "command", f"one of {COMMANDS}")
        try:
            FractionalOrder(self.alpha)
        except (ValueError, TypeError):
            raise ConfigError(
                f"invalid alpha={self.alpha!r}: must lie in the open interval (1, 3)"
            ) from None
        need(self.a > 0, "a", "must be > 0")
        need(self.method in METHODS, "method", f"one of {METHODS}")
        try:
            make_grid(self.half_width, self.n)
        except ValueError as exc:
            raise ConfigError(f"invalid grid (half_width, n): {exc}") from None
        need(all(math.isfinite(t) for t in self.times), "times", "finite values")
        need(all(t >= 0 for t in self.times), "times", "all t >= 0")
        need(len(self.x_range) == 2 and self.x_range[0] < self.x_range[1], "x_range",
             "two increasing values")
        need(self.x_count >= 1, "x_count", "at least 1")
        need(self.u0 in ("gaussian_delta", "point_mass", "zero"), "u0",
             "gaussian_delta, point_mass or zero")
        need(self.v0 in ("gaussian_delta", "point_mass", "zero"), "v0",
             "gaussian_delta, point_mass or zero")
        need(self.v0_a > 0, "v0_a", "must be > 0")
        need(self.tolerance > 0, "tolerance", "must be > 0")
        need(self.abs_tol > 0, "abs_tol", "must be > 0")
        need(len(self.xi_range) == 2 and self.xi_range[0] < self.xi_range[1], "xi_range",
             "two increasing values")
        need(self.xi_count >= 1, "xi_count", "at least 1")
        need(self.probe_time > 0, "probe_time", "must be > 0")
        need(len(self.a_list) > 0 and all(v > 0 for v in self.a_list), "a_list", "positive values")
        need(len(self.x0_list) > 0, "x0_list", "at least one location")
        need(self.window_width > 0, "window_width", "must be > 0")
        return self

    def initial_data(self) -> InitialData:
        def profile(kind, width):
            if kind == "gaussian_delta":
                return Profile.gaussian(width)
            return Profile(kind)

        return InitialData(profile(self.u0, self.a), profile(self.v0, self.v0_a))

    def x_output(self) -> np.ndarray:
        return np.linspace(self.x_range[0], self.x_range[1], self.x_count)


_FIELD_TYPES = {f.name: f for f in fields(RunConfig)}
LIST_KEYS = ("times", "x_range", "xi_range", "a_list", "x0_list")
INT_KEYS = ("n", "x_count", "xi_count")
STR_KEYS = ("command", "method", "u0", "v0", "output")


def _coerce(key, value):
    try:
        if key in LIST_KEYS:
            if isinstance(value, str):
                value = [v for v in value.split(",") if v.strip()]
            return [float(v) for v in value]
        if key in INT_KEYS:
            if float(value) != int(float(value)):
                raise ValueError
            return int(float(value))
        if key in STR_KEYS:
            return str(value)
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"invalid {key}={value!r}: expected "
                          f"{'a list of numbers' if key in LIST_KEYS else 'a number' if key not in STR_KEYS else 'a string'}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fracwave", description=__doc__.split("\n\n")[0])
    p.add_argument("command", nargs="?", choices=COMMANDS)
    p.add_argument("--config", help="JSON file with configuration values")
    p.add_argument("--version", action="version", version=f"fracwave {__version__}")
    for name in _FIELD_TYPES:
        if name == "command":
            continue
        p.add_argument("--" + name.replace("_", "-"), dest=name, default=None)
    return p


def _attach_negative_values(argv):
    # "--x-range -15,15" would otherwise be read as an unknown option
    argv = list(sys.argv[1:] if argv is None else argv)
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if (tok.startswith("--") and "=" not in tok and i + 1 < len(argv)
                and tok[2:].replace("-", "_") in _FIELD_TYPES
                and argv[i + 1].startswith("-") and not argv[i + 1].startswith("--")):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def parse_config(argv=None):
    """Resolve a :class:`RunConfig` from flags and an optional JSON file.

    Returns ``(config, provenance)`` where provenance records the source
    of every non-default value and any file/flag conflicts.
    """
    args = build_parser().parse_args(_attach_negative_values(argv))
    values, sources, conflicts = {}, {}, {}
    if args.config:
        try:
            payload = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file {args.config}: {exc}") from None
        if not isinstance(payload, dict):
            raise ConfigError(f"config file {args.config} must hold a JSON object")
        for key, value in payload.items():
            if key.startswith("_"):
                continue
            if key not in _FIELD_TYPES:
                raise ConfigError(f"unknown config key {key!r} in {args.config}")
            values[key] = _coerce(key, value)
            sources[key] = "file"
    flags = {k: v for k, v in vars(args).items() if k in _FIELD_TYPES and v is not None}
    for key, raw in flags.items():
        value = _coerce(key, raw)
        if key in values and values[key] != value:
            conflicts[key] = {"file": values[key], "flag": value}
        values[key] = value
        sources[key] = "flag"
    if "command" not in values:
        raise ConfigError("no command given (positional argument or 'command' in --config)")
    config = RunConfig(**values).validate()
    return config, {"sources": sources, "conflicts": conflicts}


def _configure_logging():
    level = os.environ.get("FRACWAVE_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


class Run:
    """Artifact bookkeeping for one command invocation."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.out = Path(config.output)
        self.artifacts: list[str] = []
        self.notes: list[str] = []
        self.partial = False

    def add(self, paths):
        for p in paths if isinstance(paths, (list, tuple)) else [paths]:
            self.artifacts.append(str(Path(p).relative_to(self.out)))

    def manifest(self, status: str):
        write_json(self.out / "manifest.json", {
            "command": self.config.command,
            "status": status,
            "partial": self.partial,
            "artifacts": sorted(self.artifacts),
            "notes": self.notes,
            "software_version": __version__,
        })


def _spectral_field(cfg: RunConfig, alpha, times, x):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        field_ = solve_at_times(cfg.initial_data(), make_grid(cfg.half_width, cfg.n), alpha, times, x=x)
    return field_, [str(w.message) for w in caught]


def _quadrature_field(cfg: RunConfig, alpha, times, x):
    if cfg.u0 != "gaussian_delta" or cfg.v0 != "zero":
        raise ConfigError("quadrature supports only u0=gaussian_delta with v0=zero")
    return evaluate_profile(alpha, cfg.a, x, times, QuadratureSpec(abs_tol=cfg.abs_tol))


def cmd_simulate(run: Run) -> int:
    cfg = run.config
    x = cfg.x_output()
    if cfg.method in ("spectral", "both"):
        fld, notes = _spectral_field(cfg, cfg.alpha, cfg.times, x)
        run.notes += notes
        run.add(write_field(fld, run.out, "field_spectral" if cfg.method == "both" else "field"))
    if cfg.method in ("quadrature", "both"):
        fld = _quadrature_field(cfg, cfg.alpha, cfg.times, x)
        if fld.failures:
            run.partial = True
            run.notes.append(f"{len(fld.failures)} quadrature points failed")
        run.add(write_field(fld, run.out, "field_quadrature" if cfg.method == "both" else "field"))
    return EXIT_OK


def cmd_validate(run: Run) -> int:
    cfg = run.config
    x = cfg.x_output()
    spec, notes = _spectral_field(cfg, cfg.alpha, cfg.times, x)
    run.notes += notes
    quad = _quadrature_field(cfg, cfg.alpha, cfg.times, x)
    diff = np.abs(spec.values - quad.values)
    tt, xx = np.meshgrid(spec.times, spec.x, indexing="ij")
    run.add(write_table(
        run.out / "validate.csv",
        ["x", "t", "u_spectral", "u_quadrature", "abs_diff", "error_bound"],
        [xx.ravel(), tt.ravel(), spec.values.T.ravel(), quad.values.T.ravel(), diff.T.ravel(),
         quad.error_bounds.T.ravel()],
    ))
    worst = float(diff.max(initial=0.0))
    ok = worst <= cfg.tolerance and not quad.failures
    line = (f"{'PASS' if ok else 'FAIL'} validate alpha={cfg.alpha:g} a={cfg.a:g}: "
            f"max |u_spectral - u_quadrature| = {worst:.3e} (tolerance {cfg.tolerance:.1e})")
    print(line)
    run.add(write_json(run.out / "validate.json", {
        "passed": ok, "max_abs_diff": worst, "tolerance": cfg.tolerance,
        "quadrature_failures": quad.failures, "verdict": line,
    }))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_dispersion(run: Run) -> int:
    cfg = run.config
    xi = np.linspace(cfg.xi_range[0], cfg.xi_range[1], cfg.xi_count)
    run.add(write_dispersion(dispersion_curve(cfg.alpha, xi), run.out / "dispersion.csv"))
    return EXIT_OK


def cmd_regularity(run: Run) -> int:
    cfg = run.config
    grid = make_grid(cfg.half_width, cfg.n)
    data = cfg.initial_data()
    times = np.asarray(cfg.times, dtype=float)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        sob = regularity_check(data, cfg.alpha, cfg.s, times, grid)
        energy = mode_energy_residual(sample_initial(data, grid, cfg.alpha), times)
    run.notes += [str(w.message) for w in caught]
    m = sob.meta
    run.add(write_table(run.out / "sobolev.csv", ["t", "norm", "bound", "excess"],
                        [times, m["norms"], m["bounds"], sob.per_time]))
    run.add(write_table(run.out / "energy.csv", ["t", "residual"], [times, energy.per_time]))
    reports = {"sobolev": sob, "energy": energy}
    positive = times[times > 0]
    steps = np.diff(positive)
    if positive.size >= 3 and np.allclose(steps, steps[0], rtol=1e-9):
        ops = operator_residuals(data, cfg.alpha, grid, positive)
        for tag, rep in ops.items():
            run.add(write_table(run.out / f"residual_{tag}.csv", ["t", "residual"],
                                [rep.times, rep.per_time]))
        reports.update(ops)
    else:
        run.notes.append("operator residuals skipped: need >= 3 uniformly spaced positive times")
    summary = {k: {"operator": r.operator, "sup_residual": r.sup_residual, "passed": r.passed}
               for k, r in reports.items()}
    summary["sobolev"]["violations"] = m["violations"]
    run.add(write_json(run.out / "regularity.json", summary))
    for k, r in reports.items():
        status = {True: "PASS", False: "FAIL", None: "INFO"}[r.passed]
        print(f"{status} {k}: sup residual {r.sup_residual:.3e}")
    return EXIT_OK


def cmd_wavefront(run: Run) -> int:
    cfg = run.config
    smap = singularity_map(cfg.alpha, cfg.probe_time, cfg.a_list, cfg.x0_list, cfg.window_width)
    rows = [(a, x0, p) for a, row in zip(smap.a_values, smap.profiles)
            for x0, p in zip(smap.x0_values, row)]
    run.add(write_table(
        run.out / "decay_profiles.csv",
        ["a", "x0", "t", "width", "fitted_exponent", "fit_quality", "reliable"],
        [[r[0] for r in rows], [r[1] for r in rows], [smap.t] * len(rows),
         [cfg.window_width] * len(rows), [r[2].fitted_exponent for r in rows],
         [r[2].fit_quality for r in rows], [float(r[2].reliable) for r in rows]],
    ))
    band_rows = [(a, x0, b[0], b[1]) for a, x0, p in rows for b in p.bands]
    run.add(write_table(run.out / "decay_bands.csv", ["a", "x0", "band_lower", "band_sup"],
                        [np.array([r[i] for r in band_rows]) for i in range(4)]))
    lines = [f"{v['status'].upper()} {v['prediction']}: {v['detail']}" for v in smap.verdicts]
    for line in lines:
        print(line)
    run.add(write_json(run.out / "wavefront.json", {
        "alpha": smap.alpha, "t": smap.t, "verdicts": smap.verdicts, "exponents": smap.exponents,
        "a_values": smap.a_values, "x0_values": smap.x0_values,
    }))
    (run.out / "verdicts.txt").write_bytes(("\n".join(lines) + "\n").encode())
    run.add(run.out / "verdicts.txt")
    return EXIT_OK


def cmd_figures(run: Run) -> int:
    cfg = run.config
    x = cfg.x_output()
    features = {}
    for number, (name, alpha) in enumerate(FIGURE_PRESETS, start=1):
        sub = run.out / f"{name}_alpha{alpha:g}"
        sub.mkdir(parents=True, exist_ok=True)
        figcfg = RunConfig(**{**asdict(cfg), "alpha": alpha, "u0": "gaussian_delta", "v0": "zero"})
        if cfg.method == "quadrature":
            fld = _quadrature_field(figcfg, alpha, cfg.times, x)
        else:
            fld, notes = _spectral_field(figcfg, alpha, cfg.times, x)
            run.notes += notes
        fld.meta["figure"] = number
        run.add(write_field(fld, sub, "profiles"))
        features[alpha] = {}
        for j, t in enumerate(fld.times):
            u = fld.values[:, j]
            run.add(plot_profile(fld.x, u, t, alpha, sub / f"profile_t{t:g}.svg"))
            features[alpha][float(t)] = profile_features(fld.x, u)
        run.add(write_json(sub / "features.json",
                           {f"{t:g}": v for t, v in features[alpha].items()}))
    checks = figure_checks(features)
    for c in checks:
        print(f"{'PASS' if c['passed'] else 'FAIL'} {c['check']}: {c['detail']}")
    run.add(write_json(run.out / "figure_checks.json", checks))
    return EXIT_OK


HANDLERS = {
    "simulate": cmd_simulate,
    "validate": cmd_validate,
    "dispersion": cmd_dispersion,
    "regularity": cmd_regularity,
    "wavefront": cmd_wavefront,
    "figures": cmd_figures,
}


def run(config: RunConfig, provenance: dict | None = None) -> int:
    """Execute a validated configuration; returns the process exit status."""
    out = Path(config.output)
    out.mkdir(parents=True, exist_ok=True)
    resolved = asdict(config)
    resolved["_provenance"] = provenance or {}
    write_json(out / "resolved.json", resolved)
    job = Run(config)
    try:
        status = HANDLERS[config.command](job)
    except ConfigError:
        job.manifest("error")
        raise
    except (ValueError, RuntimeError, OSError) as exc:
        job.partial = True
        job.notes.append(f"{type(exc).__name__}: {exc}")
        job.manifest("error")
        print(f"error in {config.command}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    job.manifest("ok" if status == EXIT_OK else "failed")
    return status


def main(argv=None) -> int:
    _configure_logging()
    try:
        config, provenance = parse_config(argv)
        return run(config, provenance)
    except ConfigError as exc:
        print(f"fracwave: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
