"""Command-line front end.

Subcommands: purcell, sfactors, simulate, correlations, sweep, and
figure {fig1|fig2|fig3|fig4}. Parameters come from a line-oriented
``key = value`` config file with namespaced keys (see CONFIG_KEYS), optionally
overridden with repeated ``--set key=value`` flags. Every run writes a
manifest.txt listing the fully resolved parameter set next to its CSV
outputs. Exit codes: 0 success, 2 validation error, 3 integration failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .dynamics import IntegrationError, evolve
from .figures import (
    FIGURE_NAMES,
    ScenarioConfig,
    build_scenario,
    figure_config,
    run_scenario,
    sweep,
)
from .qnm import FieldSamples, QnmMode, s_factors

_FLOAT_FIELDS = {
    "mode.omega_c_ev": "omega_c_ev",
    "mode.kappa_ev": "kappa_ev",
    "mode.beta_rad": "beta_rad",
    "mode.s_factor": "s_factor",
    "mode.n_b": "n_b",
    "mode.peak_purcell": "peak_purcell",
    "emitter.dipole_debye": "dipole_debye",
    "emitter.omega_a_ev": "omega_a_ev",
    "emitter.gamma_ev": "gamma_ev",
    "emitter.gamma_prime_ev": "gamma_prime_ev",
    "pulse.area_pi_units": "area_pi_units",
    "pulse.tau_p_factor": "tau_p_factor",
    "pulse.tau_p_ps": "tau_p_ps",
    "pulse.t_off_factor": "t_off_factor",
    "pulse.t_off_ps": "t_off_ps",
    "pulse.omega_l_ev": "omega_l_ev",
    "grid.t_end_ps": "t_end_ps",
    "grid.dt_max_ps": "dt_max_ps",
}
_INT_FIELDS = {
    "grid.n_steps": "n_steps",
    "grid.n_tau": "n_tau",
    "space.n_fock": "n_fock",
}
_SWEEP_KEYS = {
    "sweep.gamma_prime_ev": "gamma_prime_ev",
    "sweep.tau_p_ps": "tau_p_ps",
}
CONFIG_KEYS = sorted([*_FLOAT_FIELDS, *_INT_FIELDS, *_SWEEP_KEYS])


def _parse_sweep_axis(text: str) -> tuple[float, ...]:
    """Either an explicit comma list or start:stop:{log|lin}:count."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 4 or parts[2] not in ("log", "lin"):
            raise ValueError(
                f"sweep axis {text!r} must be start:stop:log|lin:count"
            )
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[3])
        if count < 1:
            raise ValueError("sweep axis needs at least one point")
        space = np.geomspace if parts[2] == "log" else np.linspace
        return tuple(float(v) for v in space(start, stop, count))
    return tuple(float(v) for v in text.split(","))


def parse_config_lines(lines) -> dict[str, str]:
    """key = value pairs, hash comments and blank lines ignored."""
    pairs: dict[str, str] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        pairs[key] = value
    return pairs


def apply_config(config: ScenarioConfig, pairs: dict[str, str]) -> ScenarioConfig:
    updates = {}
    for key, value in pairs.items():
        if key in _FLOAT_FIELDS:
            updates[_FLOAT_FIELDS[key]] = float(value)
        elif key in _INT_FIELDS:
            updates[_INT_FIELDS[key]] = int(value)
        elif key in _SWEEP_KEYS:
            updates["sweep_parameter"] = _SWEEP_KEYS[key]
            updates["sweep_values"] = _parse_sweep_axis(value)
        else:
            raise ValueError(f"unknown config key {key!r}")
    return replace(config, **updates)


def load_config(args, base: ScenarioConfig | None = None) -> ScenarioConfig:
    config = base if base is not None else ScenarioConfig()
    if getattr(args, "config", None):
        with open(args.config) as fh:
            config = apply_config(config, parse_config_lines(fh))
    overrides = {}
    for item in getattr(args, "set", None) or []:
        if "=" not in item:
            raise ValueError(f"--set expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        overrides[key.strip()] = value.strip()
    return apply_config(config, overrides)


def write_manifest(path: Path, parameters: dict) -> None:
    with open(path, "w") as fh:
        for key in sorted(parameters):
            value = parameters[key]
            if isinstance(value, (np.floating, np.integer)):
                value = value.item()
            fh.write(f"{key} = {value!r}\n")


_BUDGET_COLUMNS = ["p1", "p1_rad", "p1_nrad", "pa", "p2", "p2_rad",
                   "beta_total", "p1_num"]
_IND_COLUMNS = ["d1", "d2", "ind"]


def _budget_row(budget, ind) -> list[str]:
    row = [repr(getattr(budget, c)) for c in _BUDGET_COLUMNS]
    row += [repr(getattr(ind, c)) for c in _IND_COLUMNS]
    return row


def write_budget_csv(path: Path, budget, ind) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_BUDGET_COLUMNS + _IND_COLUMNS)
        writer.writerow(_budget_row(budget, ind))


def write_sweep_csv(path: Path, result) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([result.parameter] + _BUDGET_COLUMNS + _IND_COLUMNS + ["error"])
        for point in result.points:
            if point.error is None:
                row = [repr(point.value)] + _budget_row(point.budget, point.ind) + [""]
            else:
                row = [repr(point.value)] + [""] * 11 + [point.error]
            writer.writerow(row)


def _outdir(args) -> Path:
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_purcell(args) -> int:
    config = load_config(args)
    scenario = build_scenario(config)
    mode = scenario.model.mode
    lo = args.omega_min if args.omega_min is not None \
        else max(mode.omega_c - 3 * mode.kappa, 1e-6)
    hi = args.omega_max if args.omega_max is not None \
        else mode.omega_c + 3 * mode.kappa
    omega = np.linspace(lo, hi, args.points)
    from .qnm import purcell_spectrum

    values = purcell_spectrum(mode, omega, peak_value=config.peak_purcell)
    out = _outdir(args)
    with open(out / "purcell.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["omega_ev", "purcell"])
        for w, f in zip(omega, values):
            writer.writerow([repr(float(w)), repr(float(f))])
    write_manifest(out / "manifest.txt", {
        **scenario.parameters,
        "purcell.omega_min_ev": lo,
        "purcell.omega_max_ev": hi,
        "purcell.points": args.points,
    })
    print(f"wrote {out / 'purcell.csv'}")
    return 0


def cmd_sfactors(args) -> int:
    config = load_config(args)
    samples = FieldSamples.from_csv(volume_path=args.volume_csv,
                                    surface_path=args.surface_csv)
    mode = QnmMode(omega_c=config.omega_c_ev, kappa=config.kappa_ev,
                   n_b=config.n_b)
    result = s_factors(samples, mode)
    out = _outdir(args)
    with open(out / "sfactors.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["s_nrad", "s_rad", "s", "beta_rad", "beta_nrad"])
        writer.writerow([repr(v) for v in result])
    write_manifest(out / "manifest.txt", {
        "mode.omega_c_ev": mode.omega_c,
        "mode.kappa_ev": mode.kappa,
        "mode.n_b": mode.n_b,
        "sfactors.volume_csv": args.volume_csv or "",
        "sfactors.surface_csv": args.surface_csv or "",
    })
    print(f"S_nrad = {result.s_nrad:.6g}  S_rad = {result.s_rad:.6g}  "
          f"S = {result.s:.6g}  beta_rad = {result.beta_rad:.6g}")
    return 0


def cmd_simulate(args) -> int:
    config = load_config(args)
    scenario = build_scenario(config)
    traj = evolve(scenario.model, scenario.grid)
    out = _outdir(args)
    traj.to_csv(out / "trajectory.csv")
    write_manifest(out / "manifest.txt", scenario.parameters)
    print(f"wrote {out / 'trajectory.csv'}")
    return 0


def _run_full(config: ScenarioConfig, out: Path) -> int:
    if config.sweep_parameter is not None:
        result = sweep(config)
        write_sweep_csv(out / "sweep.csv", result)
        base = build_scenario(replace(config, sweep_parameter=None,
                                      sweep_values=()))
        write_manifest(out / "manifest.txt", {
            **base.parameters,
            "sweep.parameter": config.sweep_parameter,
            "sweep.values": ",".join(repr(v) for v in config.sweep_values),
            "sweep.ind_monotone_non_increasing":
                result.ind_monotone_non_increasing,
        })
        failures = sum(1 for p in result.points if p.error)
        print(f"wrote {out / 'sweep.csv'} "
              f"({len(result.points)} points, {failures} failed)")
        return 0
    result = run_scenario(config)
    result.trajectory.to_csv(out / "trajectory.csv")
    result.correlations.to_csv(out / "correlations.csv")
    write_budget_csv(out / "budget.csv", result.budget, result.ind)
    write_manifest(out / "manifest.txt", result.parameters)
    print(f"P1 = {result.budget.p1:.4f}  P1_rad = {result.budget.p1_rad:.4f}  "
          f"P2 = {result.budget.p2:.4f}")
    print(f"Ind = {result.ind.ind:.4f}  D1 = {result.ind.d1:.4f}  "
          f"D2 = {result.ind.d2:.4f}")
    return 0


def cmd_correlations(args) -> int:
    config = load_config(args)
    if config.sweep_parameter is not None:
        raise ValueError("config defines a sweep axis; use the sweep command")
    return _run_full(config, _outdir(args))


def cmd_sweep(args) -> int:
    config = load_config(args)
    if config.sweep_parameter is None:
        raise ValueError("config defines no sweep axis (set a sweep.* key)")
    return _run_full(config, _outdir(args))


def cmd_figure(args) -> int:
    config = load_config(args, base=figure_config(args.name))
    return _run_full(config, _outdir(args))


def _add_common(parser) -> None:
    parser.add_argument("--config", help="key = value parameter file")
    parser.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="override a config key (repeatable)")
    parser.add_argument("--outdir", default=".", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qnmsps",
        description="Pulsed single-photon source simulation for lossy "
                    "plasmonic resonators",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("purcell", help="Purcell enhancement spectrum")
    _add_common(p)
    p.add_argument("--omega-min", type=float, default=None)
    p.add_argument("--omega-max", type=float, default=None)
    p.add_argument("--points", type=int, default=601)
    p.set_defaults(func=cmd_purcell)

    p = sub.add_parser("sfactors", help="photon-normalization quadratures")
    _add_common(p)
    p.add_argument("--volume-csv", help="CSV with weight,eps_imag,f_abs_sq")
    p.add_argument("--surface-csv", help="CSV with weight,F_abs_sq")
    p.set_defaults(func=cmd_sfactors)

    p = sub.add_parser("simulate", help="trajectory only")
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("correlations", help="full single-scenario pipeline")
    _add_common(p)
    p.set_defaults(func=cmd_correlations)

    p = sub.add_parser("sweep", help="parameter sweep of full scenarios")
    _add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figure", help="built-in scenario presets")
    p.add_argument("name", choices=FIGURE_NAMES)
    _add_common(p)
    p.set_defaults(func=cmd_figure)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except IntegrationError as exc:
        print(f"integration failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
