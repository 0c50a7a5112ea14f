"""Command line front end.

    sonicport <command> --config run.toml [--output csv|json] [--out PATH]

Commands: horizon, spectrum, squeeze, entangle, teleport, sweep.  Exit
status is 0 on success, 1 on a domain error (e.g. no horizon on the
profile) and 2 on a configuration error.  Errors go to stderr as one JSON
object per line.
"""

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .acoustic import FlowProfile, alpha_for_temperature, find_horizons, hawking_temperature, load_profile
from .config import config_record, parse_config
from .errors import ConfigError, SonicError, ValidationError
from .fock import CoherentSpec, coherent_state, entanglement_entropy, schmidt_spectrum, squeezed_cutoff, two_mode_squeezed_vacuum
from .squeeze import mean_occupation, squeeze_parameter
from .teleport import analytic_fidelity_zero, fidelity_temperature_sweep, mb_conditional, resolve_cutoff, SweepRow
from .units import by_name

COMMANDS = ("horizon", "spectrum", "squeeze", "entangle", "teleport", "sweep")
SCHMIDT_HEAD = 5


@dataclass
class Report:
    command: str
    columns: list
    records: list
    units: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)


def build_profile(pc, base_dir=None):
    if pc.kind == "tabulated":
        path = Path(pc.file)
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        try:
            return load_profile(path, pc.c)
        except OSError as exc:
            raise ValidationError("profile.file", str(exc)) from None
    grid = None
    if pc.r_min is not None:
        grid = np.linspace(pc.r_min, pc.r_max, pc.num)
    if pc.kind == "linear":
        return FlowProfile.linear(pc.c, pc.R, pc.alpha, pc.rho0, grid=grid, num=pc.num)
    return FlowProfile.powerlaw(pc.c, pc.R, pc.exponent, pc.rho0, grid=grid, num=pc.num)


def _surface_gravity(config, base_dir):
    units = by_name(config.units)
    if config.profile is not None:
        horizons = find_horizons(build_profile(config.profile, base_dir), units)
        return horizons[-1].alpha
    if config.alpha is not None:
        return config.alpha
    if config.temperature is not None:
        return alpha_for_temperature(config.temperature, units)
    raise ValidationError("alpha", "this command needs alpha, temperature or a [profile]")


def _require(config, name):
    value = getattr(config, name)
    if value is None:
        raise ValidationError(name, "required by this command")
    return value


def _cutoff(config, r, amplitude=None):
    if config.cutoff != "auto":
        return config.cutoff
    if amplitude is None:
        return squeezed_cutoff(r, config.epsilon)
    return resolve_cutoff(amplitude, r, config.epsilon)


def dispatch(config, command, base_dir=None):
    """Run ``command`` under ``config`` and return its :class:`Report`."""
    if command not in COMMANDS:
        raise ValidationError("command", f"unknown command {command!r}")
    units = by_name(config.units)
    rate, temp = units.rate_unit, units.temperature_unit

    if command == "horizon":
        pc = config.profile
        if pc is None:
            raise ValidationError("profile", "horizon needs a [profile] table")
        horizons = find_horizons(build_profile(pc, base_dir), units)
        cols = ["r_H", "alpha", "temperature", "density", "sound_speed", "event_horizon"]
        return Report(command, cols, [h.as_record() for h in horizons],
                      {"alpha": rate, "temperature": temp},
                      {"near_horizon_density": "evaluated at r_H"})

    alpha = _surface_gravity(config, base_dir) if command != "sweep" else None
    meta = {} if alpha is None else {"alpha": alpha, "temperature": hawking_temperature(alpha, units)}

    if command == "spectrum":
        grid = config.spectrum
        if grid is not None:
            omegas = grid.values()
        elif config.omega is not None:
            omegas = np.array([config.omega])
        else:
            omegas = alpha * np.geomspace(1e-2, 2.0, 50)
        T = hawking_temperature(alpha, units)
        records = [{"omega": float(w), "nbar": mean_occupation(float(w), alpha), "temperature": T}
                   for w in omegas]
        return Report(command, ["omega", "nbar", "temperature"], records,
                      {"omega": rate, "temperature": temp}, meta)

    omega = _require(config, "omega")

    if command == "squeeze":
        spec = squeeze_parameter(omega, alpha)
        rec = spec.as_record()
        rec["temperature"] = hawking_temperature(alpha, units)
        return Report(command, list(rec), [rec], {"omega": rate, "alpha": rate, "temperature": temp}, meta)

    if command == "entangle":
        r = squeeze_parameter(omega, alpha).r
        n = _cutoff(config, r)
        state = two_mode_squeezed_vacuum(r, n)
        ch2, sh2 = math.cosh(r) ** 2, math.sinh(r) ** 2
        closed = ch2 * math.log(ch2) - (sh2 * math.log(sh2) if sh2 > 0 else 0.0)
        rec = {
            "r": r,
            "cutoff": n,
            "norm_deficit": state.norm_deficit,
            "entropy": entanglement_entropy(state),
            "entropy_closed_form": closed,
        }
        weights = schmidt_spectrum(state)
        for i in range(SCHMIDT_HEAD):
            rec[f"schmidt_{i}"] = float(weights[i]) if i < weights.size else 0.0
        return Report(command, list(rec), [rec], {"entropy": "nats"}, meta)

    amplitude = _require(config, "target")

    if command == "teleport":
        r = squeeze_parameter(omega, alpha).r
        n = _cutoff(config, r, amplitude)
        target = coherent_state(CoherentSpec(amplitude, n, config.epsilon))
        outcome = mb_conditional(target, r, config.k, config.sign, n, config.epsilon)
        rec = {
            "alpha": alpha,
            "r": r,
            "cutoff": n,
            "k": outcome.k,
            "sign": outcome.sign,
            "probability": outcome.probability,
            "fidelity": outcome.fidelity,
            # closed form holds whenever Bob's corrected state keeps every component
            "F_analytic": analytic_fidelity_zero(amplitude, r) if config.sign == "-" or config.k == 0 else None,
        }
        report = Report(command, list(rec), [rec], {"alpha": rate}, meta)
        report.metadata["output_state"] = outcome.output.to_dict()
        return report

    grid = config.sweep
    if grid is None:
        raise ValidationError("sweep", "sweep needs a [sweep] table")
    key = "alphas" if grid.over == "alpha" else "temperatures"
    rows = fidelity_temperature_sweep(amplitude, omega, units=units, cutoff=config.cutoff,
                                      eps=config.epsilon, **{key: grid.values()})
    return Report(command, list(SweepRow.FIELDS), [row.as_record() for row in rows],
                  {"alpha": rate, "temperature": temp})


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def render(report, config, fmt):
    header = {
        "tool": f"sonicport {__version__}",
        "command": report.command,
        "units": config.units,
        "column_units": report.units,
        **report.metadata,
        "config": config_record(config),
    }
    if fmt == "json":
        return json.dumps({"metadata": header, "records": report.records}, indent=2) + "\n"
    buf = io.StringIO()
    for key, value in header.items():
        text = value if isinstance(value, str) else json.dumps(value, sort_keys=False)
        buf.write(f"# {key}: {text}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(report.columns)
    for rec in report.records:
        writer.writerow([_cell(rec.get(c)) for c in report.columns])
    return buf.getvalue()


def _error_record(exc, code):
    return json.dumps({"error": type(exc).__name__, "exit": code, "message": str(exc)})


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        sys.stderr.write(json.dumps({"error": "UsageError", "exit": 2, "message": message}) + "\n")
        raise SystemExit(2)


def main(argv=None):
    parser = _Parser(prog="sonicport", description="Sonic horizon teleportation pipeline.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="TOML run configuration")
    parser.add_argument("--output", choices=("csv", "json"), help="overrides the config's output")
    parser.add_argument("--out", help="write here instead of stdout")
    parser.add_argument("--version", action="version", version=f"sonicport {__version__}")
    args = parser.parse_args(argv)

    try:
        path = Path(args.config)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ValidationError("config", str(exc)) from None
        config = parse_config(text)
        report = dispatch(config, args.command, base_dir=path.parent)
        out = render(report, config, args.output or config.output)
    except ConfigError as exc:
        sys.stderr.write(_error_record(exc, 2) + "\n")
        return 2
    except (SonicError, ValueError, ArithmeticError) as exc:
        sys.stderr.write(_error_record(exc, 1) + "\n")
        return 1

    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
