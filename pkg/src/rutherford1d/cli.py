"""Command-line entry point and file formats.

Config files are flat key = value text; outputs are a CSV of the
sampled series, a flat key-value metrics summary, and a JSON metadata
record.  All floats are written with full round-trip precision so
re-running a config reproduces the files byte for byte.
"""

import argparse
import json
import math
import platform
import sys
from dataclasses import dataclass
from pathlib import Path

import numba
import numpy as np

from . import __version__
from .grid import make_grid, DEFAULT_UNITS
from .potential import coupling_constant
from .classical import analytic_closest_approach
from .experiment import RunConfig, ObservableSeries, ComparisonMetrics, run_comparison

_FLOAT_KEYS = ("x0", "p0", "mass", "x_min", "x_max", "dt", "t_max")
_INT_KEYS = ("z1", "z2", "n_points", "sample_every")
_KEY_ORDER = ("x0", "p0", "sigma_list", "z1", "z2", "mass", "x_min", "x_max",
              "n_points", "dt", "t_max", "sample_every", "softening_cut")


@dataclass(frozen=True)
class OutputBundle:
    series_csv: Path
    metrics_file: Path
    metadata_file: Path


def _parse_float(key: str, value: str) -> float:
    try:
        out = float(value)
    except ValueError:
        raise ValueError(f"config key '{key}': expected a number, got {value!r}") from None
    if not math.isfinite(out):
        raise ValueError(f"config key '{key}': value must be finite, got {value!r}")
    return out


def _parse_int(key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ValueError(f"config key '{key}': expected an integer, got {value!r}") from None


def parse_config(text: str) -> RunConfig:
    """Flat key = value text to a validated RunConfig.

    Absent keys take the defaults; unknown or repeated keys are
    rejected by name, as are type and invariant violations.
    """
    kwargs = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key in kwargs:
            raise ValueError(f"duplicate config key '{key}'")
        if key in _FLOAT_KEYS:
            kwargs[key] = _parse_float(key, value)
        elif key in _INT_KEYS:
            kwargs[key] = _parse_int(key, value)
        elif key == "sigma_list":
            inner = value
            if inner.startswith("[") and inner.endswith("]"):
                inner = inner[1:-1]
            parts = [p.strip() for p in inner.split(",") if p.strip()]
            kwargs[key] = tuple(_parse_float(key, p) for p in parts)
        elif key == "softening_cut":
            kwargs[key] = None if value.lower() == "none" else _parse_float(key, value)
        else:
            raise ValueError(f"unknown config key '{key}'")
    config = RunConfig(**kwargs)
    config.validate()
    return config


def render_config(config: RunConfig) -> str:
    """Inverse of parse_config: text that parses back to equal config."""
    lines = []
    for key in _KEY_ORDER:
        value = getattr(config, key)
        if key == "sigma_list":
            text = "[" + ", ".join(repr(float(s)) for s in value) + "]"
        elif key in _INT_KEYS:
            text = str(int(value))
        elif value is None:
            text = "none"
        else:
            text = repr(float(value))
        lines.append(f"{key} = {text}")
    return "\n".join(lines) + "\n"


def _sigma_tag(sigma: float) -> str:
    return f"{sigma:g}"


def write_series(series: ObservableSeries, path) -> None:
    """CSV of the shared time axis, classical columns, then per-sigma blocks."""
    if len(series) == 0:
        raise ValueError("refusing to write an empty series")
    headers = ["t", "x_cl", "p_cl", "F_cl"]
    columns = [series.times, series.classical_x, series.classical_p,
               series.classical_force]
    for sigma in series.sigma_list:
        tag = _sigma_tag(sigma)
        q = series.quantum[sigma]
        headers += [f"mean_x_{tag}", f"mean_p_{tag}", f"mean_F_{tag}",
                    f"spread_{tag}", f"norm_{tag}", f"energy_{tag}"]
        columns += [q.mean_x, q.mean_p, q.mean_force, q.spread, q.norm,
                    q.mean_energy]
    out = [",".join(headers)]
    for i in range(len(series)):
        out.append(",".join(repr(float(col[i])) for col in columns))
    Path(path).write_text("\n".join(out) + "\n")


def _metric_value(value, missing: str) -> str:
    if value is None:
        return missing
    if isinstance(value, bool):
        return "true" if value else "false"
    return repr(float(value))


def write_metrics(metrics: ComparisonMetrics, path) -> None:
    """Flat key = value summary; every key present even when unresolved."""
    lines = [
        "closest_approach_classical = "
        + _metric_value(metrics.closest_approach_classical, "not_reached"),
        "turning_time_classical = "
        + _metric_value(metrics.turning_time_classical, "not_reached"),
        "closest_approach_classical_analytic = "
        + _metric_value(metrics.closest_approach_analytic, "not_reached"),
    ]
    for sigma in metrics.closest_approach_quantum:
        tag = _sigma_tag(sigma)
        lines += [
            f"closest_approach_sigma_{tag} = "
            + _metric_value(metrics.closest_approach_quantum[sigma], "not_reached"),
            f"turning_time_sigma_{tag} = "
            + _metric_value(metrics.turning_time_quantum[sigma], "not_reached"),
            f"force_crossover_time_sigma_{tag} = "
            + _metric_value(metrics.force_crossover_time[sigma], "none"),
            f"jensen_t0_satisfied_sigma_{tag} = "
            + _metric_value(metrics.jensen_t0_satisfied[sigma], "none"),
            f"max_lag_sigma_{tag} = "
            + _metric_value(metrics.max_lag[sigma], "none"),
        ]
    for key in sorted(metrics.diagnostics):
        lines.append(f"{key} = " + _metric_value(metrics.diagnostics[key], "none"))
    Path(path).write_text("\n".join(lines) + "\n")


def write_metadata(config: RunConfig, path) -> None:
    """JSON record of parameters, realized grid, softening, versions."""
    grid = make_grid(config.x_min, config.x_max, config.n_points)
    if config.z1 == 0 or config.z2 == 0:
        coupling = 0.0
    else:
        coupling = coupling_constant(config.z1, config.z2, DEFAULT_UNITS)
    cut = config.softening_cut if config.softening_cut is not None else grid.dx / 2.0
    record = {
        "config": {key: getattr(config, key) for key in _KEY_ORDER},
        "grid": {
            "x_min": grid.x_min,
            "x_max": grid.x_max,
            "n_points": grid.n_points,
            "dx": grid.dx,
            "shift": grid.shift,
        },
        "coupling_k": coupling,
        "softening_cut_effective": cut,
        "versions": {
            "rutherford1d": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "numba": numba.__version__,
        },
    }
    record["config"]["sigma_list"] = list(config.sigma_list)
    Path(path).write_text(json.dumps(record, indent=2) + "\n")


def run_bundle(config: RunConfig, out_dir, log=None) -> OutputBundle:
    """Execute the comparison and write the three output files."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    series, metrics = run_comparison(config, log=log)
    bundle = OutputBundle(series_csv=out / "series.csv",
                          metrics_file=out / "metrics.txt",
                          metadata_file=out / "metadata.json")
    write_series(series, bundle.series_csv)
    write_metrics(metrics, bundle.metrics_file)
    write_metadata(config, bundle.metadata_file)
    return bundle


def _read_config_file(path: str) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValueError(f"cannot read config file {path}: {exc}") from None
    return parse_config(text)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="rutherford1d",
        description="Quantum wavepacket vs classical particle in head-on "
                    "Rutherford scattering")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run the comparison and write outputs")
    p_run.add_argument("--config", required=True, help="key = value config file")
    p_run.add_argument("--out-dir", required=True, help="output directory")

    p_val = sub.add_parser("validate", help="parse and echo a config")
    p_val.add_argument("--config", required=True, help="key = value config file")

    p_orc = sub.add_parser("oracle", help="print the analytic closest approach")
    p_orc.add_argument("--energy", type=float, required=True, help="kinetic energy in MeV")
    p_orc.add_argument("--z1", type=int, default=2, help="projectile charge number")
    p_orc.add_argument("--z2", type=int, default=79, help="target charge number")

    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            config = _read_config_file(args.config)
            bundle = run_bundle(config, args.out_dir,
                                log=lambda msg: print(msg, file=sys.stderr))
            print(f"series:   {bundle.series_csv}")
            print(f"metrics:  {bundle.metrics_file}")
            print(f"metadata: {bundle.metadata_file}")
        elif args.command == "validate":
            config = _read_config_file(args.config)
            sys.stdout.write(render_config(config))
        else:
            coupling = coupling_constant(args.z1, args.z2, DEFAULT_UNITS)
            distance = analytic_closest_approach(args.energy, coupling)
            print(f"coupling_k = {coupling!r} MeV*fm")
            print(f"closest_approach = {distance!r} fm")
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
