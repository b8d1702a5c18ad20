"""Command-line front end: run experiments, emit tables, CSV, JSON, and SVG plots.

Numeric output is formatted to 12 significant digits and runs are
deterministic: identical configs produce byte-identical CSV/JSON.
Exit codes: 0 success, 2 usage/validation error, 1 computation failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

from .entanglement import chsh_violated, concurrence, horodecki_m, target_pair_density
from .plotting import heatmap, line_chart
from .protocols import (
    RotationProtocolParams,
    coherent_field_rotation,
    massless_absorption,
    optimize_angles,
    sequential_rotation,
    simultaneous_coupling_check,
    table1_summary,
)


class UsageError(Exception):
    """Bad flags, bad config file, or out-of-range parameter values."""


@dataclass(frozen=True)
class RunConfig:
    experiment: str
    parameters: dict
    format: str = "table"
    out: str | None = None
    plot: str | None = None


def _fmt12(x) -> str:
    return format(float(x), ".12g")


# ---------------------------------------------------------------------------
# parameter schemas
# ---------------------------------------------------------------------------

def _int_min(minimum):
    def check(key, val):
        if not isinstance(val, int) or isinstance(val, bool) or val < minimum:
            raise UsageError(f"{key} must be an integer >= {minimum}, got {val!r}")
        return val
    return check


def _float_range(lo, hi):
    def check(key, val):
        try:
            v = float(val)
        except (TypeError, ValueError):
            raise UsageError(f"{key} must be a number, got {val!r}") from None
        if not (lo <= v <= hi) or not math.isfinite(v):
            raise UsageError(f"{key} out of range [{lo},{hi}], got {val!r}")
        return v
    return check


def _float_any(key, val):
    try:
        v = float(val)
    except (TypeError, ValueError):
        raise UsageError(f"{key} must be a number, got {val!r}") from None
    if not math.isfinite(v):
        raise UsageError(f"{key} must be finite, got {val!r}")
    return v


def _float_nonneg(key, val):
    v = _float_any(key, val)
    if v < 0:
        raise UsageError(f"{key} must be >= 0, got {val!r}")
    return v


def _optional_int_min(minimum):
    inner = _int_min(minimum)
    def check(key, val):
        if val is None:
            return None
        return inner(key, val)
    return check


def _int_list_min(minimum):
    def check(key, val):
        if isinstance(val, str):
            parts = [p for p in val.split(",") if p.strip()]
            try:
                val = [int(p) for p in parts]
            except ValueError:
                raise UsageError(f"{key} must be a comma list of integers, got {val!r}") from None
        if not isinstance(val, list) or not val:
            raise UsageError(f"{key} must be a non-empty list of integers, got {val!r}")
        out = []
        for v in val:
            if not isinstance(v, int) or isinstance(v, bool) or v < minimum:
                raise UsageError(f"{key} entries must be integers >= {minimum}, got {v!r}")
            out.append(v)
        return out
    return check


# name -> {param: (validator, default)}; default None with required=True means mandatory
_EXPERIMENTS = {
    "table1": {"n": (_int_min(1), 1)},
    "rotate": {"n": (_int_min(1), 1), "alpha": (_float_any, 1.0), "beta": (_float_any, 0.0)},
    "rotate-sweep": {"n_list": (_int_list_min(1), [4, 8, 16, 32, 64]),
                     "alpha": (_float_any, 0.8), "beta": (_float_any, 0.6)},
    "collective-check": {"n": (_int_min(1), 2),
                         "alpha": (_float_any, 1.0), "beta": (_float_any, 0.0)},
    "fermion-sweep": {"pairs": (_int_min(1), 2), "grid": (_int_min(8), 64),
                      "refine": (_int_min(0), 3)},
    "bell": {"gamma": (_float_range(0.0, 1.0), None)},
    "absorption": {},
    "coherent-rotation": {"eta": (_float_nonneg, None), "cutoff": (_optional_int_min(1), None),
                          "alpha": (_float_any, 1.0), "beta": (_float_any, 0.0)},
}

_REQUIRED = {"bell": ["gamma"], "coherent-rotation": ["eta"]}
_SERIES_EXPERIMENTS = {"rotate-sweep", "fermion-sweep"}
_FORMATS = ("table", "csv", "json")


def _normalize_amplitudes(params: dict):
    if "alpha" not in params:
        return
    a, b = params["alpha"], params["beta"]
    n2 = a * a + b * b
    if n2 == 0:
        raise UsageError("alpha and beta cannot both be zero")
    if abs(n2 - 1.0) > 1e-12:
        n = math.sqrt(n2)
        params["alpha"], params["beta"] = a / n, b / n


def _validate(experiment: str, raw_params: dict, fmt: str, out, plot) -> RunConfig:
    if experiment not in _EXPERIMENTS:
        raise UsageError(f"unknown experiment {experiment!r}; choose one of "
                         f"{sorted(_EXPERIMENTS)}")
    schema = _EXPERIMENTS[experiment]
    unknown = set(raw_params) - set(schema)
    if unknown:
        raise UsageError(f"unknown parameter(s) for {experiment}: {sorted(unknown)}; "
                         f"accepted: {sorted(schema)}")
    params = {}
    for key, (check, default) in schema.items():
        if key in raw_params and raw_params[key] is not None:
            params[key] = check(key, raw_params[key])
        elif key in _REQUIRED.get(experiment, []):
            raise UsageError(f"{experiment} requires parameter {key!r}")
        else:
            params[key] = default
    _normalize_amplitudes(params)
    if fmt not in _FORMATS:
        raise UsageError(f"format must be one of {_FORMATS}, got {fmt!r}")
    if plot is not None:
        if experiment not in _SERIES_EXPERIMENTS:
            raise UsageError(f"--plot is only available for series experiments "
                             f"{sorted(_SERIES_EXPERIMENTS)}")
        if not plot.endswith(".svg"):
            raise UsageError(f"plot path must end in .svg, got {plot!r}")
        if experiment == "fermion-sweep" and params["pairs"] > 2:
            raise UsageError("plotting supports pairs in {1, 2}")
    return RunConfig(experiment=experiment, parameters=params, format=fmt, out=out, plot=plot)


# ---------------------------------------------------------------------------
# argv + config-file parsing
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=_FORMATS, default=None)
    common.add_argument("--out", default=None, metavar="PATH")
    common.add_argument("--plot", default=None, metavar="PATH.svg")
    common.add_argument("--config", default=None, metavar="PATH.json")

    parser = argparse.ArgumentParser(
        prog="modent",
        description="Mode-entanglement detection experiments at desk scale.")
    parser.add_argument("--config", default=None, metavar="PATH.json")
    sub = parser.add_subparsers(dest="experiment")

    p = sub.add_parser("table1", parents=[common],
                       help="summary concurrence table for all four particle classes")
    p.add_argument("--n", type=int, default=None)

    p = sub.add_parser("rotate", parents=[common],
                       help="sequential ancilla rotation fidelity")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)

    p = sub.add_parser("rotate-sweep", parents=[common],
                       help="infidelity versus ancilla count")
    p.add_argument("--n-list", dest="n_list", default=None,
                   metavar="N1,N2,...")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)

    p = sub.add_parser("collective-check", parents=[common],
                       help="simultaneous coupling versus the collective mode")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)

    p = sub.add_parser("fermion-sweep", parents=[common],
                       help="mixing-angle grid search for the pair protocol")
    p.add_argument("--pairs", type=int, default=None)
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--refine", type=int, default=None)

    p = sub.add_parser("bell", parents=[common],
                       help="CHSH criterion for the two-target state")
    p.add_argument("--gamma", type=float, default=None)

    sub.add_parser("absorption", parents=[common],
                   help="full absorption of a delocalized flying boson")

    p = sub.add_parser("coherent-rotation", parents=[common],
                       help="rotation driven by a truncated coherent mode")
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--cutoff", type=int, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)

    return parser


_CONFIG_KEYS = {"experiment", "parameters", "output"}
_OUTPUT_KEYS = {"format", "path", "plot"}


def _load_config_document(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise UsageError("config document must be a JSON object")
    unknown = set(doc) - _CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config key(s): {sorted(unknown)}; accepted: "
                         f"{sorted(_CONFIG_KEYS)}")
    params = doc.get("parameters", {})
    if not isinstance(params, dict):
        raise UsageError("config 'parameters' must be an object")
    output = doc.get("output", {})
    if not isinstance(output, dict):
        raise UsageError("config 'output' must be an object")
    bad = set(output) - _OUTPUT_KEYS
    if bad:
        raise UsageError(f"unknown output key(s): {sorted(bad)}; accepted: "
                         f"{sorted(_OUTPUT_KEYS)}")
    return doc


def parse_config(argv=None, config_text: str | None = None) -> RunConfig:
    """Build a validated RunConfig from argv flags and/or a JSON config document.

    Flags override config-file values.  Raises UsageError (exit status 2 in
    main) on unknown keys, missing required parameters, or out-of-range values.
    """
    experiment = None
    raw_params: dict = {}
    fmt = None
    out = None
    plot = None

    ns = None
    if argv is not None:
        parser = _build_parser()
        ns = parser.parse_args(argv)
        if config_text is None and ns.config is not None:
            try:
                with open(ns.config, "r", encoding="utf-8") as fh:
                    config_text = fh.read()
            except OSError as exc:
                raise UsageError(f"cannot read config file: {exc}") from None

    if config_text is not None:
        doc = _load_config_document(config_text)
        experiment = doc.get("experiment")
        raw_params.update(doc.get("parameters", {}))
        output = doc.get("output", {})
        fmt = output.get("format", fmt)
        out = output.get("path", out)
        plot = output.get("plot", plot)

    if ns is not None and ns.experiment is not None:
        if experiment is not None and experiment != ns.experiment:
            raise UsageError(f"config experiment {experiment!r} conflicts with "
                             f"subcommand {ns.experiment!r}")
        experiment = ns.experiment
        schema = _EXPERIMENTS.get(ns.experiment, {})
        for key in schema:
            val = getattr(ns, key, None)
            if val is not None:
                raw_params[key] = val
        if ns.format is not None:
            fmt = ns.format
        if ns.out is not None:
            out = ns.out
        if ns.plot is not None:
            plot = ns.plot

    if experiment is None:
        raise UsageError("no experiment given: pass a subcommand or a config file")
    return _validate(experiment, raw_params, fmt or "table", out, plot)


def render_config(config: RunConfig) -> str:
    """JSON config document equivalent to ``config`` (parse_config round-trips it)."""
    doc = {
        "experiment": config.experiment,
        "parameters": dict(config.parameters),
        "output": {"format": config.format, "path": config.out, "plot": config.plot},
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# execution
# ---------------------------------------------------------------------------

def _execute(config: RunConfig) -> dict:
    p = config.parameters
    name = config.experiment
    payload = {"name": name, "params": dict(p), "scalars": {}, "flags": {},
               "series": None, "series_columns": None, "table": None}

    if name == "table1":
        rows = table1_summary(p["n"])
        payload["table"] = {
            "columns": ["particle_type", "concurrence", "max_repetitions"],
            "rows": [[r.particle_type, r.concurrence, r.repetitions] for r in rows],
        }
        for r in rows:
            prefix = r.particle_type.replace(" ", "_")
            for k, v in r.details.items():
                payload["scalars"][f"{prefix}_{k}"] = float(v)

    elif name == "rotate":
        res = sequential_rotation(RotationProtocolParams(p["alpha"], p["beta"], p["n"]))
        payload["scalars"] = dict(res.scalars)

    elif name == "rotate-sweep":
        series = []
        for n in p["n_list"]:
            res = sequential_rotation(RotationProtocolParams(p["alpha"], p["beta"], n))
            series.append((float(n), res.scalars["infidelity"]))
        payload["series"] = series
        payload["series_columns"] = ["n_ancillas", "infidelity"]

    elif name == "collective-check":
        res = simultaneous_coupling_check(p["n"], p["alpha"], p["beta"])
        payload["scalars"] = dict(res.scalars)

    elif name == "fermion-sweep":
        best_t, best_c, grid = optimize_angles(p["pairs"], p["grid"], p["refine"])
        payload["scalars"]["best_concurrence"] = best_c
        for i, t in enumerate(best_t, start=1):
            payload["scalars"][f"best_theta_{i}"] = t
        payload["series"] = [tuple(row) for row in grid]
        payload["series_columns"] = [f"theta_{i}" for i in range(1, p["pairs"] + 1)] + ["concurrence"]

    elif name == "bell":
        rho = target_pair_density(p["gamma"])
        payload["scalars"]["M"] = horodecki_m(rho)
        payload["scalars"]["concurrence"] = concurrence(rho)
        payload["flags"]["violated"] = chsh_violated(rho)

    elif name == "absorption":
        _, res = massless_absorption()
        payload["scalars"] = dict(res.scalars)

    elif name == "coherent-rotation":
        res = coherent_field_rotation(p["alpha"], p["beta"], p["eta"], p["cutoff"])
        payload["scalars"] = dict(res.scalars)
        payload["params"]["cutoff"] = res.params["cutoff"]

    else:  # pragma: no cover - _validate guards this
        raise UsageError(f"unknown experiment {name!r}")

    return payload


# ---------------------------------------------------------------------------
# emission
# ---------------------------------------------------------------------------

def _json_clean(obj):
    if isinstance(obj, dict):
        return {k: _json_clean(v) for k, v in sorted(obj.items())}
    if isinstance(obj, (list, tuple)):
        return [_json_clean(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return float(_fmt12(obj))
    return str(obj)


def _emit_json(payload: dict) -> str:
    doc = {k: v for k, v in payload.items() if v not in (None, {},)}
    return json.dumps(_json_clean(doc), indent=2, sort_keys=True) + "\n"


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return _fmt12(v)
    return str(v)


def _emit_csv(payload: dict) -> str:
    lines = []
    if payload["series"] is not None:
        lines.append(",".join(payload["series_columns"]))
        for row in payload["series"]:
            lines.append(",".join(_csv_cell(float(v)) for v in row))
    elif payload["table"] is not None:
        lines.append(",".join(payload["table"]["columns"]))
        for row in payload["table"]["rows"]:
            lines.append(",".join(_csv_cell(v) for v in row))
    else:
        lines.append("key,value")
        for k in sorted(payload["scalars"]):
            lines.append(f"{k},{_csv_cell(payload['scalars'][k])}")
        for k in sorted(payload["flags"]):
            lines.append(f"{k},{_csv_cell(payload['flags'][k])}")
    return "\n".join(lines) + "\n"


def _emit_table(payload: dict) -> str:
    lines = [f"experiment: {payload['name']}"]
    for k in sorted(payload["params"]):
        lines.append(f"{k} = {_csv_cell(payload['params'][k])}")
    if payload["params"]:
        lines.append("")
    for k in sorted(payload["scalars"]):
        lines.append(f"{k} = {_fmt12(payload['scalars'][k])}")
    for k in sorted(payload["flags"]):
        lines.append(f"{k} = {_csv_cell(payload['flags'][k])}")
    if payload["table"] is not None:
        cols = payload["table"]["columns"]
        rows = [[(_csv_cell(v) or "-") for v in row] for row in payload["table"]["rows"]]
        widths = [max(len(c), *(len(r[i]) for r in rows)) for i, c in enumerate(cols)]
        lines.append("")
        lines.append("  ".join(c.ljust(w) for c, w in zip(cols, widths)))
        for r in rows:
            lines.append("  ".join(v.ljust(w) for v, w in zip(r, widths)))
    if payload["series"] is not None:
        lines.append("")
        cols = payload["series_columns"]
        lines.append("  ".join(c.rjust(16) for c in cols))
        for row in payload["series"]:
            lines.append("  ".join(_fmt12(v).rjust(16) for v in row))
    return "\n".join(lines) + "\n"


def _render_plot(config: RunConfig, payload: dict) -> str:
    series = payload["series"]
    cols = payload["series_columns"]
    if config.experiment == "rotate-sweep":
        return line_chart(series, cols[0], cols[1], "infidelity vs ancilla count")
    if config.experiment == "fermion-sweep":
        if len(cols) == 2:
            return line_chart(series, cols[0], cols[1], "concurrence vs mixing angle")
        return heatmap(series, cols[0], cols[1], "concurrence over the angle grid")
    raise UsageError(f"experiment {config.experiment!r} produces no plot")


def _write_file(path: str, text: str):
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except BaseException:
        try:
            os.unlink(path)
        except OSError:
            pass
        raise


def run(config: RunConfig) -> int:
    """Execute a validated config and emit its artifacts; returns the exit status."""
    payload = _execute(config)
    if config.format == "json":
        text = _emit_json(payload)
    elif config.format == "csv":
        text = _emit_csv(payload)
    else:
        text = _emit_table(payload)
    plot_text = _render_plot(config, payload) if config.plot else None

    if config.out:
        _write_file(config.out, text)
    else:
        sys.stdout.write(text)
    if config.plot:
        _write_file(config.plot, plot_text)
    return 0


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    try:
        config = parse_config(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return run(config)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
