"""Command-line reports for the two-qubit measurement engine.

Subcommands emit flat delimited tables (CSV or JSON) to stdout or --out,
plus optional rendered figures via --plot.  Every flag can also come from a
config file (key = value lines or a single JSON object) passed with
--config or the QSZILARD_CONFIG environment variable; explicit flags win
over config values, config values win over defaults.

Exit codes: 0 success, 2 invalid arguments or config, 3 numerical failure
(LP infeasible / no convergence / non-finite table values), 1 I/O trouble.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from types import SimpleNamespace

import numpy as np

from . import bounds, engine, shots, states, steering
from .errors import (
    InfeasibleConstraintError,
    InvalidBlochError,
    InvalidConfigError,
    InvalidParamError,
    InvalidStateError,
    InvalidStrategyError,
    NoConvergenceError,
    QszilardError,
)

CONFIG_ENV = "QSZILARD_CONFIG"

_USAGE_ERRORS = (InvalidParamError, InvalidStrategyError, InvalidConfigError,
                 InvalidStateError, InvalidBlochError)


class RowSchemaError(QszilardError):
    """An output row failed the column/finiteness check."""


OPTION_TYPES = {
    "family": str,
    "eta": float,
    "q": float,
    "eta_min": float,
    "eta_max": float,
    "eta_steps": int,
    "q_min": float,
    "q_max": float,
    "q_steps": int,
    "c1": float,
    "c2": float,
    "c3": float,
    "shots": int,
    "seed": int,
    "readout_fidelity": float,
    "resolution": int,
    "format": str,
    "out": str,
    "boundary_out": str,
    "threads": int,
    "plot": str,
}

GLOBAL_DEFAULTS = {
    "family": "gibbs-invariant",
    "eta": 0.0,
    "q": 1.0,
    "eta_min": -0.9,
    "eta_max": 0.9,
    "eta_steps": 13,
    "q_min": 0.0,
    "q_max": 1.0,
    "q_steps": 11,
    "c1": None,
    "c2": None,
    "c3": None,
    "shots": None,
    "seed": 1,
    "readout_fidelity": 1.0,
    "resolution": 20000,
    "format": "csv",
    "out": None,
    "boundary_out": None,
    "threads": 1,
    "plot": None,
}

COMMAND_DEFAULTS = {
    "fig3": {"eta_min": -0.99, "eta_max": 0.99, "eta_steps": 41},
    "fig4-map": {"eta_steps": 25, "q_steps": 21},
    "fig4-scatter": {},
    "bound": {},
    "sweep": {},
    "sample": {"shots": 10000},
}

USED_OPTIONS = {
    "fig3": {"eta_min", "eta_max", "eta_steps", "shots", "seed", "readout_fidelity",
             "format", "out", "threads", "plot"},
    "fig4-map": {"family", "eta_min", "eta_max", "eta_steps", "q_min", "q_max", "q_steps",
                 "c1", "c2", "c3", "format", "out", "boundary_out", "threads", "plot"},
    "fig4-scatter": {"family", "eta_min", "eta_max", "eta_steps", "q_min", "q_max",
                     "q_steps", "c1", "c2", "c3", "format", "out", "plot"},
    "bound": {"eta", "c1", "c2", "c3", "resolution", "format", "out"},
    "sweep": {"family", "eta_min", "eta_max", "eta_steps", "q_min", "q_max", "q_steps",
              "c1", "c2", "c3", "shots", "seed", "readout_fidelity",
              "format", "out", "threads", "plot"},
    "sample": {"family", "eta", "q", "c1", "c2", "c3", "shots", "seed",
               "readout_fidelity", "format", "out"},
}

MIXTURE_FAMILIES = ("gibbs-invariant", "werner")


# ---------------------------------------------------------------- config


def _coerce(name, value, source):
    target = OPTION_TYPES[name]
    if target is str:
        if isinstance(value, str):
            return value
    elif isinstance(value, str):
        try:
            return target(value)
        except ValueError:
            pass
    elif isinstance(value, bool):
        pass
    elif target is float and isinstance(value, (int, float)):
        return float(value)
    elif target is int and isinstance(value, int):
        return value
    elif target is int and isinstance(value, float) and value.is_integer():
        return int(value)
    raise InvalidConfigError(f"{source}: option {name!r} expects {target.__name__}, got {value!r}")


def load_config(path):
    """Parse a config file into coerced option values keyed by flag name."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidConfigError(f"cannot read config file {path}: {exc}")
    raw = {}
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidConfigError(f"{path}: invalid JSON: {exc}")
        if not isinstance(data, dict):
            raise InvalidConfigError(f"{path}: JSON config must be an object")
        raw = data
    else:
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InvalidConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, value = line.split("=", 1)
            raw[key.strip()] = value.strip()
    options = {}
    for key, value in raw.items():
        name = str(key).strip().lower().replace("-", "_")
        if name not in OPTION_TYPES:
            raise InvalidConfigError(f"{path}: unknown option {key!r}")
        options[name] = _coerce(name, value, path)
    return options


def resolve_options(args, command):
    """Merge flags, config file, and defaults for one subcommand."""
    config = {}
    cfg_path = args.config if args.config is not None else os.environ.get(CONFIG_ENV)
    if cfg_path:
        config = load_config(cfg_path)
    merged = {}
    for name in USED_OPTIONS[command]:
        value = getattr(args, name, None)
        if value is None and name in config:
            value = config[name]
        if value is None:
            value = COMMAND_DEFAULTS[command].get(name, GLOBAL_DEFAULTS[name])
        merged[name] = value
    return SimpleNamespace(**merged)


# ---------------------------------------------------------------- helpers


def _check_range(value, lo, hi, name):
    if not lo <= value <= hi:
        raise InvalidParamError(f"{name} must lie in [{lo}, {hi}], got {value}")


def _grid(lo, hi, steps, name, lo_lim, hi_lim):
    steps = int(steps)
    if steps < 1:
        raise InvalidParamError(f"{name}-steps must be >= 1, got {steps}")
    if lo > hi:
        raise InvalidParamError(f"{name}-min {lo} exceeds {name}-max {hi}")
    _check_range(lo, lo_lim, hi_lim, f"{name}-min")
    _check_range(hi, lo_lim, hi_lim, f"{name}-max")
    return np.linspace(lo, hi, steps)


def _strategy(opts):
    pieces = (opts.c1, opts.c2, opts.c3)
    if all(p is None for p in pieces):
        return engine.check_strategy([1.0 / 3.0] * 3)
    return engine.check_strategy([0.0 if p is None else float(p) for p in pieces])


def _check_family(family, allowed):
    if family not in allowed:
        raise InvalidParamError(f"family must be one of {', '.join(allowed)}; got {family!r}")
    return family


def _check_format(fmt):
    if fmt not in ("csv", "json"):
        raise InvalidParamError(f"format must be csv or json, got {fmt!r}")
    return fmt


def _check_threads(threads):
    threads = int(threads)
    if threads < 1:
        raise InvalidParamError(f"threads must be >= 1, got {threads}")
    return threads


def derive_seed(base, *tags):
    """Stable child seed for one grid row, independent of evaluation order."""
    entropy = [int(base) & ((1 << 64) - 1)] + [int(t) for t in tags]
    return int(np.random.SeedSequence(entropy).generate_state(1, np.uint64)[0])


def _map_rows(fn, params, threads):
    if threads <= 1:
        return [fn(p) for p in params]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, params))


def _cell(value):
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return repr(float(value))


def validate_rows(rows, columns):
    for i, row in enumerate(rows):
        if set(row) != set(columns):
            raise RowSchemaError(f"row {i} has columns {sorted(row)}, expected {sorted(columns)}")
        for name in columns:
            value = row[name]
            if not np.isfinite(value):
                raise RowSchemaError(f"row {i}: non-finite value {value!r} in column {name!r}")


def emit(rows, columns, fmt, out):
    """Validate and write one table to a file or stdout."""
    validate_rows(rows, columns)
    if fmt == "json":
        payload = [{name: (int(r[name]) if isinstance(r[name], (int, np.integer)) else float(r[name]))
                    for name in columns} for r in rows]
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = [",".join(columns)]
        lines += [",".join(_cell(row[name]) for name in columns) for row in rows]
        text = "\n".join(lines) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _note(message):
    print(message, file=sys.stderr)


def _plot_target(opts):
    if opts.plot is None:
        return None
    if opts.plot in ("auto", "__auto__"):
        if opts.out is None:
            raise InvalidParamError("--plot with no path requires --out to derive a filename")
        return str(Path(opts.out).with_suffix(".png"))
    return opts.plot


# ---------------------------------------------------------------- commands


def cmd_fig3(args):
    opts = resolve_options(args, "fig3")
    fmt = _check_format(opts.format)
    threads = _check_threads(opts.threads)
    etas = _grid(opts.eta_min, opts.eta_max, opts.eta_steps, "eta", -1.0, 1.0)
    sampled = opts.shots is not None
    target = _plot_target(opts)

    def exact_row(eta):
        rho_ent = states.pure_entangled(eta)
        rho_cls = states.classical_correlated(eta)
        row = {"eta": float(eta)}
        for index, key in ((1, "dw_m1"), (2, "dw_m2")):
            d = engine.make_decomposition(index, eta)
            row[key] = engine.run_protocol(rho_ent, d).average - engine.run_protocol(rho_cls, d).average
        return row

    def sampled_row(item):
        k, eta = item
        rho_ent = states.pure_entangled(eta)
        rho_cls = states.classical_correlated(eta)
        cfg_ent = shots.ShotConfig(int(opts.shots), derive_seed(opts.seed, k, 0), opts.readout_fidelity)
        cfg_cls = shots.ShotConfig(int(opts.shots), derive_seed(opts.seed, k, 1), opts.readout_fidelity)
        row = {"eta": float(eta)}
        for index, key in ((1, "dw_m1"), (2, "dw_m2")):
            d = engine.make_decomposition(index, eta)
            ent = shots.sample_run(rho_ent, d, cfg_ent)
            cls = shots.sample_run(rho_cls, d, cfg_cls)
            row[key] = ent.mean - cls.mean
            row[key + "_se"] = float(np.hypot(ent.stderr, cls.stderr))
        return row

    if sampled:
        columns = ["eta", "dw_m1", "dw_m1_se", "dw_m2", "dw_m2_se"]
        rows = _map_rows(sampled_row, list(enumerate(etas)), threads)
    else:
        columns = ["eta", "dw_m1", "dw_m2"]
        rows = _map_rows(exact_row, list(etas), threads)
    emit(rows, columns, fmt, opts.out)
    if target:
        from . import plotting

        plotting.save_work_gaps(rows, target)
        _note(f"figure written to {target}")
    return 0


def cmd_fig4_map(args):
    opts = resolve_options(args, "fig4-map")
    fmt = _check_format(opts.format)
    threads = _check_threads(opts.threads)
    family = _check_family(opts.family, MIXTURE_FAMILIES)
    strategy = _strategy(opts)
    etas = _grid(opts.eta_min, opts.eta_max, opts.eta_steps, "eta", -1.0, 1.0)
    qs = _grid(opts.q_min, opts.q_max, opts.q_steps, "q", 0.0, 1.0)
    target = _plot_target(opts)

    def row(point):
        eta, q = point
        rho = states.make_state(family, eta, q)
        work = engine.average_work(rho, strategy)
        ceiling = bounds.lhs_bound_closed(states.effective_eta(rho), strategy)
        return {"eta": float(eta), "q": float(q), "work": work, "bound": ceiling,
                "violation": work - ceiling}

    def boundary_row(eta):
        if abs(eta) >= 1.0:
            return None
        q_star = bounds.violation_boundary(family, eta, strategy)
        if q_star is None:
            return None
        return {"eta": float(eta), "q_star": float(q_star)}

    rows = _map_rows(row, [(e, q) for e in etas for q in qs], threads)
    boundary = [r for r in _map_rows(boundary_row, list(etas), threads) if r is not None]
    emit(rows, ["eta", "q", "work", "bound", "violation"], fmt, opts.out)

    boundary_out = opts.boundary_out
    if boundary_out is None and opts.out is not None:
        stem = Path(opts.out)
        boundary_out = str(stem.with_name(stem.stem + "_boundary" + stem.suffix))
    if boundary_out is not None:
        emit(boundary, ["eta", "q_star"], fmt, boundary_out)
        _note(f"boundary table written to {boundary_out}")
    else:
        _note("boundary table omitted (pass --out or --boundary-out to store it)")

    if target:
        from . import plotting

        plotting.save_violation_map(rows, boundary, target)
        _note(f"figure written to {target}")
    return 0


def cmd_fig4_scatter(args):
    opts = resolve_options(args, "fig4-scatter")
    fmt = _check_format(opts.format)
    family = _check_family(opts.family, MIXTURE_FAMILIES)
    strategy = _strategy(opts)
    etas = _grid(opts.eta_min, opts.eta_max, opts.eta_steps, "eta", -1.0, 1.0)
    qs = _grid(opts.q_min, opts.q_max, opts.q_steps, "q", 0.0, 1.0)
    target = _plot_target(opts)

    result = steering.correlation_scatter(family, strategy, etas, qs)
    rows = [
        {"eta": float(e), "q": float(q), "steering_violation": float(s), "work_violation": float(w)}
        for e, q, s, w in zip(result.eta, result.q, result.steering_violation, result.work_violation)
    ]
    emit(rows, ["eta", "q", "steering_violation", "work_violation"], fmt, opts.out)
    _note(f"spearman_rank_correlation = {result.spearman!r}")

    if target:
        from . import plotting

        plotting.save_correlation_scatter(rows, result.spearman, target)
        _note(f"figure written to {target}")
    return 0


def cmd_bound(args):
    opts = resolve_options(args, "bound")
    fmt = _check_format(opts.format)
    strategy = _strategy(opts)
    eta = float(opts.eta)
    _check_range(eta, -1.0, 1.0, "eta")

    closed = bounds.lhs_bound_closed(eta, strategy)
    oracle, ensemble = bounds.lhs_bound_oracle(eta, strategy, int(opts.resolution))
    replay = bounds.replay_ensemble(ensemble, eta, strategy)
    rows = [
        {"weight": float(w), "vx": float(v[0]), "vy": float(v[1]), "vz": float(v[2])}
        for w, v in zip(ensemble.weights, ensemble.vectors)
    ]
    emit(rows, ["weight", "vx", "vy", "vz"], fmt, opts.out)
    _note(f"closed_bound = {closed!r}")
    _note(f"oracle_bound = {oracle!r}")
    _note(f"gap = {closed - oracle!r}")
    _note(f"replay_minus_oracle = {float(replay - oracle)!r}")
    _note(f"support_size = {len(rows)}")
    return 0


def cmd_sweep(args):
    opts = resolve_options(args, "sweep")
    fmt = _check_format(opts.format)
    threads = _check_threads(opts.threads)
    family = _check_family(opts.family, states.FAMILIES)
    strategy = _strategy(opts)
    etas = _grid(opts.eta_min, opts.eta_max, opts.eta_steps, "eta", -1.0, 1.0)
    qs = _grid(opts.q_min, opts.q_max, opts.q_steps, "q", 0.0, 1.0)
    sampled = opts.shots is not None
    target = _plot_target(opts)

    def row(item):
        k, (eta, q) = item
        rho = states.make_state(family, eta, q)
        ceiling = bounds.lhs_bound_closed(states.effective_eta(rho), strategy)
        out = {"eta": float(eta), "q": float(q)}
        if sampled:
            cfg = shots.ShotConfig(int(opts.shots), derive_seed(opts.seed, k), opts.readout_fidelity)
            est = shots.sample_average_work(rho, strategy, cfg)
            out["work"] = est.mean
            out["work_se"] = est.stderr
        else:
            out["work"] = engine.average_work(rho, strategy)
        out["bound"] = ceiling
        out["violation"] = out["work"] - ceiling
        return out

    points = [(e, q) for e in etas for q in qs]
    rows = _map_rows(row, list(enumerate(points)), threads)
    columns = ["eta", "q", "work", "work_se", "bound", "violation"] if sampled else \
        ["eta", "q", "work", "bound", "violation"]
    emit(rows, columns, fmt, opts.out)
    if target:
        from . import plotting

        plotting.save_sweep(rows, target)
        _note(f"figure written to {target}")
    return 0


def cmd_sample(args):
    opts = resolve_options(args, "sample")
    fmt = _check_format(opts.format)
    family = _check_family(opts.family, states.FAMILIES)
    strategy = _strategy(opts)
    eta = float(opts.eta)
    q = float(opts.q)
    rho = states.make_state(family, eta, q)
    cfg = shots.ShotConfig(int(opts.shots), int(opts.seed), opts.readout_fidelity)
    est = shots.sample_average_work(rho, strategy, cfg)
    exact = engine.average_work(rho, strategy)
    rows = [{"eta": eta, "q": q, "work": est.mean, "work_se": est.stderr,
             "shots": int(est.shots), "exact": exact}]
    emit(rows, ["eta", "q", "work", "work_se", "shots", "exact"], fmt, opts.out)
    return 0


# ---------------------------------------------------------------- parser


def _add_common(parser, command):
    used = USED_OPTIONS[command]
    parser.add_argument("--config", default=None, metavar="PATH",
                        help=f"config file (also via ${CONFIG_ENV})")
    parser.add_argument("--format", default=None, choices=["csv", "json"])
    parser.add_argument("--out", default=None, metavar="PATH",
                        help="write the table here instead of stdout")
    if "threads" in used:
        parser.add_argument("--threads", type=int, default=None,
                            help="row-level worker threads")
    if "plot" in used:
        parser.add_argument("--plot", nargs="?", const="auto", default=None, metavar="PATH",
                            help="render a figure (default: --out path with .png)")
    if "family" in used:
        parser.add_argument("--family", default=None,
                            choices=list(states.FAMILIES) if command in ("sweep", "sample")
                            else list(MIXTURE_FAMILIES))
    if "eta" in used:
        parser.add_argument("--eta", type=float, default=None)
    if "q" in used:
        parser.add_argument("--q", type=float, default=None)
    if "eta_min" in used:
        parser.add_argument("--eta-min", type=float, default=None)
        parser.add_argument("--eta-max", type=float, default=None)
        parser.add_argument("--eta-steps", type=int, default=None)
    if "q_min" in used:
        parser.add_argument("--q-min", type=float, default=None)
        parser.add_argument("--q-max", type=float, default=None)
        parser.add_argument("--q-steps", type=int, default=None)
    if "c1" in used:
        parser.add_argument("--c1", type=float, default=None, help="weight of the population setting")
        parser.add_argument("--c2", type=float, default=None, help="weight of the first coherence setting")
        parser.add_argument("--c3", type=float, default=None, help="weight of the second coherence setting")
    if "shots" in used:
        parser.add_argument("--shots", type=int, default=None,
                            help="Monte Carlo shots per estimate (omit for exact values)"
                            if command != "sample" else "Monte Carlo shots")
        parser.add_argument("--seed", type=int, default=None)
        parser.add_argument("--readout-fidelity", type=float, default=None)
    if "resolution" in used:
        parser.add_argument("--resolution", type=int, default=None,
                            help="sphere discretization size for the LP oracle")
    if "boundary_out" in used:
        parser.add_argument("--boundary-out", default=None, metavar="PATH")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qszilard",
        description="Work extraction reports for the two-qubit measurement engine.")
    sub = parser.add_subparsers(dest="command", required=True)

    specs = [
        ("fig3", cmd_fig3, "work gap between the entangled state and its classical twin"),
        ("fig4-map", cmd_fig4_map, "work violation over an (eta, q) grid, with the zero boundary"),
        ("fig4-scatter", cmd_fig4_scatter, "steering violation against work violation"),
        ("bound", cmd_bound, "closed-form ceiling versus the LP oracle at one point"),
        ("sweep", cmd_sweep, "work and ceiling over a parameter grid"),
        ("sample", cmd_sample, "finite-shot estimate at a single parameter point"),
    ]
    for name, handler, blurb in specs:
        p = sub.add_parser(name, help=blurb, description=blurb)
        _add_common(p, name)
        p.set_defaults(handler=handler)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.handler(args)
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NoConvergenceError, InfeasibleConstraintError, RowSchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except QszilardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
