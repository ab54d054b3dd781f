"""Command line interface: ``report``, ``qsl-sweep``, ``validate``, ``version``.

Configuration is a flat key/value set. Values come from the built-in
defaults, then ``--config FILE`` (JSON object, a previous JSON report, or
``key = value`` lines), then explicit ``--key value`` flags.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 numeric error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from . import cd_generic as cg
from . import landau_zener as lz
from . import oscillator as osc
from . import qsl
from .errors import NumericError, StaError, ValidationError

log = logging.getLogger("sta_tradeoff")

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
MODELS = ("oscillator", "landau-zener", "generic-file")
FORMATS = ("csv", "json")
CSV_COLUMNS = ("t", "t_over_tau", "control", "epsilon", "cost_rate", "angle", "vqsl")


def _bool(v):
    if isinstance(v, bool):
        return v
    s = str(v).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {v!r}")


def _opt_float(v):
    return None if v is None or str(v).strip().lower() in ("", "none", "null") else float(v)


def _opt_str(v):
    return None if v is None else str(v)


# key -> (parser, default, help)
KEYS = {
    "model": (str, "oscillator", "oscillator | landau-zener | generic-file"),
    "grid_points": (int, qsl.DEFAULT_GRID_POINTS, "number of uniform report grid points (>= 3)"),
    "quad.abs_tol": (float, qsl.ABS_TOL, "quadrature absolute tolerance"),
    "quad.rel_tol": (float, qsl.REL_TOL, "quadrature relative tolerance"),
    "format": (str, "csv", "csv | json"),
    "output": (str, "-", "output path, '-' for stdout"),
    "ramp.kind": (str, "linear", "control ramp shape"),
    "ramp.start": (_opt_float, None, "overrides the active model's start value"),
    "ramp.delta": (_opt_float, None, "overrides the active model's ramp change"),
    "ramp.tau": (_opt_float, None, "overrides the active model's duration"),
    "oscillator.omega0": (float, 1.0, "initial angular frequency"),
    "oscillator.omega_d": (float, 4.0, "frequency change over the protocol"),
    "oscillator.mass": (float, 1.0, "mass (does not enter any output)"),
    "oscillator.tau": (float, 1.0, "protocol duration"),
    "lz.delta": (float, 0.01, "bare splitting"),
    "lz.g0": (float, 0.2, "initial field"),
    "lz.g_d": (float, -0.4, "field change over the protocol"),
    "lz.tau": (float, 1.0, "protocol duration"),
    "lz.rescaled": (_bool, True, "report energies in units of the splitting"),
    "generic.file": (_opt_str, None, "JSON file with h_start and h_end matrices"),
    "generic.tau": (float, 1.0, "protocol duration for the generic model"),
    "generic.level": (int, 0, "tracked eigenstate index"),
    "cd.fd_step": (_opt_float, None, "finite-difference step as a fraction of tau (default 1e-6)"),
}


class ConfigError(StaError):
    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key


def default_config() -> dict:
    return {k: d for k, (_, d, _) in KEYS.items()}


def coerce(key, value):
    if key not in KEYS:
        raise ConfigError(key, "unknown configuration key")
    try:
        return KEYS[key][0](value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(key, f"invalid value {value!r} ({exc})") from None


def read_config_file(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError("config", f"{path}:{lineno}: expected 'key = value'")
            k, v = (x.strip() for x in line.split("=", 1))
            data[k] = v
    else:
        if not isinstance(data, dict):
            raise ConfigError("config", f"{path}: JSON config must be an object")
        if "config" in data and isinstance(data["config"], dict):
            data = data["config"]
    return {k: coerce(k, v) for k, v in data.items()}


POSITIVE_KEYS = {
    "oscillator": ("oscillator.omega0", "oscillator.mass", "oscillator.tau"),
    "landau-zener": ("lz.delta", "lz.tau"),
    "generic-file": ("generic.tau",),
}


def validate_config(cfg: dict) -> dict:
    if cfg["model"] not in MODELS:
        raise ConfigError("model", f"expected one of {MODELS}, got {cfg['model']!r}")
    if cfg["format"] not in FORMATS:
        raise ConfigError("format", f"expected one of {FORMATS}, got {cfg['format']!r}")
    if cfg["grid_points"] < 3:
        raise ConfigError("grid_points", "must be at least 3")
    for key in ("quad.abs_tol", "quad.rel_tol"):
        if not cfg[key] > 0:
            raise ConfigError(key, "must be positive")
    if cfg["ramp.kind"] != "linear":
        raise ConfigError("ramp.kind", "only 'linear' ramps are supported")
    if cfg["cd.fd_step"] is not None and not cfg["cd.fd_step"] > 0:
        raise ConfigError("cd.fd_step", "must be positive")
    for key in POSITIVE_KEYS[cfg["model"]]:
        if not cfg[key] > 0:
            raise ConfigError(key, f"must be positive, got {cfg[key]}")
    if cfg["model"] == "oscillator" and not cfg["oscillator.omega0"] + cfg["oscillator.omega_d"] > 0:
        raise ConfigError("oscillator.omega_d", "final frequency omega0 + omega_d must stay positive")
    return cfg


def _model_keys(cfg):
    model = cfg["model"]
    if model == "oscillator":
        return {"ramp.start": "oscillator.omega0", "ramp.delta": "oscillator.omega_d", "ramp.tau": "oscillator.tau"}
    if model == "landau-zener":
        return {"ramp.start": "lz.g0", "ramp.delta": "lz.g_d", "ramp.tau": "lz.tau"}
    return {"ramp.tau": "generic.tau"}


def resolve_ramp_aliases(cfg: dict) -> dict:
    cfg = dict(cfg)
    for alias, target in _model_keys(cfg).items():
        if cfg.get(alias) is not None:
            cfg[target] = cfg[alias]
    for alias in ("ramp.start", "ramp.delta", "ramp.tau"):
        if cfg.get(alias) is not None and alias not in _model_keys(cfg):
            raise ConfigError(alias, f"not applicable to model {cfg['model']!r}")
    return cfg


def tau_key(cfg) -> str:
    return {"oscillator": "oscillator.tau", "landau-zener": "lz.tau", "generic-file": "generic.tau"}[cfg["model"]]


def _load_matrix(obj, name):
    try:
        arr = np.array([[complex(*x) if isinstance(x, (list, tuple)) else complex(x) for x in row] for row in obj])
    except (TypeError, ValueError) as exc:
        raise ConfigError("generic.file", f"{name}: entries must be numbers or [re, im] pairs ({exc})") from None
    return arr


def build_protocol(cfg: dict):
    """Protocol object for the configured model; parameter errors name the offending key."""
    model = cfg["model"]
    try:
        if model == "oscillator":
            p = osc.OscillatorParams(cfg["oscillator.omega0"], cfg["oscillator.omega_d"], cfg["oscillator.tau"],
                                     cfg["oscillator.mass"])
            return osc.OscillatorProtocol(p)
        if model == "landau-zener":
            p = lz.LZParams(cfg["lz.delta"], cfg["lz.g0"], cfg["lz.g_d"], cfg["lz.tau"], cfg["lz.rescaled"])
            return lz.LZProtocol(p)
    except ValidationError as exc:
        raise ConfigError(model, str(exc)) from None
    path = cfg["generic.file"]
    if not path:
        raise ConfigError("generic.file", "required for model generic-file")
    try:
        data = json.loads(Path(path).read_text())
        A = _load_matrix(data["h_start"], "h_start")
        B = _load_matrix(data["h_end"], "h_end")
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        raise ConfigError("generic.file", f"cannot load {path}: {exc}") from None
    tau = cfg["generic.tau"]
    try:
        sched = cg.linear_interpolation_schedule(A, B, tau)
    except ValidationError as exc:
        raise ConfigError("generic.file", str(exc)) from None
    fd = None if cfg["cd.fd_step"] is None else cfg["cd.fd_step"] * tau
    return cg.GenericProtocol(sched, cfg["generic.level"], fd)


# --- formatting ----------------------------------------------------------------------------------

def fmt(x) -> str:
    if isinstance(x, float) and np.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{float(x):.12g}"


def _json_speed(v):
    return {"unbounded": True} if np.isinf(v) else v


def report_rows(report: qsl.ProtocolReport):
    for s in report.samples:
        yield (s.t, s.t / report.tau, s.control, s.epsilon, s.cost_rate, s.angle, s.speed)


def render_report(report: qsl.ProtocolReport, cfg: dict) -> str:
    summary = {k: getattr(report, k) for k in ("total_cost", "E_tau", "tau_qsl", "tau", "final_angle")}
    if cfg["format"] == "json":
        doc = {
            "config": cfg,
            "summary": summary,
            "columns": list(CSV_COLUMNS),
            "samples": [dict(zip(CSV_COLUMNS, row[:-1] + (_json_speed(row[-1]),))) for row in report_rows(report)],
        }
        return json.dumps(doc, indent=1, sort_keys=False) + "\n"
    buf = io.StringIO()
    buf.write(f"# model={cfg['model']}\n")
    for k, v in summary.items():
        buf.write(f"# summary.{k}={fmt(v)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in report_rows(report):
        w.writerow([fmt(x) for x in row])
    return buf.getvalue()


def render_sweep(rows: list[dict], cfg: dict) -> str:
    cols = ("tau", "tau_qsl", "total_cost", "E_tau", "final_angle")
    if cfg["format"] == "json":
        return json.dumps({"config": cfg, "columns": list(cols), "rows": rows}, indent=1) + "\n"
    buf = io.StringIO()
    buf.write(f"# model={cfg['model']}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([fmt(r[c]) for c in cols])
    return buf.getvalue()


def write_output(text: str, path: str):
    if path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError("output", f"cannot write {path}: {exc}") from None


# --- commands ------------------------------------------------------------------------------------

def cmd_report(cfg: dict) -> int:
    protocol = build_protocol(cfg)
    report = qsl.build_report(protocol, cfg["grid_points"], cfg["quad.abs_tol"], cfg["quad.rel_tol"])
    write_output(render_report(report, cfg), cfg["output"])
    return EXIT_OK


def _sweep_one(cfg):
    return qsl.summarize(build_protocol(cfg), cfg["quad.abs_tol"], cfg["quad.rel_tol"])


def cmd_qsl_sweep(cfg: dict, taus: list[float], workers: int = 1) -> int:
    if not taus:
        raise ConfigError("taus", "need at least one duration")
    if any(b <= a for a, b in zip(taus, taus[1:])):
        raise ConfigError("taus", "durations must be strictly ascending")
    if any(not t > 0 for t in taus):
        raise ConfigError("taus", "durations must be positive")
    key = tau_key(cfg)
    configs = [dict(cfg, **{key: t}) for t in taus]
    for c in configs:
        build_protocol(c)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_one, configs))
    else:
        rows = [_sweep_one(c) for c in configs]
    write_output(render_sweep(rows, cfg), cfg["output"])
    return EXIT_OK


def cmd_validate(fd_fraction: float = 1e-6, out=None) -> int:
    from . import validation

    out = out or sys.stdout
    results = validation.run_all(fd_fraction=fd_fraction)
    for r in results:
        out.write(r.line() + "\n")
    failed = [r.name for r in results if not r.passed]
    if failed:
        out.write(f"{len(failed)} check(s) failed: {', '.join(failed)}\n")
        return EXIT_FAILED
    out.write(f"all {len(results)} checks passed\n")
    return EXIT_OK


# --- argument parsing ----------------------------------------------------------------------------

def _add_config_flags(p):
    p.add_argument("--config", metavar="FILE", help="configuration file (JSON or key = value lines)")
    for key, (_, default, help_) in KEYS.items():
        p.add_argument(f"--{key}", dest=key, default=argparse.SUPPRESS, metavar="VALUE",
                       help=f"{help_} (default: {default})")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sta-tradeoff", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    rep = sub.add_parser("report", help="per-time speed, cost and angle table for one protocol")
    _add_config_flags(rep)
    sw = sub.add_parser("qsl-sweep", help="QSL time, total cost and E_tau for a list of durations")
    _add_config_flags(sw)
    sw.add_argument("--taus", required=True, help="comma-separated ascending durations")
    sw.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    val = sub.add_parser("validate", help="cross-check closed forms against the numerical engines")
    val.add_argument("--fd-step", type=float, default=1e-6, help="finite-difference step as a fraction of tau")
    sub.add_parser("version", help="print the package version")
    return parser


def resolve_config(ns: argparse.Namespace) -> dict:
    cfg = default_config()
    if getattr(ns, "config", None):
        cfg.update(read_config_file(ns.config))
    for key in KEYS:
        if key in vars(ns):
            cfg[key] = coerce(key, vars(ns)[key])
    return validate_config(resolve_ramp_aliases(cfg))


def main(argv=None) -> int:
    parser = make_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if ns.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if ns.command == "version":
            print(__version__)
            return EXIT_OK
        if ns.command == "validate":
            if not ns.fd_step > 0:
                raise ConfigError("fd-step", "must be positive")
            return cmd_validate(ns.fd_step)
        cfg = resolve_config(ns)
        if ns.command == "report":
            return cmd_report(cfg)
        try:
            taus = [float(x) for x in ns.taus.split(",") if x.strip()]
        except ValueError:
            raise ConfigError("taus", f"cannot parse {ns.taus!r}") from None
        return cmd_qsl_sweep(cfg, taus, ns.workers)
    except BrokenPipeError:
        # reader closed early (e.g. piped into head); silence the flush at exit
        sys.stdout = open(os.devnull, "w")
        return EXIT_OK
    except ConfigError as exc:
        print(f"sta-tradeoff: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericError as exc:
        extra = f" (estimate {exc.estimate}, error bound {exc.error_bound})" if exc.estimate is not None else ""
        print(f"sta-tradeoff: numeric error: {exc}{extra}", file=sys.stderr)
        return EXIT_NUMERIC
    except StaError as exc:
        print(f"sta-tradeoff: error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC if isinstance(exc, ArithmeticError) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
