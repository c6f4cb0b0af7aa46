"""Command-line front end: ``relzeta {partition,spectral,zeta,bound-state,verify}``.

Data go to standard output (or ``--output``), messages to standard error.
Exit codes: 0 success, 1 usage error, 2 bound-state region, 3 numerical failure.
"""
import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import model as cd
from .errors import BoundStateError, DomainError, PoleError, RelZetaError
from .expansions import RelativeModel
from .spectral import spectral_measure
from .verification import run_checks
from .zeta import log_partition, zeta_continued

SCHEMA_VERSION = 1
EXIT_OK, EXIT_USAGE, EXIT_BOUND_STATE, EXIT_NUMERIC = 0, 1, 2, 3

DEFAULTS = {
    "model": "coulomb-delta",
    "gamma": 1.0,
    "alpha": 0.0,
    "beta": 1.0,
    "ell": 1.0,
    "tol": 1e-8,
    "v_min": 1e-3,
    "v_max": 1e4,
    "points": 400,
    "s": -0.25,
    "format": None,
    "output": None,
    "allow_bound_state": False,
    "inject_fault": None,
}
_FLOAT_KEYS = ("gamma", "alpha", "beta", "ell", "tol", "v_min", "v_max", "s")
_BOOL_TRUE = ("1", "true", "yes", "on")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# serialisation

def fmt_float(x):
    """17 significant digits; nan and infinities become ``nan``/``inf``."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return "%.17g" % x


def _json_value(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_json_value(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [f"{pad}{_json_value(v, indent, level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps_json(obj, indent=2):
    """Deterministic JSON with reals at 17 significant digits and nan as null."""
    return _json_value(obj, indent, 0) + "\n"


def envelope(command, inputs, results, diagnostics):
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "results": results,
        "diagnostics": diagnostics,
        "version": __version__,
    }


def dumps_csv(header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt_float(x) if isinstance(x, (float, np.floating)) else str(x) for x in row))
    return "\n".join(lines) + "\n"


def _flatten(prefix, obj, out):
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}.{i}", v, out)
    else:
        out.append((prefix, obj))
    return out


# ---------------------------------------------------------------------------
# configuration

def read_config(path):
    """``key = value`` lines; ``#`` starts a comment.  Keys use the long flag names."""
    out = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key = value")
        key, value = (x.strip() for x in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in DEFAULTS:
            raise UsageError(f"{path}:{n}: unknown key {key!r}")
        out[key] = value
    return out


def _coerce(key, value):
    try:
        if key in _FLOAT_KEYS:
            return float(value)
        if key == "points":
            return int(value)
        if key == "allow_bound_state":
            return value if isinstance(value, bool) else str(value).lower() in _BOOL_TRUE
    except ValueError as exc:
        raise UsageError(f"bad value for {key}: {value!r}") from exc
    return value


def resolve_config(args):
    """Defaults, then the config file, then explicit flags."""
    cfg = dict(DEFAULTS)
    flags = {k: v for k, v in vars(args).items() if k in DEFAULTS and v is not None}
    if getattr(args, "config", None):
        cfg.update(read_config(args.config))
    cfg.update(flags)
    cfg = {k: _coerce(k, v) for k, v in cfg.items()}
    _validate(cfg)
    return cfg


def _validate(cfg):
    for key in _FLOAT_KEYS:
        if not math.isfinite(cfg[key]):
            raise UsageError(f"{key} must be finite")
    if cfg["gamma"] < 0:
        raise UsageError("gamma must be >= 0")
    for key in ("beta", "ell", "tol", "v_min"):
        if not cfg[key] > 0:
            raise UsageError(f"{key} must be > 0")
    if not cfg["v_max"] > cfg["v_min"]:
        raise UsageError("v-max must exceed v-min")
    if cfg["points"] < 2:
        raise UsageError("points must be >= 2")
    if cfg["model"] not in ("coulomb-delta", "zero"):
        raise UsageError(f"unknown model {cfg['model']!r}")
    if cfg["format"] not in (None, "csv", "json"):
        raise UsageError(f"unknown format {cfg['format']!r}")


def build_model(cfg):
    if cfg["model"] == "zero":
        return RelativeModel(trace=lambda k: np.zeros_like(np.asarray(k, dtype=complex)), name="zero")
    params = cd.ModelParams(cfg["gamma"], cfg["alpha"])
    return cd.coulomb_delta_model(params, allow_bound_state=True)


def _model_inputs(cfg):
    out = {"model": cfg["model"]}
    if cfg["model"] == "coulomb-delta":
        out.update(gamma=cfg["gamma"], alpha=cfg["alpha"])
    return out


# ---------------------------------------------------------------------------
# commands

def cmd_partition(cfg):
    model = build_model(cfg)
    res = log_partition(model, cfg["beta"], cfg["ell"], tol=cfg["tol"],
                        allow_bound_state=cfg["allow_bound_state"])
    inputs = dict(_model_inputs(cfg), beta=cfg["beta"], ell=cfg["ell"], tol=cfg["tol"])
    return envelope("partition", inputs, res.as_dict(), dict(res.diagnostics)), EXIT_OK


def sample_spectral(model, v):
    """e(v) on the grid; points where evaluation fails become nan."""
    try:
        return spectral_measure(model, v), []
    except RelZetaError:
        pass
    e = np.empty_like(v)
    bad = []
    for i, x in enumerate(v):
        try:
            e[i] = spectral_measure(model, x)
        except RelZetaError as exc:
            e[i] = np.nan
            bad.append((float(x), f"{type(exc).__name__}: {exc}"))
    return e, bad


def cmd_spectral(cfg):
    model = build_model(cfg)
    v = np.geomspace(cfg["v_min"], cfg["v_max"], cfg["points"])
    e, bad = sample_spectral(model, v)
    for x, msg in bad:
        print(f"warning: v={fmt_float(x)}: {msg}; row written as nan", file=sys.stderr)
    inputs = dict(_model_inputs(cfg), v_min=cfg["v_min"], v_max=cfg["v_max"], points=cfg["points"],
                  spacing="log")
    results = {"v": v.tolist(), "e": e.tolist()}
    diag = {"failed_points": [x for x, _ in bad]}
    return envelope("spectral", inputs, results, diag), EXIT_OK


def cmd_zeta(cfg):
    model = build_model(cfg)
    value, err = zeta_continued(model, cfg["s"], tol=cfg["tol"], allow_bound_state=cfg["allow_bound_state"],
                                return_error=True)
    inputs = dict(_model_inputs(cfg), s=cfg["s"], tol=cfg["tol"])
    return envelope("zeta", inputs, {"s": cfg["s"], "zeta": float(value)},
                    {"error_estimate": float(err), "bound_states": list(model.bound_states)}), EXIT_OK


def cmd_bound_state(cfg):
    params = cd.ModelParams(cfg["gamma"], cfg["alpha"])
    E = cd.find_bound_state(params)
    results = {
        "threshold": cd.bound_state_threshold(params.gamma),
        "exists": E is not None,
        "energy": E,
    }
    inputs = {"gamma": cfg["gamma"], "alpha": cfg["alpha"]}
    return envelope("bound-state", inputs, results, {}), EXIT_OK


def cmd_verify(cfg):
    checks = run_checks(cfg["gamma"], cfg["alpha"], cfg["beta"], flip_e31=cfg["inject_fault"] == "flip-e31")
    for c in checks:
        print(f"{c.status:4s}  {c.name}  ({c.seconds:.2f} s)", file=sys.stderr)
    rows = []
    for c in checks:
        d = c.as_dict()
        d.pop("seconds")
        rows.append(d)
    summary = {s: sum(c.status == s for c in checks) for s in ("pass", "fail", "skip")}
    inputs = {"gamma": cfg["gamma"], "alpha": cfg["alpha"], "beta": cfg["beta"]}
    if cfg["inject_fault"]:
        inputs["inject_fault"] = cfg["inject_fault"]
    code = EXIT_NUMERIC if summary["fail"] else EXIT_OK
    return envelope("verify", inputs, {"checks": rows}, {"summary": summary}), code


COMMANDS = {
    "partition": (cmd_partition, "json"),
    "spectral": (cmd_spectral, "csv"),
    "zeta": (cmd_zeta, "json"),
    "bound-state": (cmd_bound_state, "json"),
    "verify": (cmd_verify, "json"),
}


def render(env, fmt):
    if fmt == "json":
        return dumps_json(env)
    res = env["results"]
    if env["command"] == "spectral":
        return dumps_csv(["v", "e"], zip(res["v"], res["e"]))
    if env["command"] == "verify":
        return dumps_csv(["name", "status", "discrepancy", "tolerance"],
                         [(c["name"], c["status"], _csv_cell(c["discrepancy"]), _csv_cell(c["tolerance"]))
                          for c in res["checks"]])
    return dumps_csv(["key", "value"], [(k, _csv_cell(v)) for k, v in _flatten("", res, [])])


def _csv_cell(x):
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, float, np.floating, np.integer)):
        return float(x)
    return str(x)


# ---------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("model and run options")
    g.add_argument("--model", choices=("coulomb-delta", "zero"), help="operator pair (default coulomb-delta)")
    g.add_argument("--gamma", type=float, help="Coulomb coupling, >= 0 (default 1)")
    g.add_argument("--alpha", type=float, help="point-interaction strength (default 0)")
    g.add_argument("--beta", type=float, help="circle circumference, > 0 (default 1)")
    g.add_argument("--ell", type=float, help="renormalisation length, > 0 (default 1)")
    g.add_argument("--tol", type=float, help="absolute quadrature tolerance (default 1e-8)")
    g.add_argument("--v-min", type=float, help="spectral grid start (default 1e-3)")
    g.add_argument("--v-max", type=float, help="spectral grid end (default 1e4)")
    g.add_argument("--points", type=int, help="spectral grid size, log spaced (default 400)")
    g.add_argument("--s", type=float, help="zeta argument (default -0.25)")
    g.add_argument("--format", choices=("csv", "json"), help="output format")
    g.add_argument("--output", help="write data here instead of standard output")
    g.add_argument("--config", help="key = value file; flags given on the command line win")
    g.add_argument("--allow-bound-state", action="store_const", const=True, default=None,
                   help="below the threshold, work with the continuous spectrum only")
    g.add_argument("--inject-fault", choices=("flip-e31",), help=argparse.SUPPRESS)

    parser = _Parser(prog="relzeta", description="Relative zeta regularisation for the Coulomb+delta pair.")
    parser.add_argument("--version", action="version", version=f"relzeta {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    helps = {
        "partition": "regularised relative partition function log Z_R",
        "spectral": "tabulate the relative spectral measure e(v)",
        "zeta": "continued relative zeta function at --s",
        "bound-state": "threshold and negative eigenvalue",
        "verify": "run the oracle suite",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name], description=helps[name])
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("relzeta: a command is required (partition, spectral, zeta, bound-state, verify)")
        cfg = resolve_config(args)
        func, default_fmt = COMMANDS[args.command]
        env, code = func(cfg)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except BoundStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BOUND_STATE
    except (DomainError, PoleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RelZetaError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = render(env, cfg["format"] or default_fmt)
    if cfg["output"]:
        with open(cfg["output"], "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
