"""Command-line front end.

Every knob can come from a flag, from a flat ``key=value`` config file passed
with ``--config`` (``#`` starts a comment), or from the built-in default, in
that order of precedence. The only environment variable consulted is
``PDMENT_OUTPUT_DIR``, which replaces the default output directory.

Exit codes: 0 success, 1 some table cell deviates, 2 usage error,
3 numerical failure.
"""

import argparse
import math
import os
import sys
from dataclasses import dataclass, fields, replace

import numpy as np

from . import zk
from .errors import InvalidParams, PdmentError, UnsupportedOrder
from .fourier import transform_residual
from .harness.runner import CellStatus, format_float, summary_counts, to_json, write_outputs, write_text
from .measures import full_report
from .quad import QuadratureConfig
from .states import Harmonic, MassKind, MassProfile, NormalizationMode, Quartic, StateId, StateModel, SymmetricWell

EXIT_OK = 0
EXIT_DEVIATES = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

COMMANDS = ("compute", "tables", "solve", "ft-residual")
OUTPUT_ENV = "PDMENT_OUTPUT_DIR"


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str = "compute"
    state: str = StateId.QUARTIC_CONST.value
    A: float = 1.0
    lam: float = 0.2
    mode: str = NormalizationMode.PAPER.value
    momentum: str = "auto"
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_level: int = 12
    box_L: float = 10.0
    L: float = 10.0
    n: int = 2000
    mass: str = "constant"
    m0: float = 1.0
    potential: str = "harmonic"
    a: float = 1.0
    b: float = 1.0
    V0: float = 1.0
    out: str = "results"
    format: str = "json"
    renormalized: bool = True

    def quadrature(self):
        return QuadratureConfig(self.abs_tol, self.rel_tol, self.max_level, self.box_L)


# config-file / flag name -> RunConfig field
_KEYS = {f.name: f.name for f in fields(RunConfig) if f.name != "command"}
_KEYS["lambda"] = "lam"
del _KEYS["lam"]

_HELP = {
    "state": "wavefunction model",
    "A": "quartic-state parameter",
    "lambda": "symmetric-well parameter",
    "mode": "paper: printed amplitudes as they stand; renormalized: unit norm",
    "momentum": "auto, analytic (printed phi) or numeric (direct transform)",
    "abs_tol": "quadrature absolute tolerance",
    "rel_tol": "quadrature relative tolerance",
    "max_level": "quadrature refinement levels",
    "box_L": "box halfwidth for non-normalizable integrals",
    "L": "solver grid halfwidth",
    "n": "solver grid points",
    "mass": "constant or solitonic m0/(1+x^2)",
    "m0": "mass scale",
    "potential": "harmonic a x^2, quartic a x^2 + b x^4, or symwell",
    "a": "x^2 coefficient",
    "b": "x^4 coefficient",
    "V0": "symmetric-well depth",
    "out": f"output directory (env {OUTPUT_ENV} overrides the default)",
    "format": "stdout format: json or csv",
    "renormalized": "also run the unit-norm invariant pass (tables)",
}

_CHOICES = {
    "state": [s.value for s in StateId],
    "mode": [m.value for m in NormalizationMode],
    "momentum": ["auto", "analytic", "numeric"],
    "mass": [k.value for k in MassKind],
    "potential": ["harmonic", "quartic", "symwell"],
    "format": ["json", "csv"],
}

# which knobs each subcommand shows
_COMMAND_KEYS = {
    "compute": ("state", "A", "lambda", "mode", "momentum", "abs_tol", "rel_tol", "max_level",
                "box_L", "format"),
    "tables": ("abs_tol", "rel_tol", "max_level", "box_L", "out", "renormalized"),
    "solve": ("mass", "m0", "potential", "a", "b", "V0", "lambda", "L", "n", "out", "format"),
    "ft-residual": ("state", "A", "lambda", "mode", "abs_tol", "rel_tol", "max_level", "box_L",
                    "format"),
}


def _defaults():
    base = RunConfig()
    env = os.environ.get(OUTPUT_ENV)
    return replace(base, out=env) if env else base


def _field_type(field_name):
    return type(getattr(RunConfig(), field_name))


def _convert(key, text):
    name = _KEYS[key]
    kind = _field_type(name)
    try:
        if kind is bool:
            low = str(text).strip().lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(text)
        if kind is int:
            value = float(text)
            if value != int(value):
                raise ValueError(text)
            return int(value)
        return kind(text)
    except (TypeError, ValueError):
        raise UsageError(f"{key} must be a {kind.__name__}, got {text!r}") from None


def read_config_file(path):
    """Parse a flat ``key=value`` file into ``{key: text}``."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc.strerror}") from None
    values = {}
    for number, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{number}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_") if key.replace("-", "_") in _KEYS else key
        if key not in _KEYS:
            raise UsageError(f"unknown config key {key!r}")
        values[key] = value
    return values


def validate(cfg):
    checks = (
        ("A", cfg.A > 0 and math.isfinite(cfg.A)),
        ("lambda", cfg.lam > 0 and math.isfinite(cfg.lam)),
        ("abs_tol", cfg.abs_tol > 0),
        ("rel_tol", cfg.rel_tol > 0),
        ("max_level", cfg.max_level >= 1),
        ("box_L", cfg.box_L > 0),
        ("L", cfg.L > 0),
        ("m0", cfg.m0 > 0),
        ("V0", math.isfinite(cfg.V0)),
        ("a", math.isfinite(cfg.a)),
    )
    for key, ok in checks:
        if not ok:
            raise UsageError(f"{key} must be > 0" if key not in ("V0", "a") else f"{key} must be finite")
    if cfg.n < 64:
        raise UsageError("n must be >= 64")
    if cfg.potential == "quartic" and not cfg.b > 0:
        raise UsageError("b must be > 0")
    for key, allowed in _CHOICES.items():
        value = getattr(cfg, _KEYS[key])
        if key == "state" and value == "all" and cfg.command == "ft-residual":
            continue
        if value not in allowed:
            raise UsageError(f"{key} must be one of {', '.join(allowed)}")
    return cfg


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    d = _defaults()
    parser = _Parser(prog="pdment", description=__doc__.split("\n\n")[0],
                     formatter_class=argparse.RawDescriptionHelpFormatter,
                     epilog="exit codes: 0 ok, 1 deviating table cells, 2 usage error, "
                            "3 numerical failure")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True
    blurbs = {
        "compute": "measures for one state, as JSON",
        "tables": "reproduce the printed tables and write the deviation ledger",
        "solve": "finite-difference ground state; writes psi.csv",
        "ft-residual": "printed vs numeric momentum density, per state",
    }
    for command in COMMANDS:
        p = sub.add_parser(command, help=blurbs[command], description=blurbs[command])
        p.add_argument("--config", metavar="FILE", help="key=value file (flags win over it)")
        if command == "ft-residual":
            p.add_argument("--all", action="store_true", help="all four states (default when "
                           "--state is not given)")
        for key in _COMMAND_KEYS[command]:
            name = _KEYS[key]
            default = getattr(d, name)
            kwargs = {"dest": key, "default": argparse.SUPPRESS,
                      "help": f"{_HELP[key]} (default: {default})"}
            if key in _CHOICES:
                kwargs["choices"] = _CHOICES[key]
            if isinstance(default, bool):
                p.add_argument(f"--{key.replace('_', '-')}", action=argparse.BooleanOptionalAction,
                               **kwargs)
            else:
                kwargs["metavar"] = key.upper() if key not in ("A", "L") else key
                p.add_argument(f"--{key.replace('_', '-')}", **kwargs)
    return parser


def parse_config(argv=None):
    """Merge defaults, the optional config file and flags into a :class:`RunConfig`."""
    ns = vars(build_parser().parse_args(argv))
    command = ns.pop("command")
    cfg_path = ns.pop("config", None)
    explicit_all = ns.pop("all", False)
    merged = {}
    if cfg_path:
        merged.update(read_config_file(cfg_path))
    merged.update(ns)
    values = {_KEYS[k]: _convert(k, v) for k, v in merged.items()}
    if command == "ft-residual" and (explicit_all or "state" not in merged):
        values["state"] = "all"
    return validate(replace(_defaults(), command=command, **values))


# ------------------------------------------------------------------ running ---

def _model(cfg, state=None):
    sid = StateId(state or cfg.state)
    kw = {"A": cfg.A} if sid in (StateId.QUARTIC_CONST, StateId.QUARTIC_PDM) else {"lam": cfg.lam}
    return StateModel(sid, mode=cfg.mode, **kw)


def _print_mapping(data, fmt, stream):
    if fmt == "json":
        stream.write(to_json(data) + "\n")
        return
    stream.write("key,value\n")
    for key, value in data.items():
        if isinstance(value, float):
            value = format_float(value)
        elif isinstance(value, (list, tuple)):
            value = ";".join(map(str, value))
        stream.write(f"{key},{value}\n")


def _compute(cfg, stream):
    model = _model(cfg)
    momentum = None if cfg.momentum == "auto" else cfg.momentum
    report = full_report(model, cfg.quadrature(), momentum)
    data = {"state": model.id.value, model.parameter_name: model.parameter}
    data.update(report.to_dict())
    _print_mapping(data, cfg.format, stream)
    return EXIT_OK


def _tables(cfg, stream):
    ledger = write_outputs(cfg.out, cfg.quadrature(), renormalized=cfg.renormalized)
    counts = summary_counts(ledger)
    stream.write(f"{len(ledger)} cells: " + ", ".join(f"{k} {v}" for k, v in counts.items())
                 + f"\nwrote {os.path.join(cfg.out, 'ledger.csv')}\n")
    deviates = any(r.status is CellStatus.DEVIATES for r in ledger)
    return EXIT_DEVIATES if deviates else EXIT_OK


def _potential(cfg):
    if cfg.potential == "harmonic":
        return Harmonic(cfg.a)
    if cfg.potential == "quartic":
        return Quartic(cfg.a, cfg.b)
    return SymmetricWell(cfg.V0, cfg.lam)


def _solve(cfg, stream):
    mass = MassProfile(MassKind(cfg.mass), cfg.m0)
    grid = zk.Grid(cfg.L, cfg.n)
    H = zk.build_hamiltonian(mass, _potential(cfg), grid)
    energy, psi, converged = zk.ground_state(H)
    try:
        os.makedirs(cfg.out, exist_ok=True)
    except OSError as exc:
        raise PdmentError(f"cannot create {cfg.out}: {exc}") from exc
    path = os.path.join(cfg.out, "psi.csv")
    rows = "".join(f"{format_float(x)},{format_float(p)}\n" for x, p in zip(grid.x, psi))
    write_text(path, "x,psi\n" + rows)
    data = {"E0": energy, "converged": converged, "mass": cfg.mass, "potential": cfg.potential,
            "L": cfg.L, "n": cfg.n, "psi_csv": path}
    _print_mapping(data, cfg.format, stream)
    return EXIT_OK


def _ft_residual(cfg, stream):
    states = [s.value for s in StateId] if cfg.state == "all" else [cfg.state]
    data = {}
    for state in states:
        model = _model(cfg, state)
        data[f"{state}({model.parameter_name}={format_float(model.parameter)})"] = \
            transform_residual(model, cfg.quadrature())
    _print_mapping(data, cfg.format, stream)
    return EXIT_OK


_RUNNERS = {"compute": _compute, "tables": _tables, "solve": _solve, "ft-residual": _ft_residual}


def execute(cfg, stream=None):
    return _RUNNERS[cfg.command](cfg, stream or sys.stdout)


def main(argv=None):
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        sys.stderr.write(f"pdment: error: {exc}\n")
        return EXIT_USAGE
    try:
        with np.errstate(all="ignore"):
            return execute(cfg)
    except (InvalidParams, UnsupportedOrder) as exc:
        sys.stderr.write(f"pdment: error: {exc}\n")
        return EXIT_USAGE
    except (PdmentError, ArithmeticError, np.linalg.LinAlgError) as exc:
        sys.stderr.write(f"pdment: numerical failure: {exc}\n")
        return EXIT_NUMERICAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
