"""Run the printed tables, classify every cell and serialise the deviation ledger."""

import io
import json
import math
import os
import warnings
from dataclasses import dataclass, replace
from enum import Enum
from importlib import resources

from ..errors import IOFailure, NotConvergedWarning, PdmentError
from ..measures import BBM_BOUND, FISHER_BOUND, entropy_density, full_report, shannon
from ..quad import DEFAULT_CONFIG, integrate_box
from ..states import NormalizationMode, StateModel, build_state
from .tables import COLUMN_ORDER, REPORT_FIELD, builtin_tables

LEDGER_FIELDS = (
    "table_id", "row_param", "row_value", "column",
    "computed", "printed", "abs_dev", "rel_dev", "status",
)
DIVERGENCE_BOXES = (10.0, 20.0, 40.0)
INVARIANT_SLACK = 1e-9


class CellStatus(str, Enum):
    REPRODUCED = "Reproduced"
    DEVIATES = "Deviates"
    KNOWN_NON_REPRODUCIBLE = "KnownNonReproducible"


@dataclass(frozen=True)
class LedgerRecord:
    table_id: str
    row_param: str
    row_value: str
    column: str
    computed: float
    printed: str
    abs_dev: float
    rel_dev: float
    status: CellStatus
    note: str = ""

    def sort_key(self):
        return (self.table_id, float(self.row_value), COLUMN_ORDER.index(self.column))


# ---------------------------------------------------------------- blocklist ---

def load_blocklist():
    text = resources.files(__package__).joinpath("blocklist.json").read_text()
    return json.loads(text)


def _matches(entry, table_id, row_value, column):
    if entry["table_id"] != table_id:
        return False
    if entry["columns"] != "all" and column not in entry["columns"]:
        return False
    return entry["rows"] == "all" or row_value in entry["rows"]


def blocklist_reason(blocklist, table_id, row_value, column):
    for entry in blocklist["non_reproducible"]:
        if _matches(entry, table_id, row_value, column):
            return entry["reason"]
    return None


# ------------------------------------------------------------------ running ---

def _model(spec, value, mode=None):
    key = "A" if spec.sweep_parameter == "A" else "lam"
    return StateModel(spec.state_id, mode=mode or spec.mode, **{key: value})


def run_table(spec, cfg=DEFAULT_CONFIG, blocklist=None):
    """Compute and classify every printed cell of ``spec``."""
    blocklist = load_blocklist() if blocklist is None else blocklist
    records = []
    for value, label, row in zip(spec.sweep_values, spec.sweep_labels, spec.printed):
        try:
            report, error = full_report(_model(spec, value), cfg), None
        except (PdmentError, ArithmeticError, ValueError) as exc:
            report, error = None, f"{type(exc).__name__}: {exc}"
        for column, text in zip(spec.columns, row):
            printed = float(text)
            computed = math.nan if report is None else float(getattr(report, REPORT_FIELD[column]))
            abs_dev = abs(computed - printed)
            rel_dev = abs_dev / abs(printed) if printed else math.inf
            reason = blocklist_reason(blocklist, spec.table_id, value, column)
            if reason is not None:
                status, note = CellStatus.KNOWN_NON_REPRODUCIBLE, reason
            elif error is None and abs_dev <= spec.tolerance(column, printed):
                status, note = CellStatus.REPRODUCED, ""
            else:
                status, note = CellStatus.DEVIATES, error or ""
            records.append(LedgerRecord(spec.table_id, spec.sweep_parameter, label, column,
                                        computed, text, abs_dev, rel_dev, status, note))
    return records


def run_all(cfg=DEFAULT_CONFIG, tables=None):
    blocklist = load_blocklist()
    records = []
    for spec in tables or builtin_tables():
        records.extend(run_table(spec, cfg, blocklist))
    return sorted(records, key=LedgerRecord.sort_key)


# -------------------------------------------------------------- serialising ---

def format_float(x):
    """17 significant digits; non-finite values spelled ``nan``/``inf``/``-inf``."""
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _json_number(x):
    return format_float(x) if math.isfinite(x) else "null"


def _json_value(v):
    if isinstance(v, Enum):
        v = v.value
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, float):
        return _json_number(v)
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, dict):
        items = (f"{json.dumps(str(k))}: {_json_value(val)}" for k, val in v.items())
        return "{" + ", ".join(items) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_json_value(x) for x in v) + "]"
    raise TypeError(f"cannot serialise {type(v).__name__}")


def to_json(obj, indent=True):
    """Deterministic JSON with every float at 17 significant digits."""
    if not indent or not isinstance(obj, (list, dict)) or not obj:
        return _json_value(obj)
    if isinstance(obj, list):
        return "[\n" + ",\n".join("  " + _json_value(x) for x in obj) + "\n]"
    items = (f"  {json.dumps(str(k))}: {_json_value(v)}" for k, v in obj.items())
    return "{\n" + ",\n".join(items) + "\n}"


def _row(record):
    return {
        "table_id": record.table_id,
        "row_param": record.row_param,
        "row_value": record.row_value,
        "column": record.column,
        "computed": record.computed,
        "printed": record.printed,
        "abs_dev": record.abs_dev,
        "rel_dev": record.rel_dev,
        "status": record.status.value,
    }


def emit(ledger, fmt="csv"):
    """Serialise ``ledger`` as CSV or JSON text, sorted and byte-stable."""
    ledger = sorted(ledger, key=LedgerRecord.sort_key)
    fmt = fmt.lower()
    if fmt == "csv":
        out = io.StringIO()
        out.write(",".join(LEDGER_FIELDS) + "\n")
        for r in ledger:
            cells = (r.table_id, r.row_param, r.row_value, r.column, format_float(r.computed),
                     r.printed, format_float(r.abs_dev), format_float(r.rel_dev), r.status.value)
            out.write(",".join(cells) + "\n")
        return out.getvalue()
    if fmt == "json":
        # printed and row values are transcribed decimals; emit them as number tokens
        lines = []
        for r in ledger:
            d = _row(r)
            parts = []
            for k in LEDGER_FIELDS:
                if k in ("row_value", "printed"):
                    parts.append(f'"{k}": {d[k]}')
                else:
                    parts.append(f'"{k}": {_json_value(d[k])}')
            lines.append("  {" + ", ".join(parts) + "}")
        return "[]\n" if not lines else "[\n" + ",\n".join(lines) + "\n]\n"
    raise ValueError(f"unknown ledger format {fmt!r}")


def write_text(path, text):
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise IOFailure(f"cannot write {path}: {exc}") from exc


# ------------------------------------------------------------------ evidence ---

def divergence_evidence(spec, cfg=DEFAULT_CONFIG, boxes=DIVERGENCE_BOXES):
    """Box-regularised ``S_x`` at growing ``L`` for every row of ``spec``."""
    rows = []
    for value, label in zip(spec.sweep_values, spec.sweep_labels):
        model = _model(spec, value)
        psi = build_state(model, cfg)
        values = [shannon(psi, model.mode, replace(cfg, box_halfwidth_L=L)) for L in boxes]
        tail = integrate_box(lambda x: entropy_density(psi.density(x)),
                             cfg.box_halfwidth_L, cfg).tail_fraction
        rows.append({"row_value": label, "S_x": dict(zip(boxes, values)),
                     "monotone": all(b > a for a, b in zip(values, values[1:])),
                     "tail_fraction": tail})
    return rows


def variance_evidence(spec, cfg=DEFAULT_CONFIG):
    """Printed sigma^2 next to raw moments and next to F/4 of the other space."""
    rows = []
    for value, label, printed in zip(spec.sweep_values, spec.sweep_labels, spec.printed):
        r = full_report(_model(spec, value), cfg)
        cells = dict(zip(spec.columns, printed))
        rows.append({
            "row_value": label,
            "var_x": (cells["var_x"], r.var_x, r.F_k / 4.0),
            "var_k": (cells["var_k"], r.var_k, r.F_x / 4.0),
        })
    return rows


def renormalized_invariants(cfg=DEFAULT_CONFIG, tables=None):
    """Uncertainty-relation margins of every normalizable state in unit-norm mode."""
    seen = set()
    rows = []
    for spec in tables or builtin_tables():
        for value, label in zip(spec.sweep_values, spec.sweep_labels):
            key = (spec.state_id, label)
            if key in seen:
                continue
            seen.add(key)
            model = _model(spec, value, NormalizationMode.RENORMALIZED)
            if not model.normalizable:
                continue
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", NotConvergedWarning)
                r = full_report(model, cfg)
            rows.append({
                "state": spec.state_id.value,
                "param": spec.sweep_parameter,
                "value": label,
                "bbm_sum": r.bbm_sum,
                "bbm_margin": r.bbm_margin,
                "fisher_product": r.fisher_product,
                "fisher_margin": r.fisher_product - FISHER_BOUND,
                "quadrature_converged": not any(
                    issubclass(w.category, NotConvergedWarning) for w in caught),
                "holds": bool(r.bbm_sum >= BBM_BOUND - INVARIANT_SLACK
                              and r.fisher_product >= FISHER_BOUND - INVARIANT_SLACK),
            })
    rows.sort(key=lambda d: (d["state"], float(d["value"])))
    return rows


# ------------------------------------------------------------------- report ---

def _fmt(x, digits=6):
    return format(x, f".{digits}g")


def render_report(ledger, cfg=DEFAULT_CONFIG, tables=None, blocklist=None, evidence=None):
    tables = tables or builtin_tables()
    blocklist = load_blocklist() if blocklist is None else blocklist
    evidence = evidence or {}
    out = ["# Table reproduction report", ""]
    out.append(f"Mode: paper. Box halfwidth L = {_fmt(cfg.box_halfwidth_L)}. "
               f"Total printed cells: {len(ledger)}.")
    out += ["", "| table | cells | reproduced | deviates | known non-reproducible | reproduced of checked |",
            "|---|---|---|---|---|---|"]
    for spec in tables:
        recs = [r for r in ledger if r.table_id == spec.table_id]
        n_rep = sum(r.status is CellStatus.REPRODUCED for r in recs)
        n_dev = sum(r.status is CellStatus.DEVIATES for r in recs)
        n_knr = sum(r.status is CellStatus.KNOWN_NON_REPRODUCIBLE for r in recs)
        checked = n_rep + n_dev
        pct = f"{100.0 * n_rep / checked:.1f}%" if checked else "n/a"
        out.append(f"| {spec.table_id} | {len(recs)} | {n_rep} | {n_dev} | {n_knr} | {pct} |")

    deviating = [r for r in ledger if r.status is CellStatus.DEVIATES]
    out += ["", "## Deviating cells", ""]
    if not deviating:
        out.append("None.")
    for r in deviating:
        extra = f" ({r.note})" if r.note else ""
        out.append(f"- {r.table_id} {r.row_param}={r.row_value} {r.column}: computed "
                   f"{_fmt(r.computed)}, printed {r.printed}, |dev| {_fmt(r.abs_dev, 3)}{extra}")

    out += ["", "## Known non-reproducible cells", ""]
    for entry in blocklist["non_reproducible"]:
        cols = ", ".join(entry["columns"]) if entry["columns"] != "all" else "all columns"
        out.append(f"- {entry['table_id']} {cols}: {entry['reason']}")

    if "divergence" in evidence:
        out += ["", "### T3 position entropy against box size", "",
                "| A | " + " | ".join(f"S_x (L={_fmt(L)})" for L in DIVERGENCE_BOXES)
                + " | monotone | tail fraction |",
                "|---" * (len(DIVERGENCE_BOXES) + 3) + "|"]
        for row in evidence["divergence"]:
            vals = " | ".join(_fmt(row["S_x"][L]) for L in DIVERGENCE_BOXES)
            out.append(f"| {row['row_value']} | {vals} | {'yes' if row['monotone'] else 'no'} "
                       f"| {_fmt(row['tail_fraction'], 3)} |")
    for tid in ("T4", "T8"):
        key = f"variance_{tid}"
        if key in evidence:
            out += ["", f"### {tid} printed variances", "",
                    "| row | var_x printed | raw moment | F_k/4 | var_k printed | raw moment | F_x/4 |",
                    "|---|---|---|---|---|---|---|"]
            for row in evidence[key]:
                px, mx, fx = row["var_x"]
                pk, mk, fk = row["var_k"]
                out.append(f"| {row['row_value']} | {px} | {_fmt(mx)} | {_fmt(fx)} "
                           f"| {pk} | {_fmt(mk)} | {_fmt(fk)} |")

    out += ["", "## Advisories", ""]
    for entry in blocklist.get("advisories", []):
        out.append(f"- {entry['table_id']}: {entry['reason']}")

    if "invariants" in evidence:
        inv = evidence["invariants"]
        bad = [d for d in inv if not d["holds"]]
        out += ["", "## Unit-norm rerun", "",
                f"{len(inv)} normalizable states checked against S_x + S_k >= 1 + ln(pi) "
                f"and F_x F_k >= 4; {len(inv) - len(bad)} hold."]
        loose = [d for d in inv if not d["quadrature_converged"]]
        for d in loose:
            out.append(f"- {d['state']} {d['param']}={d['value']}: the numeric transform missed "
                       "its tolerance at some k (values above are still reported)")
        for d in bad:
            out.append(f"- {d['state']} {d['param']}={d['value']}: BBM margin "
                       f"{_fmt(d['bbm_margin'])}, Fisher margin {_fmt(d['fisher_margin'])}")
    return "\n".join(out) + "\n"


def write_outputs(out_dir, cfg=DEFAULT_CONFIG, renormalized=True):
    """Run every table and write ledger.csv, ledger.json, report.md (and invariants.json).

    Returns the sorted ledger.
    """
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        raise IOFailure(f"cannot create {out_dir}: {exc}") from exc
    tables = builtin_tables()
    by_id = {t.table_id: t for t in tables}
    ledger = run_all(cfg, tables)
    evidence = {
        "divergence": divergence_evidence(by_id["T3"], cfg),
        "variance_T4": variance_evidence(by_id["T4"], cfg),
        "variance_T8": variance_evidence(by_id["T8"], cfg),
    }
    if renormalized:
        evidence["invariants"] = renormalized_invariants(cfg, tables)
        write_text(os.path.join(out_dir, "invariants.json"), to_json(evidence["invariants"]) + "\n")
    write_text(os.path.join(out_dir, "ledger.csv"), emit(ledger, "csv"))
    write_text(os.path.join(out_dir, "ledger.json"), emit(ledger, "json"))
    write_text(os.path.join(out_dir, "report.md"), render_report(ledger, cfg, tables, evidence=evidence))
    return ledger


def summary_counts(ledger):
    counts = {s.value: 0 for s in CellStatus}
    for r in ledger:
        counts[r.status.value] += 1
    return counts


__all__ = [
    "CellStatus", "LedgerRecord", "LEDGER_FIELDS", "load_blocklist", "run_table", "run_all",
    "emit", "to_json", "format_float", "divergence_evidence", "variance_evidence",
    "renormalized_invariants", "render_report", "write_outputs", "summary_counts",
]
