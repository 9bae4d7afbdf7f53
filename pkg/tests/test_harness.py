import json

import pytest

from pdment.harness import (
    LEDGER_FIELDS,
    CellStatus,
    LedgerRecord,
    builtin_tables,
    emit,
    load_blocklist,
    printed_cell_count,
    run_all,
    run_table,
    write_outputs,
)
from pdment.harness.runner import divergence_evidence, format_float, to_json
from pdment.harness.tables import COLUMN_ORDER, TableSpec
from pdment.states import StateId

HEADER = "table_id,row_param,row_value,column,computed,printed,abs_dev,rel_dev,status"


@pytest.fixture(scope="module")
def ledger():
    return run_all()


@pytest.fixture(scope="module")
def tables():
    return {t.table_id: t for t in builtin_tables()}


def test_transcription_spot_checks(tables):
    t1 = tables["T1"]
    assert dict(zip(t1.columns, t1.printed[t1.sweep_values.index(4.2)])) == {
        "S_x": "0.2424", "S_k": "1.9016", "S_sum": "2.1448", "bbm_bound": "2.1447"}
    t6 = tables["T6"]
    assert t6.printed[t6.sweep_values.index(0.05)] == ("0.4103", "49.823", "12.455", "0.1026", "20.442")
    t7 = tables["T7"]
    assert t7.printed[t7.sweep_values.index(2.4)][:3] == ("0.6630", "2.2848", "2.948")


def test_table_shapes(tables):
    assert sorted(tables) == [f"T{i}" for i in range(1, 9)]
    rows = {tid: len(t.sweep_values) for tid, t in tables.items()}
    assert rows == {"T1": 7, "T2": 7, "T3": 7, "T4": 7, "T5": 7, "T6": 8, "T7": 7, "T8": 7}
    assert printed_cell_count() == 257
    states = [t.state_id for t in builtin_tables()]
    assert states == [StateId.QUARTIC_CONST] * 2 + [StateId.QUARTIC_PDM] * 2 + \
        [StateId.SYMWELL_CONST] * 2 + [StateId.SYMWELL_PDM] * 2


def test_table_spec_validation(tables):
    t = tables["T1"]
    with pytest.raises(ValueError):
        TableSpec("X", t.state_id, "A", (), t.columns, (), t.tolerances)
    with pytest.raises(ValueError):
        TableSpec("X", t.state_id, "A", (2.0, 1.0), t.columns, t.printed[:2], t.tolerances)


def test_coverage(ledger, tables):
    seen = [(r.table_id, r.row_value, r.column) for r in ledger]
    expected = [(t.table_id, label, c) for t in tables.values()
                for _, label, c, _ in t.cells()]
    assert len(seen) == len(set(seen)) == 257
    assert set(seen) == set(expected)


def test_blocklist_is_shipped_data():
    bl = load_blocklist()
    ids = {(e["table_id"], tuple(e["columns"])) for e in bl["non_reproducible"]}
    assert ("T3", ("S_x", "S_sum")) in ids
    assert all(e["reason"] for e in bl["non_reproducible"] + bl["advisories"])


def test_classification(ledger):
    by = {(r.table_id, r.row_value, r.column): r for r in ledger}
    assert all(r.status is CellStatus.REPRODUCED for r in ledger if r.table_id in ("T1", "T2"))
    t3 = [r for r in ledger if r.table_id == "T3"]
    assert all(r.status is CellStatus.REPRODUCED for r in t3 if r.column == "S_k")
    assert all(r.status is CellStatus.KNOWN_NON_REPRODUCIBLE for r in t3 if r.column == "S_x")
    # the one printed row that does not come out of the printed formulas
    assert by[("T5", "0.22", "S_k")].status is CellStatus.DEVIATES
    assert by[("T5", "0.22", "S_k")].computed == pytest.approx(0.6092, abs=1e-4)
    # outside series validity, still attempted and compared
    assert all(r.status is CellStatus.REPRODUCED for r in ledger if r.table_id == "T7")


def test_derived_columns_are_consistent(ledger):
    by = {(r.table_id, r.row_value, r.column): r.computed for r in ledger}
    for (tid, row, col), value in by.items():
        if col == "F_product":
            assert abs(value - by[(tid, row, "F_x")] * by[(tid, row, "F_k")]) < 1e-12
        if col == "S_sum":
            assert abs(value - (by[(tid, row, "S_x")] + by[(tid, row, "S_k")])) < 1e-12


def test_criterion_tolerances_hold_for_closed_form_tables(ledger):
    limits = {("T2", "F_product"): 1e-2, ("T4", "F_product"): 2e-2, ("T4", "F_k"): 1e-3}
    for (tid, col), tol in limits.items():
        assert all(r.abs_dev <= tol for r in ledger if r.table_id == tid and r.column == col)


def test_csv_format(ledger):
    text = emit(ledger, "csv")
    lines = text.splitlines()
    assert lines[0] == HEADER == ",".join(LEDGER_FIELDS)
    assert len(lines) == 258
    first = lines[1].split(",")
    assert first[:4] == ["T1", "A", "3.5", "S_x"]
    assert float(first[4]) == pytest.approx(0.4137, abs=5e-4)


def test_json_mirrors_csv(ledger):
    rows = json.loads(emit(ledger, "json"))
    assert len(rows) == 257
    assert list(rows[0]) == list(LEDGER_FIELDS)
    csv_rows = emit(ledger, "csv").splitlines()[1:]
    assert [r["column"] for r in rows] == [c.split(",")[3] for c in csv_rows]


def test_empty_ledger():
    assert emit([], "csv") == HEADER + "\n"
    assert json.loads(emit([], "json")) == []
    with pytest.raises(ValueError):
        emit([], "xml")


def test_emit_sorts_and_is_deterministic(ledger):
    shuffled = list(reversed(ledger))
    assert emit(shuffled, "csv") == emit(ledger, "csv")
    assert emit(run_all(), "json") == emit(ledger, "json")
    keys = [r.sort_key() for r in ledger]
    assert keys == sorted(keys)


def test_float_formatting():
    assert format_float(0.1) == "0.10000000000000001"
    assert format_float(float("nan")) == "nan"
    assert to_json({"a": float("inf"), "b": [1.5, True]}) == '{\n  "a": null,\n  "b": [1.5, true]\n}'


def test_failed_cell_is_recorded(tables, monkeypatch):
    from pdment.errors import NonFiniteIntegrand
    from pdment.harness import runner

    def explode(model, cfg):
        raise NonFiniteIntegrand(0.0)

    monkeypatch.setattr(runner, "full_report", explode)
    recs = run_table(tables["T2"], blocklist={"non_reproducible": []})
    assert len(recs) == 35
    assert all(r.status is CellStatus.DEVIATES for r in recs)
    assert all("NonFiniteIntegrand" in r.note for r in recs)
    assert "nan" in emit(recs, "csv")
    assert json.loads(emit(recs, "json"))[0]["computed"] is None


def test_divergence_evidence(tables):
    rows = divergence_evidence(tables["T3"])
    assert all(r["monotone"] for r in rows)
    assert all(r["tail_fraction"] > 0.1 for r in rows)


def test_write_outputs(tmp_path):
    ledger = write_outputs(tmp_path, renormalized=False)
    assert len(ledger) == 257
    for name in ("ledger.csv", "ledger.json", "report.md"):
        assert (tmp_path / name).stat().st_size > 0
    report = (tmp_path / "report.md").read_text()
    assert "| T1 | 28 | 28 | 0 | 0 | 100.0% |" in report
    assert "T5 lambda=0.22 S_k" in report


def test_column_order_covers_all_columns(tables):
    assert {c for t in tables.values() for c in t.columns} == set(COLUMN_ORDER)
