"""Reproduction of the printed tables and the per-cell deviation ledger."""

from .runner import (
    LEDGER_FIELDS,
    CellStatus,
    LedgerRecord,
    emit,
    load_blocklist,
    run_all,
    run_table,
    write_outputs,
)
from .tables import TableSpec, builtin_tables, printed_cell_count

__all__ = [
    "LEDGER_FIELDS", "CellStatus", "LedgerRecord", "TableSpec", "builtin_tables", "emit",
    "load_blocklist", "printed_cell_count", "run_all", "run_table", "write_outputs",
]
