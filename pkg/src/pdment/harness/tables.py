"""Printed Tables I-VIII, transcribed cell for cell.

Printed values are kept as the decimal text that appears in print so the
ledger can echo them exactly.
"""

from dataclasses import dataclass

from ..states import NormalizationMode, StateId

SHANNON_COLUMNS = ("S_x", "S_k", "S_sum", "bbm_bound")
FISHER_COLUMNS = ("F_x", "F_k", "var_x", "var_k", "F_product")
COLUMN_ORDER = SHANNON_COLUMNS + FISHER_COLUMNS

# MeasureReport attribute behind each printed column
REPORT_FIELD = {
    "S_x": "S_x",
    "S_k": "S_k",
    "S_sum": "bbm_sum",
    "bbm_bound": "bbm_bound",
    "F_x": "F_x",
    "F_k": "F_k",
    "var_x": "var_x",
    "var_k": "var_k",
    "F_product": "fisher_product",
}


@dataclass(frozen=True)
class TableSpec:
    table_id: str
    state_id: StateId
    sweep_parameter: str
    sweep_values: tuple
    columns: tuple
    printed: tuple
    tolerances: dict
    mode: NormalizationMode = NormalizationMode.PAPER
    relative_tolerance: float = 0.0
    sweep_labels: tuple = ()

    def __post_init__(self):
        if not self.sweep_values:
            raise ValueError(f"{self.table_id}: no rows")
        if any(b <= a for a, b in zip(self.sweep_values, self.sweep_values[1:])):
            raise ValueError(f"{self.table_id}: sweep values must be strictly increasing")
        if len(self.printed) != len(self.sweep_values):
            raise ValueError(f"{self.table_id}: row count mismatch")
        if not self.sweep_labels:
            object.__setattr__(self, "sweep_labels", tuple(repr(v) for v in self.sweep_values))
        for row in self.printed:
            if len(row) != len(self.columns):
                raise ValueError(f"{self.table_id}: column count mismatch")

    def tolerance(self, column, printed):
        return max(self.tolerances[column], self.relative_tolerance * abs(printed))

    def cells(self):
        for value, label, row in zip(self.sweep_values, self.sweep_labels, self.printed):
            for column, text in zip(self.columns, row):
                yield value, label, column, text


def _parse(block):
    rows = [line.split() for line in block.strip().splitlines()]
    values = tuple(float(r[0]) for r in rows)
    printed = tuple(tuple(r[1:]) for r in rows)
    return values, tuple(r[0] for r in rows), printed


_BOUND = "2.1447"

_T1 = f"""
3.5 0.4137 1.7359 2.1496 {_BOUND}
3.6 0.3894 1.7605 2.1499 {_BOUND}
3.7 0.3650 1.7848 2.1498 {_BOUND}
3.8 0.3406 1.8088 2.1494 {_BOUND}
3.9 0.3161 1.8324 2.1485 {_BOUND}
4.0 0.2915 1.8558 2.1473 {_BOUND}
4.2 0.2424 1.9016 2.1448 {_BOUND}
"""

_T2 = """
3.5 7.386 0.6029 0.1507 1.846 4.453
3.6 7.704 0.5945 0.1486 1.926 4.580
3.7 8.028 0.5864 0.1466 2.007 4.707
3.8 8.356 0.5786 0.1447 2.089 4.834
3.9 8.688 0.5711 0.1428 2.172 4.962
4.0 9.024 0.5640 0.1410 2.256 5.089
4.2 9.709 0.5504 0.1376 2.427 5.344
"""

_T3 = f"""
0.01 20.458 0.00092 20.459 {_BOUND}
0.02 81.523 0.0032 81.526 {_BOUND}
0.05 506.964 0.0159 506.98 {_BOUND}
0.1 2020.11 0.0514 2020.16 {_BOUND}
0.2 8049.46 0.1564 8049.62 {_BOUND}
0.3 18070.50 0.2872 18070.79 {_BOUND}
0.4 32073.9 0.4290 32074.33 {_BOUND}
"""

_T4 = """
1.2 2.215 2.552 0.6380 0.5538 5.652
1.4 3.014 3.474 0.8685 0.7535 10.470
1.6 3.937 4.538 1.134 0.9842 17.866
1.8 4.982 5.742 1.436 1.246 28.607
2.0 6.152 7.090 1.772 1.538 43.618
2.2 7.444 8.579 2.145 1.861 63.862
2.4 8.858 10.209 2.552 2.214 90.431
"""

_T5 = f"""
0.15 1.892 0.2565 2.149 {_BOUND}
0.18 1.727 0.4434 2.170 {_BOUND}
0.20 1.638 0.5353 2.174 {_BOUND}
0.22 1.562 0.6903 2.252 {_BOUND}
0.25 1.466 0.6960 2.162 {_BOUND}
0.28 1.385 0.7619 2.147 {_BOUND}
0.30 1.340 0.810 2.150 {_BOUND}
"""

_T6 = """
0.01 0.1834 557.04 139.26 0.0458 102.16
0.02 0.2595 196.94 49.235 0.0648 51.105
0.05 0.4103 49.823 12.455 0.1026 20.442
0.08 0.5190 24.618 6.154 0.1298 12.777
0.10 0.5803 17.615 4.403 0.1450 10.222
0.15 0.7107 9.588 2.397 0.1777 6.814
0.20 0.8206 6.228 1.557 0.2051 5.110
0.25 0.9175 4.456 1.114 0.2293 4.088
"""

_T7 = f"""
2.0 0.6033 1.6511 2.254 {_BOUND}
2.1 0.6034 1.8394 2.443 {_BOUND}
2.2 0.6107 2.0343 2.645 {_BOUND}
2.3 0.6289 2.2036 2.832 {_BOUND}
2.4 0.6630 2.2848 2.948 {_BOUND}
2.5 0.7190 2.1661 2.885 {_BOUND}
2.6 0.8035 1.6592 2.463 {_BOUND}
"""

_T8 = """
0.01 1.3600 50.009 12.502 0.34 68.012
0.02 1.3595 25.0406 6.260 0.3398 34.042
0.03 1.3596 16.7331 4.183 0.1942 22.750
0.04 1.3597 12.5902 3.1476 0.3399 17.119
0.05 1.3597 10.1128 2.5282 0.3399 13.750
0.08 1.36003 6.4257 1.6064 0.3400 8.739
0.1 1.3606 5.2142 1.3036 0.3402 7.094
"""

_SHANNON_TOL = {"S_x": 5e-4, "S_k": 5e-4, "S_sum": 1e-3, "bbm_bound": 5e-4}
_SERIES_TOL_S = dict.fromkeys(SHANNON_COLUMNS, 2e-2)
_SERIES_TOL_F = dict.fromkeys(FISHER_COLUMNS, 2e-2)


def _spec(table_id, state, param, block, columns, tolerances, relative=0.0):
    values, labels, printed = _parse(block)
    return TableSpec(table_id, state, param, values, columns, printed, tolerances,
                     relative_tolerance=relative, sweep_labels=labels)


def builtin_tables():
    """All eight printed tables with their per-column absolute tolerances."""
    return [
        _spec("T1", StateId.QUARTIC_CONST, "A", _T1, SHANNON_COLUMNS, _SHANNON_TOL),
        _spec("T2", StateId.QUARTIC_CONST, "A", _T2, FISHER_COLUMNS,
              {"F_x": 5e-3, "F_k": 5e-3, "var_x": 1e-3, "var_k": 1e-2, "F_product": 1e-2}),
        _spec("T3", StateId.QUARTIC_PDM, "A", _T3, SHANNON_COLUMNS,
              {"S_x": 1e-3, "S_k": 1e-3, "S_sum": 1e-3, "bbm_bound": 5e-4}),
        _spec("T4", StateId.QUARTIC_PDM, "A", _T4, FISHER_COLUMNS,
              {"F_x": 1e-2, "F_k": 1e-3, "var_x": 1e-2, "var_k": 1e-2, "F_product": 2e-2}),
        _spec("T5", StateId.SYMWELL_CONST, "lambda", _T5, SHANNON_COLUMNS, _SERIES_TOL_S, 0.02),
        _spec("T6", StateId.SYMWELL_CONST, "lambda", _T6, FISHER_COLUMNS, _SERIES_TOL_F, 0.02),
        _spec("T7", StateId.SYMWELL_PDM, "lambda", _T7, SHANNON_COLUMNS, _SERIES_TOL_S, 0.02),
        _spec("T8", StateId.SYMWELL_PDM, "lambda", _T8, FISHER_COLUMNS, _SERIES_TOL_F, 0.02),
    ]


def printed_cell_count(tables=None):
    return sum(len(t.sweep_values) * len(t.columns) for t in tables or builtin_tables())
