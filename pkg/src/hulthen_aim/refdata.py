"""Bundled reference eigenvalue tables (binding energies, -E).

Cells are kept as the printed decimal strings and parsed on load; empty
cells become ``None``. Rows flagged ``suspect`` carry a cell that is
inconsistent with its neighbours and are left out of pass/fail tallies.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from decimal import Decimal
from importlib import resources
from typing import Optional

from .hulthen import EigenResult

COLUMNS = ("aim", "susy", "numerical", "variational", "shifted_1n")
HEADER = ("state", "delta") + COLUMNS + ("suspect",)
TABLE1_ROWS = 19
DATA_FILE = "hulthen_tables.csv"


@dataclass(frozen=True)
class ReferenceRow:
    state_label: str
    delta: float
    aim: Optional[float] = None
    susy: Optional[float] = None
    numerical: Optional[float] = None
    variational: Optional[float] = None
    shifted_1n: Optional[float] = None
    suspect: bool = False
    table: int = 1
    raw: dict = field(default_factory=dict, compare=False, repr=False)

    def values(self) -> dict[str, float]:
        return {c: getattr(self, c) for c in COLUMNS if getattr(self, c) is not None}


def _parse(text: str) -> list[ReferenceRow]:
    reader = csv.reader(io.StringIO(text))
    header = tuple(next(reader))
    if header != HEADER:
        raise ValueError(f"unexpected reference header {header}")
    rows = []
    for i, rec in enumerate(reader):
        if not rec:
            continue
        d = dict(zip(header, rec))
        vals = {c: (float(Decimal(d[c])) if d[c] else None) for c in COLUMNS}
        if all(v is None for v in vals.values()):
            raise ValueError(f"reference row {i} has no values")
        rows.append(
            ReferenceRow(
                state_label=d["state"],
                delta=float(Decimal(d["delta"])),
                suspect=d["suspect"].strip().lower() == "true",
                table=1 if i < TABLE1_ROWS else 2,
                raw={c: d[c] for c in COLUMNS},
                **vals,
            )
        )
    return rows


def load_reference() -> list[ReferenceRow]:
    """All rows of both tables, in printed order."""
    text = resources.files(__package__).joinpath("data", DATA_FILE).read_text("utf-8")
    return _parse(text)


def load_table(table: int) -> list[ReferenceRow]:
    if table not in (1, 2):
        raise ValueError("table must be 1 or 2")
    return [r for r in load_reference() if r.table == table]


def find_row(state_label: str, delta: float) -> ReferenceRow:
    for r in load_reference():
        if r.state_label == state_label and abs(r.delta - delta) < 1e-12:
            return r
    raise KeyError((state_label, delta))


@dataclass
class Comparison:
    row: ReferenceRow
    computed: EigenResult
    absolute: dict[str, float]
    relative: dict[str, float]

    @property
    def counts(self) -> bool:
        """Whether this comparison takes part in pass/fail aggregation."""
        return not self.row.suspect

    def within(self, column: str, tol: float) -> bool:
        return self.absolute[column] < tol


def compare(row: ReferenceRow, computed: EigenResult) -> Comparison:
    """Deviation of ``computed.binding`` from every non-empty column."""
    b = computed.binding
    absolute, relative = {}, {}
    for col, ref in row.values().items():
        absolute[col] = abs(b - ref)
        relative[col] = abs(b - ref) / abs(ref) if ref else float("inf")
    return Comparison(row, computed, absolute, relative)
