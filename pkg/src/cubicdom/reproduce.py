"""Recompute the published level tables and bounds and diff them against the
printed values shipped in ``cubicdom/data``.
"""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Optional

from .analysis import TSV_COLUMNS, analyze, bound
from .rules import bundled

TABLE_TOL = 5e-5  # half a unit in the fourth printed decimal
BOUND_TOL = 5e-7

TABLES = {"fig2": ("example10", 5), "fig4": ("main79", 10_000)}


def _read(name: str) -> list:
    text = resources.files("cubicdom.data").joinpath(name).read_text(encoding="utf-8")
    return [ln.split("\t") for ln in text.splitlines() if ln and not ln.startswith("#")]


def expected_table(target: str) -> dict:
    """Printed rows keyed by level; ``None`` marks an undefined cell."""
    header, *rows = _read(f"{target}.tsv")
    assert tuple(header) == TSV_COLUMNS
    return {
        int(r[0]): [None if c == "-" else float(c) for c in r[1:]]
        for r in rows
    }


def expected_bounds() -> list:
    return [(r[0], int(r[1]), float(r[2])) for r in _read("bounds.tsv")]


@dataclass(frozen=True)
class CellDiff:
    level: int
    column: str
    printed: Optional[float]
    computed: Optional[float]

    @property
    def ok(self) -> bool:
        if self.printed is None or self.computed is None:
            return self.printed is None and self.computed is None
        return abs(self.printed - self.computed) <= TABLE_TOL

    def __str__(self) -> str:
        fmt = lambda v: "-" if v is None else f"{v:.6f}"  # noqa: E731
        return f"row {self.level} {self.column}: printed {fmt(self.printed)} computed {fmt(self.computed)}"


def compare_table(target: str):
    """Return ``(table, cells)`` with one ``CellDiff`` per printed cell."""
    name, K = TABLES[target]
    table = analyze(bundled(name), K)
    cells = []
    for level, printed in expected_table(target).items():
        computed = table.row(level).as_row()
        for col, a, b in zip(TSV_COLUMNS[1:], printed, computed):
            cells.append(CellDiff(level, col, a, b))
    return table, cells


def compare_bounds():
    out = []
    for name, K, printed in expected_bounds():
        value = bound(analyze(bundled(name), K)).bound
        out.append((name, K, printed, value, abs(value - printed) <= BOUND_TOL))
    return out
