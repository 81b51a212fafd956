"""Keyed result tables and their CSV / JSON serialization."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

SIG_DIGITS = 12


def format_value(x: Any) -> str:
    """Render one cell: floats with 12 significant digits, everything else via str."""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x) + 0.0  # folds -0.0 into 0.0
        if math.isnan(x) or math.isinf(x):
            return str(x)
        return f"{x:.{SIG_DIGITS}g}"
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return "" if x is None else str(x)


def jsonable(x: Any) -> Any:
    """Recursively convert numpy scalars/arrays and floats to JSON-ready values."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x) + 0.0
        return float(f"{x:.{SIG_DIGITS}g}") if math.isfinite(x) else str(x)
    if isinstance(x, complex):
        return [jsonable(x.real), jsonable(x.imag)]
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return x


@dataclass
class ScanResult:
    """A table of parameter points and computed values, plus free-form metadata."""

    columns: Sequence[str]
    rows: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError(f"expected {len(self.columns)} values, got {len(values)}")
        self.rows.append(tuple(values))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([format_value(v) for v in row])
        return buf.getvalue()

    def to_json(self) -> str:
        payload = {
            "meta": self.meta,
            "columns": list(self.columns),
            "rows": [list(r) for r in self.rows],
        }
        return dumps(payload)

    def column(self, name: str) -> list:
        i = list(self.columns).index(name)
        return [r[i] for r in self.rows]


def dumps(obj: Any) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=True) + "\n"
