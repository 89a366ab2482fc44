"""
JSON reports and the human-readable validation table.
"""

import json
from pathlib import Path
from typing import Any, Iterable

import pandas as pd

from calculations.validation import ValidationRecord
from components.grid_table import emit_text

VALIDATION_COLUMNS = ["check_id", "formula", "status", "measured", "tolerance"]


def to_json(payload: Any) -> str:
    """Stable JSON text; non-finite floats are written as Infinity / NaN."""
    return json.dumps(payload, indent=2) + "\n"


def write_json(payload: Any, path: str | Path) -> None:
    emit_text(to_json(payload), path)


def validation_frame(records: Iterable[ValidationRecord]) -> pd.DataFrame:
    return pd.DataFrame([rec.as_dict() for rec in records], columns=VALIDATION_COLUMNS)


def validation_table(records: Iterable[ValidationRecord]) -> str:
    """Fixed-width table, one row per check, plus a pass/fail tally."""
    df = validation_frame(records)
    counts = df["status"].value_counts()
    tally = ", ".join(f"{status}: {counts.get(status, 0)}" for status in ("pass", "fail", "documented_discrepancy"))
    return df.to_string(index=False, float_format=lambda v: f"{v:.3g}") + "\n" + tally + "\n"
