# springerlab/services/emitters.py

"""Serialisation of reports to json, csv and markdown."""

import json
import logging
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

FORMATS = ("json", "csv", "markdown")
SCHEMA_VERSION = 1
CUSPIDAL_MARK = "−"


def _default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else int(obj)
    if isinstance(obj, (set, frozenset, tuple)):
        return list(obj)
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    raise TypeError(f"{type(obj).__name__} is not JSON serialisable")


def to_json(payload: Any, kind: str) -> str:
    """Sorted keys so equal reports give equal bytes."""
    doc = {"schema": SCHEMA_VERSION, "kind": kind, "data": payload}
    return json.dumps(doc, default=_default, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def rows_frame(rows: Sequence[Dict[str, Any]], columns: Optional[List[str]] = None) -> pd.DataFrame:
    df = pd.DataFrame(list(rows))
    if columns is not None:
        df = df.reindex(columns=columns)
    return df


def emit_rows(rows: Sequence[Dict[str, Any]], fmt: str, kind: str, columns: Optional[List[str]] = None) -> str:
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}")
    if fmt == "json":
        return to_json(list(rows), kind)
    df = rows_frame(rows, columns)
    if fmt == "csv":
        return df.to_csv(index=False, lineterminator="\n")
    return df.to_markdown(index=False) + "\n"


def springer_rows(table, cuspidal_mark: str = CUSPIDAL_MARK) -> List[Dict[str, Any]]:
    """orbit / phi / character in the printed layout; cuspidal pairs carry the dash."""
    out = []
    for row in table.rows:
        character = row["character"]
        if character is None:
            character = "?" if row.get("ambiguous") else cuspidal_mark
        out.append({"orbit": row["orbit"], "phi": row["phi"], "character": character})
    return out


def emit_springer(table, fmt: str) -> str:
    if fmt == "json":
        return to_json(table.to_dict(), "springer")
    return emit_rows(springer_rows(table), fmt, "springer", ["orbit", "phi", "character"])


def emit(payload: Any, fmt: str, kind: str) -> str:
    """Dispatch on what the payload looks like: a Springer table, a list of rows or a plain report."""
    if hasattr(payload, "rows") and hasattr(payload, "ambiguities"):
        return emit_springer(payload, fmt)
    if isinstance(payload, list) and all(isinstance(r, dict) for r in payload):
        return emit_rows(payload, fmt, kind)
    if fmt != "json":
        logger.info("%s report has no tabular form; writing json", kind)
    return to_json(payload, kind)
