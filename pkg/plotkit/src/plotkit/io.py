"""Input schemas: scan CSV, threshold-fit JSON, bias-map-grid JSON.

These mirror the file formats written by the ``xyz2dec`` harness; nothing
here imports that package — the files are the interface.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass


class SchemaError(Exception):
    """An input file does not match its documented schema."""


SCAN_COLUMNS = ("d", "p", "P_f", "ci_low", "ci_high", "shots")


@dataclass(frozen=True)
class ScanRow:
    d: int
    p: float
    p_f: float
    ci_low: float
    ci_high: float
    shots: int


def read_scan_csv(path: str) -> list[ScanRow]:
    """Rows of a scan CSV (comment lines starting with '#' are skipped)."""
    try:
        with open(path) as fh:
            lines = [ln for ln in fh if not ln.startswith("#")]
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    reader = csv.DictReader(lines)
    fields = reader.fieldnames or []
    missing = [c for c in SCAN_COLUMNS if c not in fields]
    if missing:
        raise SchemaError(f"{path}: missing column(s) {', '.join(missing)}")
    rows = []
    for i, rec in enumerate(reader):
        try:
            row = ScanRow(d=int(rec["d"]), p=float(rec["p"]),
                          p_f=float(rec["P_f"]), ci_low=float(rec["ci_low"]),
                          ci_high=float(rec["ci_high"]), shots=int(rec["shots"]))
        except (TypeError, ValueError, KeyError) as exc:
            raise SchemaError(f"{path}: bad value in data row {i + 1}: {exc}") from exc
        if not (0.0 <= row.ci_low <= row.p_f <= row.ci_high <= 1.0):
            raise SchemaError(f"{path}: inconsistent interval in data row {i + 1}")
        rows.append(row)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def read_fit_json(path: str) -> dict:
    """Threshold-fit JSON: requires kind == 'threshold-fit', p_th, sigma."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot parse {path}: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("kind") != "threshold-fit":
        raise SchemaError(f"{path}: not a threshold-fit document")
    for key in ("p_th", "sigma"):
        if not isinstance(doc.get(key), (int, float)):
            raise SchemaError(f"{path}: missing numeric field '{key}'")
    return doc


def read_biasmap_json(path: str) -> dict:
    """Bias-map grid JSON: kind == 'bias-map-grid' with eta/s0/s1 arrays."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot parse {path}: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("kind") != "bias-map-grid":
        raise SchemaError(f"{path}: not a bias-map-grid document")
    eta = doc.get("eta")
    if not isinstance(eta, list) or not eta:
        raise SchemaError(f"{path}: 'eta' must be a non-empty list")
    for key in ("s0", "s1"):
        rows = doc.get(key)
        if (not isinstance(rows, list) or len(rows) != len(eta)
                or any(not isinstance(r, list) or len(r) != 4 for r in rows)):
            raise SchemaError(
                f"{path}: '{key}' must be a list of {len(eta)} rows of 4 values")
        for r in rows:
            if abs(sum(r) - 1.0) > 1e-6:
                raise SchemaError(f"{path}: a '{key}' row does not sum to 1")
    return doc
