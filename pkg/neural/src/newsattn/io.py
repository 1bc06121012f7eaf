"""File exchange with the feature-extraction pipeline.

Reads the pipeline's feature export (CSV whose header runs record_id,
then the feature names, then label) and labeled news JSONL; writes the
metrics report as JSON.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError


@dataclass(frozen=True)
class FeatureTable:
    ids: tuple[str, ...]
    features: np.ndarray
    labels: tuple[int, ...]


@dataclass(frozen=True)
class NewsDoc:
    news_id: str
    body_text: str
    label: int


def load_feature_csv(path: str | Path) -> FeatureTable:
    """Read an exported feature matrix with its record ids and labels."""
    try:
        handle = open(path, encoding="utf-8", newline="")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}")
    with handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if (header is None or len(header) < 3
                or header[0] != "record_id" or header[-1] != "label"):
            raise DataError(f"{path}: header must run record_id,<features>,label")
        width = len(header)
        ids, rows, labels = [], [], []
        for lineno, record in enumerate(reader, start=2):
            if len(record) != width:
                raise DataError(
                    f"{path}:{lineno}: expected {width} fields, got {len(record)}")
            try:
                values = [float(v) for v in record[1:-1]]
                labels.append(int(record[-1]))
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: {exc}")
            if not all(np.isfinite(values)):
                raise DataError(f"{path}:{lineno}: non-finite feature value")
            rows.append(values)
            ids.append(record[0])
    if not rows:
        raise DataError(f"{path}: no feature rows")
    return FeatureTable(tuple(ids), np.asarray(rows, dtype=float), tuple(labels))


def load_labeled_news(path: str | Path) -> tuple[NewsDoc, ...]:
    """Read labeled articles from JSON Lines.

    Each line needs news_id, body_text, and an integer label of 0 or 1;
    any further fields are ignored. Blank lines are skipped.
    """
    try:
        handle = open(path, encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}")
    docs = []
    with handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}:{lineno}: invalid JSON: {exc}")
            if not isinstance(record, dict):
                raise DataError(f"{path}:{lineno}: expected an object")
            missing = {"news_id", "body_text", "label"} - record.keys()
            if missing:
                raise DataError(f"{path}:{lineno}: missing {sorted(missing)}")
            label = record["label"]
            if label not in (0, 1):
                raise DataError(f"{path}:{lineno}: label must be 0 or 1, got {label!r}")
            docs.append(NewsDoc(str(record["news_id"]), str(record["body_text"]), int(label)))
    if not docs:
        raise DataError(f"{path}: no records")
    return tuple(docs)


def write_report(path: str | Path, report: dict) -> None:
    """Write the metrics report as a single JSON object, key order kept."""
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(report, handle, indent=2)
        handle.write("\n")
