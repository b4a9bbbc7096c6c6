"""GrowthReport: per-radius tables of characteristics, serialized as CSV or JSON."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

SCHEMA_VERSION = 1
FIXED_COLUMNS = ("lnM", "C", "B", "T", "NZ", "bound_ln")


def _fmt(x) -> str:
    if x is None:
        return ""
    x = float(x)
    if not math.isfinite(x):
        return ""
    return format(x + 0.0, ".17g")


def _json_value(x):
    if x is None:
        return None
    x = float(x)
    return x + 0.0 if math.isfinite(x) else None


def build_timestamp() -> str:
    """UTC timestamp; honours SOURCE_DATE_EPOCH so reruns can be byte-identical."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    t = int(epoch) if epoch else int(time.time())
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(t))


@dataclass
class GrowthReport:
    """A table indexed by radius.

    ``columns`` maps a name to a sequence as long as ``radii`` (entries may
    be ``None`` or non-finite for "not computed") or to ``None`` for a
    column that is absent altogether.  The fixed columns always appear in
    the CSV, in order, followed by any extra columns.
    """

    descriptor: str
    radii: np.ndarray
    columns: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.radii = np.asarray(self.radii, dtype=float)
        n = len(self.radii)
        for name, col in self.columns.items():
            if col is not None and len(col) != n:
                raise ValueError(f"column {name!r} has {len(col)} entries, expected {n}")

    def column(self, name: str):
        col = self.columns.get(name)
        return None if col is None else np.asarray(col, dtype=float)

    def set(self, name: str, values) -> None:
        if values is not None and len(values) != len(self.radii):
            raise ValueError(f"column {name!r} has the wrong length")
        self.columns[name] = values

    @property
    def column_names(self) -> list[str]:
        extra = [k for k in self.columns if k not in FIXED_COLUMNS]
        return ["r", *FIXED_COLUMNS, *extra]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        names = self.column_names
        w.writerow(names)
        for i, r in enumerate(self.radii):
            row = [_fmt(r)]
            for name in names[1:]:
                col = self.columns.get(name)
                row.append("" if col is None else _fmt(col[i]))
            w.writerow(row)
        return buf.getvalue()

    def to_dict(self) -> dict:
        cols = {}
        for name in self.column_names[1:]:
            col = self.columns.get(name)
            cols[name] = None if col is None else [_json_value(v) for v in col]
        return {
            "schema_version": SCHEMA_VERSION,
            "descriptor": self.descriptor,
            "radii": [float(r) for r in self.radii],
            "columns": cols,
            "metadata": self.metadata,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"

    def serialize(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown format {fmt!r}")

    @classmethod
    def from_dict(cls, data: Mapping) -> "GrowthReport":
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {data.get('schema_version')!r}")
        cols = {
            k: (None if v is None else [np.nan if x is None else x for x in v])
            for k, v in data["columns"].items()
        }
        return cls(data["descriptor"], data["radii"], cols, dict(data.get("metadata", {})))

    @classmethod
    def from_csv(cls, text: str, descriptor: str = "") -> "GrowthReport":
        rows = list(csv.reader(io.StringIO(text)))
        header, body = rows[0], rows[1:]
        if header[0] != "r":
            raise ValueError("first CSV column must be 'r'")
        data = {h: [float(row[j]) if row[j] else np.nan for row in body] for j, h in enumerate(header)}
        radii = data.pop("r")
        cols = {k: (None if all(math.isnan(x) for x in v) else v) for k, v in data.items()}
        return cls(descriptor, radii, cols)


def write_table(path_or_none, text: str) -> None:
    if path_or_none is None or str(path_or_none) == "-":
        import sys

        sys.stdout.write(text)
        return
    with open(path_or_none, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def simple_csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()
