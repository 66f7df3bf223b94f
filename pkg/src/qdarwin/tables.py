"""Rectangular numeric tables with deterministic CSV and JSON encodings."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import jsonschema

FORMULA_VERSION = "1"


def format_number(x) -> str:
    """17 significant digits, or the empty string for a missing value."""
    if x is None:
        return ""
    return format(float(x), ".17g")


def input_hash(inputs: dict) -> str:
    """Short stable digest of the inputs that produced a table."""
    canonical = json.dumps(inputs, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]


@lru_cache(maxsize=None)
def _schema() -> dict:
    return json.loads(resources.files("qdarwin").joinpath("data/output_table.schema.json").read_text())


@dataclass
class OutputTable:
    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        self.columns = tuple(self.columns)
        self.rows = [tuple(None if v is None else float(v) for v in row) for row in self.rows]
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(f"row {row} does not match columns {self.columns}")
            if any(v is not None and not math.isfinite(v) for v in row):
                raise ValueError(f"non-finite value in row {row}")
        self.metadata = {str(k): str(v) for k, v in self.metadata.items()}

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        for key, value in self.metadata.items():
            buf.write(f"# {key}: {value}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([format_number(v) for v in row])
        return buf.getvalue()

    def to_json(self) -> str:
        rows = ",\n    ".join(
            "[" + ", ".join("null" if v is None else format_number(v) for v in row) + "]" for row in self.rows
        )
        return (
            "{\n"
            f'  "metadata": {json.dumps(self.metadata)},\n'
            f'  "columns": {json.dumps(list(self.columns))},\n'
            f'  "rows": [\n    {rows}\n  ]\n'
            "}\n"
        )

    def dumps(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown format {fmt!r}")

    @classmethod
    def from_csv(cls, text: str) -> "OutputTable":
        metadata = {}
        body = []
        for line in text.splitlines():
            if line.startswith("# "):
                key, _, value = line[2:].partition(": ")
                metadata[key] = value
            elif line:
                body.append(line)
        reader = csv.reader(body)
        columns = next(reader)
        rows = [tuple(None if cell == "" else float(cell) for cell in row) for row in reader]
        return cls(columns, rows, metadata)

    @classmethod
    def from_json(cls, text: str) -> "OutputTable":
        data = json.loads(text)
        jsonschema.validate(data, _schema())
        return cls(data["columns"], [tuple(r) for r in data["rows"]], data["metadata"])
