"""Tabular documents and their table / CSV / JSON renderings."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

__all__ = ["FORMATS", "OutputDocument", "render"]

FORMATS = ("table", "csv", "json")
KINDS = ("table", "records", "report")


def _norm(value):
    if isinstance(value, (list, tuple)):
        return [_norm(v) for v in value]
    if hasattr(value, "item") and not isinstance(value, (str, bytes)):
        return value.item()  # numpy scalars
    return value


@dataclass(frozen=True)
class OutputDocument:
    kind: str
    columns: tuple[str, ...]
    rows: tuple[tuple, ...] = ()
    annotations: tuple[str, ...] = ()
    title: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown document kind {self.kind!r}")
        cols = tuple(str(c) for c in self.columns)
        rows = tuple(tuple(_norm(v) for v in row) for row in self.rows)
        for row in rows:
            if len(row) != len(cols):
                raise ValueError(f"row {row!r} does not have {len(cols)} cells")
        object.__setattr__(self, "columns", cols)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "annotations", tuple(str(a) for a in self.annotations))

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "title": self.title,
            "columns": list(self.columns),
            "rows": [list(r) for r in self.rows],
            "annotations": list(self.annotations),
        }

    @classmethod
    def from_json(cls, data: dict) -> "OutputDocument":
        return cls(
            kind=data["kind"],
            columns=tuple(data["columns"]),
            rows=tuple(tuple(r) for r in data["rows"]),
            annotations=tuple(data.get("annotations", ())),
            title=data.get("title", ""),
        )

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, list):
        return json.dumps(value, separators=(",", ":"), ensure_ascii=False)
    return str(value)


def _table(doc: OutputDocument) -> str:
    cells = [list(doc.columns)] + [[_cell(v) for v in row] for row in doc.rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(doc.columns))]
    numeric = [
        all(isinstance(r[i], int) and not isinstance(r[i], bool) for r in doc.rows) and bool(doc.rows)
        for i in range(len(doc.columns))
    ]

    def line(row):
        parts = [
            c.rjust(w) if num else c.ljust(w) for c, w, num in zip(row, widths, numeric)
        ]
        return "  ".join(parts).rstrip()

    out = []
    if doc.title:
        out.append(doc.title)
    out.append(line(cells[0]))
    out.append("  ".join("-" * w for w in widths))
    out.extend(line(r) for r in cells[1:])
    out.extend(f"note: {a}" for a in doc.annotations)
    return "\n".join(out) + "\n"


def _csv(doc: OutputDocument) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(doc.columns)
    for row in doc.rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def render(doc: OutputDocument, format: str = "table") -> bytes:
    if format == "table":
        text = _table(doc)
    elif format == "csv":
        text = _csv(doc)
    elif format == "json":
        text = json.dumps(doc.to_json(), ensure_ascii=False, indent=2, sort_keys=True) + "\n"
    else:
        raise ValueError(f"unknown format {format!r}; expected one of {', '.join(FORMATS)}")
    return text.encode("utf-8")
