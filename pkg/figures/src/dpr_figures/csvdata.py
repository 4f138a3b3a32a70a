"""Reader for the CSV files written by the dpr-bounds CLI.

The files carry ``# config: key=value`` and ``# asymptote: k=v ...``
comment lines ahead of a regular CSV header.  Values are kept as strings
except through the typed accessors; no numerical work happens here
beyond float conversion.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field


@dataclass
class SweepData:
    path: str
    command: str = ""
    config: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    asymptotes: list = field(default_factory=list)
    columns: list = field(default_factory=list)
    rows: list = field(default_factory=list)

    def require_columns(self, names) -> None:
        missing = [n for n in names if n not in self.columns]
        if missing:
            raise ValueError(f"{self.path}: missing columns {missing}")

    def floats(self, rows, name) -> list:
        return [float(r[name]) for r in rows]

    def distinct(self, name, rows=None) -> list:
        seen = []
        for r in (self.rows if rows is None else rows):
            if r[name] not in seen:
                seen.append(r[name])
        return seen

    def select(self, **equals) -> list:
        out = self.rows
        for key, value in equals.items():
            out = [r for r in out if r.get(key) == value]
        return out


def _parse_pairs(text: str) -> dict:
    out = {}
    for chunk in text.split():
        if "=" in chunk:
            key, value = chunk.split("=", 1)
            out[key] = value
    return out


def load_csv(path: str) -> SweepData:
    data = SweepData(path=str(path))
    body = []
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                text = line[1:].strip()
                if text.startswith("dpr-bounds"):
                    data.command = text.split()[1] if len(text.split()) > 1 else ""
                elif text.startswith("config:"):
                    data.config.update(_parse_pairs(text[len("config:"):].strip()))
                elif text.startswith("note:"):
                    data.notes.append(text[len("note:"):].strip())
                elif text.startswith("asymptote:"):
                    data.asymptotes.append(
                        _parse_pairs(text[len("asymptote:"):].strip()))
            else:
                body.append(line)
    if not body:
        raise ValueError(f"{path}: no CSV header found")
    reader = csv.DictReader(io.StringIO("\n".join(body)))
    data.columns = list(reader.fieldnames or [])
    data.rows = [dict(r) for r in reader]
    if not data.rows:
        raise ValueError(f"{path}: no data rows")
    return data


def load_many(paths) -> list:
    return [load_csv(p) for p in paths]


def merge(datasets) -> SweepData:
    """Concatenate row sets that share a column superset (for multi-file
    figures); the first file's metadata wins."""
    if not datasets:
        raise ValueError("no input files")
    base = datasets[0]
    merged = SweepData(path="+".join(d.path for d in datasets),
                       command=base.command, config=dict(base.config),
                       notes=list(base.notes),
                       asymptotes=list(base.asymptotes),
                       columns=list(base.columns), rows=list(base.rows))
    for other in datasets[1:]:
        merged.rows.extend(other.rows)
        merged.asymptotes.extend(other.asymptotes)
        for col in other.columns:
            if col not in merged.columns:
                merged.columns.append(col)
    return merged
