"""Loader for the stocbeam CSV format.

Files carry ``#``-prefixed metadata lines (``# key=value``), one header
row, then numeric rows. The plotting layer never recomputes physics;
everything it draws comes from these files.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np


class SchemaError(ValueError):
    """A CSV file does not match the expected schema."""


@dataclass(frozen=True)
class Table:
    path: Path
    columns: tuple[str, ...]
    data: np.ndarray  # shape (n_rows, n_columns)
    metadata: dict[str, str]

    def column(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise SchemaError(
                f"{self.path}: missing column {name!r} (has {', '.join(self.columns)})"
            )
        return self.data[:, self.columns.index(name)]


def load_csv(path: str | Path) -> Table:
    path = Path(path)
    metadata: dict[str, str] = {}
    header: tuple[str, ...] | None = None
    rows: list[list[float]] = []
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, value = body.split("=", 1)
                metadata[key.strip()] = value.strip()
            continue
        if header is None:
            header = tuple(name.strip() for name in line.split(","))
            continue
        try:
            rows.append([float(v) for v in line.split(",")])
        except ValueError as exc:
            raise SchemaError(f"{path}:{lineno}: non-numeric row: {line!r}") from exc
        if len(rows[-1]) != len(header):
            raise SchemaError(
                f"{path}:{lineno}: expected {len(header)} fields, got {len(rows[-1])}"
            )
    if header is None or not rows:
        raise SchemaError(f"{path}: no data rows")
    return Table(path, header, np.array(rows), metadata)


def require_columns(table: Table, names: tuple[str, ...]) -> None:
    for name in names:
        if name not in table.columns:
            raise SchemaError(
                f"{table.path}: missing column {name!r} "
                f"(has {', '.join(table.columns)})"
            )
