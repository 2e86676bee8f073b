"""CSV and manifest plumbing shared by the experiment commands.

All floats are written at full round-trip precision (shortest repr) with '.'
as the decimal separator, UTF-8, LF line endings, so identical runs produce
byte-identical files on every platform.
"""

from __future__ import annotations

import csv
import json
import os


def _cell(value) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        # plain float() first: numpy float64 subclasses float but reprs differently
        return repr(float(value))
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return value
    # numpy scalars and anything else float-like
    try:
        as_float = float(value)
    except (TypeError, ValueError):
        return str(value)
    if as_float == int(as_float) and hasattr(value, "dtype") and value.dtype.kind in "iu":
        return str(int(value))
    return repr(as_float)


def export_csv(dataset, path) -> None:
    """Write a dataset to ``path`` as a header + rows CSV.

    ``dataset`` is either an object with ``CSV_COLUMNS`` and ``rows()`` (an
    EpisodeLog) or a ``(columns, rows)`` pair.  An empty dataset yields a
    header-only file.
    """
    if hasattr(dataset, "CSV_COLUMNS"):
        columns, rows = dataset.CSV_COLUMNS, dataset.rows()
    else:
        columns, rows = dataset
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_cell(v) for v in row])
    except OSError as exc:
        raise OSError(f"could not write CSV to {os.fspath(path)!r}: {exc}") from exc


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    """Read back a CSV written by export_csv; values stay strings."""
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            rows = list(reader)
    except OSError as exc:
        raise OSError(f"could not read CSV from {os.fspath(path)!r}: {exc}") from exc
    if not rows:
        return [], []
    return rows[0], rows[1:]


def write_json_atomic(doc: dict, path) -> None:
    """Serialize ``doc`` to JSON via a temp file + rename so readers never see
    a partial manifest."""
    path = os.fspath(path)
    tmp = path + ".tmp"
    try:
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
        os.replace(tmp, path)
    except OSError as exc:
        raise OSError(f"could not write JSON to {path!r}: {exc}") from exc


def read_json(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise OSError(f"could not read JSON from {os.fspath(path)!r}: {exc}") from exc
