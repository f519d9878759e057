"""CSV and JSON sidecar emission with write-then-rename."""
from __future__ import annotations

import csv
import json
import os
import tempfile
from pathlib import Path


def fmt(value) -> str:
    if isinstance(value, str):
        return value
    return format(float(value), ".17g")


def _atomic_write(path: Path, write):
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", newline="", encoding="utf-8") as fh:
            write(fh)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def write_csv(path, header, rows):
    def write(fh):
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])

    _atomic_write(Path(path), write)


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader]
    return header, rows


def sidecar_path(path) -> Path:
    return Path(path).with_suffix(".json")


def write_sidecar(path, payload):
    _atomic_write(Path(path), lambda fh: fh.write(json.dumps(payload, indent=2, sort_keys=True) + "\n"))
