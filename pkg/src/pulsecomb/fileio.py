"""Low-level CSV and JSON writers shared by the command-line client.

Floats are written with repr (shortest round-trip form), so a CSV row and
its JSON counterpart carry bit-identical numeric content and two runs with
the same seed produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path


def _fmt(x) -> str:
    return repr(float(x))


def write_rows(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(x) for x in row])


def write_json(path: Path, payload) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
