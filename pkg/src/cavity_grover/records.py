"""Deterministic CSV/JSON emission of experiment records.

Floats are rendered with 12 significant digits in both formats; JSON
values are quantized to the same precision before dumping so a re-read
record set compares equal to what was written.
"""

from __future__ import annotations

import csv
import io
import json


def fmt_float(x: float) -> str:
    return f"{x:.12g}"


def quantize(records: list[dict]) -> list[dict]:
    """Round every float value to 12 significant digits."""
    out = []
    for rec in records:
        out.append(
            {
                k: float(fmt_float(v)) if isinstance(v, float) else v
                for k, v in rec.items()
            }
        )
    return out


def render_records(
    records: list[dict], fmt: str, fieldnames: list[str] | None = None
) -> str:
    """Serialize records to a CSV or JSON string."""
    if fieldnames is None:
        if not records:
            raise ValueError("fieldnames required for an empty record set")
        fieldnames = list(records[0].keys())

    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(fieldnames)
        for rec in records:
            writer.writerow(
                [
                    fmt_float(v) if isinstance(v, float) else v
                    for v in (rec[f] for f in fieldnames)
                ]
            )
        return buf.getvalue()
    if fmt == "json":
        ordered = [{f: rec[f] for f in fieldnames} for rec in quantize(records)]
        return json.dumps(ordered, indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r}, expected csv or json")


def write_records(
    records: list[dict],
    fmt: str,
    path: str,
    fieldnames: list[str] | None = None,
) -> None:
    """Write records to `path`; I/O errors propagate to the caller."""
    text = render_records(records, fmt, fieldnames)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
