"""CSV / JSON rendering of result rows with a metadata header."""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from .. import __version__


def fmt_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        return format(v, ".12g")
    return str(v)


def _json_value(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        return float(format(v, ".12g"))
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    return v


def render(rows: list[dict], meta: dict, fmt: str = "csv") -> str:
    """Render rows; the header carries the package version and the run metadata."""
    meta = {"version": __version__, **meta}
    if fmt == "json":
        doc = {"meta": _json_value(meta), "rows": [_json_value(r) for r in rows]}
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    out = io.StringIO()
    out.write("# " + json.dumps(_json_value(meta), sort_keys=True) + "\n")
    columns: list[str] = []
    for r in rows:
        for key in r:
            if key not in columns:
                columns.append(key)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt_value(r.get(c)) for c in columns])
    return out.getvalue()
