"""Deterministic report writers: CSV (RFC 4180, LF), JSON lines, sidecar metadata."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
import time
from typing import Iterable, Mapping, Sequence


def fmt(x) -> str:
    """Full-precision text form (17 significant digits) of a report cell."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if x == 0:
            return "0"  # drop the sign of zero
        return f"{x:.17g}"
    if isinstance(x, complex):
        return f"{x.real + 0.0:.17g}{x.imag + 0.0:+.17g}j"
    if x is None:
        return ""
    return str(x)


def _jsonable(x):
    if isinstance(x, complex):
        return [_jsonable(x.real), _jsonable(x.imag)]
    if isinstance(x, float):
        if math.isfinite(x):
            return float(f"{x:.17g}")
        return fmt(x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Mapping):
        return {k: _jsonable(v) for k, v in x.items()}
    return x


def csv_text(rows: Iterable[Mapping], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt(r.get(c)) for c in columns])
    return buf.getvalue()


def jsonl_text(rows: Iterable[Mapping]) -> str:
    return "".join(json.dumps(_jsonable(dict(r)), sort_keys=False, allow_nan=False) + "\n" for r in rows)


def json_text(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, allow_nan=False) + "\n"


def atomic_write_text(path, text: str) -> None:
    """Write via a temp file in the target directory, then rename."""
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_sidecar(path, info: Mapping) -> str:
    """Metadata (timestamps included) lives next to the data file, never in it."""
    side = os.fspath(path) + ".meta.json"
    meta = {"written_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()), **info}
    atomic_write_text(side, json_text(meta))
    return side
