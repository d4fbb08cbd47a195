"""Deterministic report emission.

Identical inputs produce byte-identical output: keys are emitted sorted,
floats rendered with a fixed 17-significant-digit format (which round-trips
float64 exactly, so ``parse(emit(r))`` reproduces every numeric field
bit-for-bit), and CSV rows keep their schema order.  Emitted reports can be
archived content-addressed (sha256 of the bytes in the filename) under a
cache directory; archive files are write-once.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

__all__ = ["emit_report", "save_report", "parse_report", "csv_bytes"]


def _render_float(v: float) -> str:
    if v != v:  # NaN: JSON has no literal; emit null and let parse restore
        return "null"
    if v in (float("inf"), float("-inf")):
        return '"inf"' if v > 0 else '"-inf"'
    return format(v, ".17g")


def _render(obj, indent: int) -> str:
    pad = "  " * indent
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _render_float(obj)
    if isinstance(obj, complex):
        return _render({"re": obj.real, "im": obj.imag}, indent)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = []
        for k in sorted(obj.keys()):
            items.append(f'{pad}  {json.dumps(str(k))}: {_render(obj[k], indent + 1)}')
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}  {_render(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    # dataclass-style objects with to_dict
    to_dict = getattr(obj, "to_dict", None)
    if callable(to_dict):
        return _render(to_dict(), indent)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def csv_bytes(header: list[str], rows: list[dict]) -> bytes:
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for h in header:
            v = row[h]
            if isinstance(v, float):
                cells.append(format(v, ".17g"))
            else:
                cells.append(str(v))
        lines.append(",".join(cells))
    return ("\n".join(lines) + "\n").encode("utf-8")


def emit_report(report, fmt: str = "json",
                csv_schema: tuple[list[str], list[dict]] | None = None) -> bytes:
    """Serialize a report deterministically.

    ``fmt = 'json'`` works for anything dict-like or carrying ``to_dict``;
    ``fmt = 'csv'`` requires ``csv_schema = (header, rows)``.
    """
    if fmt == "json":
        return (_render(report, 0) + "\n").encode("utf-8")
    if fmt == "csv":
        if csv_schema is None:
            raise ValueError("csv emission needs csv_schema=(header, rows)")
        return csv_bytes(*csv_schema)
    raise ValueError(f"unknown format {fmt!r}")


def save_report(payload: bytes, cache_dir: str | Path, suffix: str) -> Path:
    """Archive emitted bytes content-addressed under cache_dir/reports;
    existing archives are never rewritten (append-only audit trail)."""
    rdir = Path(cache_dir) / "reports"
    rdir.mkdir(parents=True, exist_ok=True)
    digest = hashlib.sha256(payload).hexdigest()[:16]
    path = rdir / f"report-{digest}.{suffix}"
    if not path.exists():
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_bytes(payload)
        tmp.replace(path)
    return path


def parse_report(payload: bytes) -> dict:
    return json.loads(payload.decode("utf-8"))
