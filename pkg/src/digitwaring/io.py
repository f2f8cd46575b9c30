"""CSV / JSON serialisation. Exact rationals are written as "num/den" strings."""
from __future__ import annotations

import csv
import io as _io
import json
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


def ratio(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_ratio(s: str) -> Fraction:
    return Fraction(s.strip())


def jsonable(obj):
    """Recursively convert Fractions, numpy scalars/arrays and tuples."""
    if isinstance(obj, Fraction):
        return ratio(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        seq = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [jsonable(v) for v in seq]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=True)


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(["" if v is None else (ratio(v) if isinstance(v, Fraction) else v) for v in row])
    return buf.getvalue()


def write_text(path, text: str) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(text)


def write_csv(path, header, rows) -> None:
    write_text(path, csv_text(header, rows))


def write_json(path, obj) -> None:
    write_text(path, dumps(obj) + "\n")


def read_json(path):
    return json.loads(Path(path).read_text())


def counts_rows(values: Iterable[int], counts: Iterable[int]):
    return ([int(v), int(c)] for v, c in zip(values, counts))


def write_bitmap(path, bits: np.ndarray, lo: int, meta: dict | None = None) -> None:
    """Packed little-bit-order bitmap plus a JSON sidecar with its window."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_bytes(np.packbits(np.asarray(bits, dtype=bool), bitorder="little").tobytes())
    side = {"lo": int(lo), "length": int(len(bits)), "bitorder": "little"}
    side.update(meta or {})
    write_json(p.with_suffix(p.suffix + ".json"), side)


def read_bitmap(path) -> tuple[np.ndarray, int]:
    p = Path(path)
    side = read_json(p.with_suffix(p.suffix + ".json"))
    raw = np.frombuffer(p.read_bytes(), dtype=np.uint8)
    bits = np.unpackbits(raw, bitorder="little")[: side["length"]].astype(bool)
    return bits, side["lo"]
