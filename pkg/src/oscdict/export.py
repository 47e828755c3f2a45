"""Dictionary files: JSON, CSV and raw little-endian float64.

raw-f64 layout: magic ``b"OSCD"``, u32 format version, u64 p, u64 entry
count, then per entry ``2*p`` doubles interleaved ``re, im``. It stores the
vectors bit-exactly but no provenance.
"""

from __future__ import annotations

import csv
import io
import json
import struct
from pathlib import Path

import numpy as np

from .dictionary import DictEntry, Dictionary

RAW_MAGIC = b"OSCD"
RAW_VERSION = 1
RAW_HEADER = struct.Struct("<4sIQQ")
CSV_TAG = "# oscdict-csv 1"
FORMATS = ("json", "csv", "raw-f64")
EXTENSIONS = {"json": ".json", "csv": ".csv", "raw-f64": ".f64"}


class FormatError(ValueError):
    """Unreadable or malformed dictionary file."""


def to_json(d: Dictionary) -> str:
    doc = {
        "meta": d.meta,
        "entries": [
            {
                "kind": e.kind,
                "char_index": e.char_index,
                "rep": e.rep_params,
                "re": e.vector.real.tolist(),
                "im": e.vector.imag.tolist(),
            }
            for e in d.entries
        ],
    }
    return json.dumps(doc, separators=(",", ":")) + "\n"


def from_json(text: str) -> Dictionary:
    try:
        doc = json.loads(text)
        meta = doc["meta"]
        p = int(meta["p"])
        entries = []
        for item in doc["entries"]:
            v = np.array(item["re"], dtype=np.float64) + 1j * np.array(item["im"], dtype=np.float64)
            if v.shape != (p,):
                raise FormatError("entry length %d != p=%d" % (len(v), p))
            entries.append(DictEntry(v, item["kind"], int(item["char_index"]), dict(item["rep"])))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError("malformed JSON dictionary: %s" % exc) from exc
    return Dictionary(p, meta.get("kind", "unknown"), entries, meta)


def _rep_str(rep: dict) -> str:
    return ";".join("%s=%d" % kv for kv in rep.items())


def _rep_parse(s: str) -> dict:
    return {k: int(v) for k, v in (kv.split("=") for kv in s.split(";") if kv)}


def to_csv(d: Dictionary) -> str:
    buf = io.StringIO()
    buf.write(CSV_TAG + "\n")
    buf.write("# meta " + json.dumps(d.meta, separators=(",", ":")) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(
        ["index", "kind", "char_index", "rep"]
        + ["re_%d" % t for t in range(d.p)]
        + ["im_%d" % t for t in range(d.p)]
    )
    for i, e in enumerate(d.entries):
        nums = ["%.17g" % x for x in e.vector.real] + ["%.17g" % x for x in e.vector.imag]
        w.writerow([i, e.kind, e.char_index, _rep_str(e.rep_params)] + nums)
    return buf.getvalue()


def from_csv(text: str) -> Dictionary:
    lines = text.splitlines()
    if len(lines) < 3 or lines[0] != CSV_TAG or not lines[1].startswith("# meta "):
        raise FormatError("missing CSV header")
    try:
        meta = json.loads(lines[1][len("# meta "):])
        p = int(meta["p"])
        rows = list(csv.reader(lines[3:]))
        entries = []
        for row in rows:
            if len(row) != 4 + 2 * p:
                raise FormatError("row has %d fields, expected %d" % (len(row), 4 + 2 * p))
            nums = np.array([float(x) for x in row[4:]])
            entries.append(DictEntry(nums[:p] + 1j * nums[p:], row[1], int(row[2]), _rep_parse(row[3])))
    except (KeyError, ValueError) as exc:
        raise FormatError("malformed CSV dictionary: %s" % exc) from exc
    return Dictionary(p, meta.get("kind", "unknown"), entries, meta)


def to_raw(d: Dictionary) -> bytes:
    X = d.vectors
    body = np.empty((len(X), 2 * d.p), dtype="<f8")
    body[:, 0::2] = X.real
    body[:, 1::2] = X.imag
    return RAW_HEADER.pack(RAW_MAGIC, RAW_VERSION, d.p, len(X)) + body.tobytes()


def from_raw(data: bytes) -> Dictionary:
    if len(data) < RAW_HEADER.size:
        raise FormatError("truncated raw header")
    magic, version, p, count = RAW_HEADER.unpack_from(data)
    if magic != RAW_MAGIC or version != RAW_VERSION:
        raise FormatError("bad raw magic/version")
    need = RAW_HEADER.size + count * 2 * p * 8
    if len(data) != need:
        raise FormatError("raw body is %d bytes, expected %d" % (len(data), need))
    body = np.frombuffer(data, dtype="<f8", offset=RAW_HEADER.size).reshape(count, 2 * p)
    X = body[:, 0::2] + 1j * body[:, 1::2]
    entries = [DictEntry(v, "unknown", -1, {}) for v in X]
    return Dictionary(int(p), "unknown", entries, {"p": int(p), "kind": "unknown"})


def dumps(d: Dictionary, fmt: str) -> bytes:
    if fmt == "json":
        return to_json(d).encode()
    if fmt == "csv":
        return to_csv(d).encode()
    if fmt == "raw-f64":
        return to_raw(d)
    raise ValueError("unknown format %r" % fmt)


def loads(data: bytes) -> Dictionary:
    """Decode any supported format, detected from the leading bytes."""
    if data.startswith(RAW_MAGIC):
        return from_raw(data)
    try:
        text = data.decode()
    except UnicodeDecodeError as exc:
        raise FormatError("not a dictionary file") from exc
    if text.startswith(CSV_TAG):
        return from_csv(text)
    return from_json(text)


def write(d: Dictionary, path, fmt: str = "json") -> Path:
    path = Path(path)
    path.write_bytes(dumps(d, fmt))
    return path


def read(path) -> Dictionary:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise FormatError(str(exc)) from exc
    return loads(data)
