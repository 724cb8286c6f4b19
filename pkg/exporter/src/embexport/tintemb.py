"""TINTEMB1 store writer/reader.

The layout is the consuming toolkit's wire format, little-endian:
magic ``TINTEMB1`` | u32 entry count | u32 dim | per entry:
u16 name length, UTF-8 name bytes, dim float32 values.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

MAGIC = b"TINTEMB1"


def write_store(entries: dict[str, np.ndarray], dim: int, path: str | Path) -> None:
    parts = [MAGIC, struct.pack("<II", len(entries), dim)]
    for name, vector in entries.items():
        vec = np.asarray(vector, dtype="<f4")
        if vec.shape != (dim,):
            raise ValueError(f"vector for {name!r} has shape {vec.shape}, want ({dim},)")
        raw = name.encode("utf-8")
        parts.append(struct.pack("<H", len(raw)))
        parts.append(raw)
        parts.append(vec.tobytes())
    Path(path).write_bytes(b"".join(parts))


def read_store(path: str | Path) -> tuple[int, dict[str, np.ndarray]]:
    """Minimal reader used for self-checks after writing."""
    blob = Path(path).read_bytes()
    if blob[: len(MAGIC)] != MAGIC:
        raise ValueError(f"{path}: bad magic")
    count, dim = struct.unpack_from("<II", blob, len(MAGIC))
    offset = len(MAGIC) + 8
    entries: dict[str, np.ndarray] = {}
    for _ in range(count):
        (name_len,) = struct.unpack_from("<H", blob, offset)
        offset += 2
        name = blob[offset : offset + name_len].decode("utf-8")
        offset += name_len
        entries[name] = np.frombuffer(blob, dtype="<f4", count=dim, offset=offset).copy()
        offset += 4 * dim
    if offset != len(blob):
        raise ValueError(f"{path}: trailing bytes")
    return dim, entries
