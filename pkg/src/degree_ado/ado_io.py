"""Versioned little-endian binary format for built oracles.

Layout::

    b"ADO1"
    u32 n, u32 |A|
    f64 alpha, f64 c_N, f64 c_B, u64 seed
    f64 declared multiplicative stretch, f64 declared additive stretch
    u32[|A|]    centre ids (ascending)
    u32[n]      pivot vertex id per vertex (NONE when no centre is reachable)
    u32[n*|A|]  vertex-to-centre distances, row-major (NONE = unreachable)
    per vertex: u32 count, then count x (u32 vertex, u32 distance), vertex-sorted
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .ado import AdoParams, AdoStructure
from .errors import GraphFormatError

MAGIC = b"ADO1"
NONE = 0xFFFFFFFF
_HEADER = struct.Struct("<4sII3dQ2d")
_U32 = np.dtype("<u4")


def serialize_ado(ado: AdoStructure) -> bytes:
    p = ado.params
    a_size = len(ado.a_ids)
    parts = [
        _HEADER.pack(MAGIC, ado.n, a_size, p.alpha, p.c_n, p.c_b, p.seed, *ado.declared_stretch),
        ado.a_ids.astype(_U32).tobytes(),
    ]
    pivot = ado.pivots.pivot
    parts.append(np.where(pivot >= 0, pivot, NONE).astype(_U32).tobytes())
    dist = ado.a_distances
    parts.append(np.where(np.isfinite(dist), dist, NONE).astype(_U32).tobytes())
    for table in ado.near_table:
        flat = np.empty(2 * len(table) + 1, dtype=_U32)
        flat[0] = len(table)
        keys = sorted(table)
        flat[1::2] = keys
        flat[2::2] = [table[k] for k in keys]
        parts.append(flat.tobytes())
    return b"".join(parts)


class _Reader:
    def __init__(self, data: bytes):
        self.data = memoryview(data)
        self.pos = 0

    def take(self, count: int) -> np.ndarray:
        end = self.pos + 4 * count
        if end > len(self.data):
            raise GraphFormatError(f"oracle stream truncated at byte {self.pos}")
        out = np.frombuffer(self.data[self.pos:end], dtype=_U32)
        self.pos = end
        return out


def deserialize_ado(data: bytes) -> AdoStructure:
    if len(data) < _HEADER.size:
        raise GraphFormatError("oracle stream shorter than its header")
    magic, n, a_size, alpha, c_n, c_b, seed, mult, add = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise GraphFormatError(f"bad magic {magic!r}; expected {MAGIC!r}")
    r = _Reader(data)
    r.pos = _HEADER.size
    a_ids = r.take(a_size).astype(np.int64)
    pivot = r.take(n).astype(np.int64)
    raw = r.take(n * a_size).reshape(n, a_size)
    a_distances = np.where(raw == NONE, np.inf, raw.astype(np.float64))
    col_of = {int(a): i for i, a in enumerate(a_ids)}
    try:
        pivot_col = np.array([-1 if p == NONE else col_of[int(p)] for p in pivot], dtype=np.int64)
    except KeyError as exc:
        raise GraphFormatError(f"pivot {exc} is not a centre") from None
    near_table = []
    for _ in range(n):
        count = int(r.take(1)[0])
        flat = r.take(2 * count)
        near_table.append(dict(zip(flat[0::2].tolist(), flat[1::2].tolist())))
    if r.pos != len(data):
        raise GraphFormatError(f"{len(data) - r.pos} trailing bytes after oracle")
    try:
        params = AdoParams(alpha=alpha, c_n=c_n, c_b=c_b, seed=seed)
    except ValueError as exc:
        raise GraphFormatError(f"stored parameters invalid: {exc}") from None
    return AdoStructure(
        params=params,
        n=n,
        a_ids=a_ids,
        pivot_col=pivot_col,
        a_distances=a_distances,
        near_table=near_table,
        declared_stretch=(mult, add),
    )


def save_ado(ado: AdoStructure, path: str | Path) -> None:
    Path(path).write_bytes(serialize_ado(ado))


def load_ado(path: str | Path) -> AdoStructure:
    return deserialize_ado(Path(path).read_bytes())
