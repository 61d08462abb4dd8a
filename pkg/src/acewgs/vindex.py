"""Exact cosine top-k vector index with binary persistence.

The corpus is small (tens of articles, low thousands of chunks), so the
index is an exact full scan: every search is identical to brute-force
cosine ranking, which keeps the contract oracle-testable. Vectors are
held as float32 — the same representation the on-disk format uses — so a
save/load round trip is bit-exact and ranking-preserving.

On-disk layout (little-endian throughout):
    magic "AWVX" | u32 version=1 | u32 dimension | u64 count
    per entry: f32*dim vector | u32 len + utf-8 ref_id | u32 seq
               | u64 char_start | u64 char_end | u32 len + utf-8 text
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from acewgs.corpus import Chunk
from acewgs.errors import (
    DimensionMismatch,
    EmptyIndex,
    FormatError,
    TruncatedFile,
    ZeroVector,
)

MAGIC = b"AWVX"
VERSION = 1


@dataclass(frozen=True)
class SearchHit:
    chunk: Chunk
    similarity: float


class VectorIndex:
    """Single-writer / multi-reader exact cosine index."""

    def __init__(self):
        self.dimension: int | None = None
        self._vectors: list[np.ndarray] = []      # float32, one per entry
        self._norms: list[float] = []             # float64 L2 norms
        self._chunks: list[Chunk] = []
        self._by_ref: dict[str, list[int]] = {}

    def __len__(self) -> int:
        return len(self._chunks)

    def count_for_ref(self, ref_id: str) -> int:
        return len(self._by_ref.get(ref_id, []))

    def add(self, chunk: Chunk, vector) -> None:
        """Add one chunk; the first add fixes the index dimension."""
        vec = np.asarray(vector, dtype=np.float32).ravel()
        if self.dimension is None:
            if vec.size == 0:
                raise ZeroVector("cannot index an empty vector")
            self.dimension = int(vec.size)
        elif vec.size != self.dimension:
            raise DimensionMismatch(
                f"vector has length {vec.size}, index dimension is {self.dimension}")
        norm = float(np.linalg.norm(vec.astype(np.float64)))
        if norm == 0.0:
            raise ZeroVector("zero-norm vectors cannot be ranked by cosine")
        idx = len(self._chunks)
        self._vectors.append(vec)
        self._norms.append(norm)
        self._chunks.append(chunk)
        self._by_ref.setdefault(chunk.ref_id, []).append(idx)

    def replace_ref(self, ref_id: str, entries: list[tuple[Chunk, np.ndarray]]) -> None:
        """Atomically swap all entries of one article (used by re-indexing)."""
        keep = [i for i in range(len(self._chunks))
                if self._chunks[i].ref_id != ref_id]
        vectors = [self._vectors[i] for i in keep]
        norms = [self._norms[i] for i in keep]
        chunks = [self._chunks[i] for i in keep]
        self._vectors, self._norms, self._chunks = vectors, norms, chunks
        self._by_ref = {}
        for i, c in enumerate(self._chunks):
            self._by_ref.setdefault(c.ref_id, []).append(i)
        for chunk, vec in entries:
            self.add(chunk, vec)

    def search(self, query, k: int, ref_filter: str | None = None) -> list[SearchHit]:
        """Exact cosine top-k over the (optionally ref-filtered) entries.

        Ties broken by (ref_id, seq) ascending, matching the brute-force
        oracle ordering.
        """
        if k < 1:
            raise ValueError("k must be >= 1")
        q = np.asarray(query, dtype=np.float64).ravel()
        if self.dimension is not None and q.size != self.dimension:
            raise DimensionMismatch(
                f"query has length {q.size}, index dimension is {self.dimension}")
        qnorm = float(np.linalg.norm(q))
        if qnorm == 0.0:
            raise ZeroVector("zero-norm query")
        if ref_filter is None:
            candidates = range(len(self._chunks))
        else:
            candidates = self._by_ref.get(ref_filter, [])
        candidates = list(candidates)
        if not candidates:
            raise EmptyIndex(
                "no entries" + (f" for ref_id {ref_filter!r}" if ref_filter else ""))
        matrix = np.stack([self._vectors[i] for i in candidates]).astype(np.float64)
        norms = np.array([self._norms[i] for i in candidates])
        sims = (matrix @ q) / (norms * qnorm)
        order = sorted(range(len(candidates)),
                       key=lambda j: (-sims[j],
                                      self._chunks[candidates[j]].ref_id,
                                      self._chunks[candidates[j]].seq))
        hits = []
        for j in order[:k]:
            hits.append(SearchHit(chunk=self._chunks[candidates[j]],
                                  similarity=float(sims[j])))
        return hits

    # --- persistence ---------------------------------------------------------

    def save(self, path: str | Path) -> None:
        path = Path(path)
        dim = self.dimension or 0
        with path.open("wb") as fh:
            fh.write(MAGIC)
            fh.write(struct.pack("<IIQ", VERSION, dim, len(self._chunks)))
            for vec, chunk in zip(self._vectors, self._chunks):
                fh.write(vec.astype("<f4").tobytes())
                ref = chunk.ref_id.encode("utf-8")
                text = chunk.text.encode("utf-8")
                fh.write(struct.pack("<I", len(ref)))
                fh.write(ref)
                fh.write(struct.pack("<IQQ", chunk.seq, chunk.char_start, chunk.char_end))
                fh.write(struct.pack("<I", len(text)))
                fh.write(text)

    @classmethod
    def load(cls, path: str | Path) -> "VectorIndex":
        path = Path(path)
        data = path.read_bytes()
        if data[:4] != MAGIC:
            raise FormatError(f"{path}: bad magic {data[:4]!r}")
        if len(data) < 4 + 16:
            raise TruncatedFile(f"{path}: header incomplete")
        version, dim, count = struct.unpack_from("<IIQ", data, 4)
        if version != VERSION:
            raise FormatError(f"{path}: unsupported version {version}")
        idx = cls()
        if dim:
            idx.dimension = dim
        pos = 20
        reader = _Reader(data, pos, path)
        for _ in range(count):
            vec = np.frombuffer(reader.take(4 * dim), dtype="<f4").copy()
            ref_id = reader.take(reader.u32()).decode("utf-8")
            seq, char_start, char_end = reader.unpack("<IQQ")
            text = reader.take(reader.u32()).decode("utf-8")
            chunk = Chunk(ref_id=ref_id, seq=seq, text=text,
                          char_start=char_start, char_end=char_end)
            idx.add(chunk, vec)
        return idx


class _Reader:
    def __init__(self, data: bytes, pos: int, path):
        self.data = data
        self.pos = pos
        self.path = path

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise TruncatedFile(f"{self.path}: record extends past end of file")
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))
