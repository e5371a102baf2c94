"""Exact (flat) cosine-similarity index.

Entries are written then frozen; queries are only valid on a frozen index.
Query results are the exact top-k by cosine score with ties broken by
chunk id ascending, so retrieval is reproducible and, for any k1 < k2,
query(k1) is a prefix of query(k2). For tie-breaking, scores compare at
1e-12 granularity: mathematically equal cosines can differ in the last
float ulp depending on summation order, and quantizing the comparison
keeps the id tie-break authoritative regardless of the evaluation path.

Persistence is line-delimited JSON: a header line with the dimension and
entry count, then one ``{"id": ..., "v": [...]}`` line per entry. Chunks
are stored beside the index in line-delimited JSON.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from transmigrate.errors import ArgumentError, IntegrityError
from transmigrate.knowledge.chunks import DocumentChunk
from transmigrate.knowledge.embed import EmbeddingVector


@dataclass
class RetrievalResult:
    chunk: DocumentChunk
    score: float


class VectorIndex:
    def __init__(self, dimension: int) -> None:
        self.dimension = dimension
        self._ids: list[str] = []
        self._vectors: list[np.ndarray] = []
        self._chunks: dict[str, DocumentChunk] = {}
        self._matrix: np.ndarray | None = None
        self.frozen = False

    def __len__(self) -> int:
        return len(self._ids)

    def add(self, chunk: DocumentChunk, vector: EmbeddingVector) -> None:
        if self.frozen:
            raise IntegrityError("index is frozen; entries are immutable")
        if vector.dimension != self.dimension:
            raise IntegrityError(
                f"vector dimension {vector.dimension} does not match index dimension {self.dimension}"
            )
        self._ids.append(chunk.chunk_id)
        self._vectors.append(vector.values)
        self._chunks[chunk.chunk_id] = chunk

    def freeze(self) -> "VectorIndex":
        if not self.frozen:
            self._matrix = (
                np.vstack(self._vectors) if self._vectors else np.zeros((0, self.dimension))
            )
            self.frozen = True
        return self

    def scores(self, vector: EmbeddingVector) -> np.ndarray:
        assert self._matrix is not None
        return self._matrix @ vector.values

    def chunk(self, chunk_id: str) -> DocumentChunk:
        return self._chunks[chunk_id]

    @property
    def ids(self) -> list[str]:
        return list(self._ids)

    # ---- persistence ----

    def save(self, index_path: str | Path, chunks_path: str | Path) -> None:
        index_path = Path(index_path)
        chunks_path = Path(chunks_path)
        index_path.parent.mkdir(parents=True, exist_ok=True)
        chunks_path.parent.mkdir(parents=True, exist_ok=True)
        with index_path.open("w", encoding="utf-8") as fh:
            fh.write(json.dumps({"dimension": self.dimension, "entries": len(self._ids)}) + "\n")
            for cid, vec in zip(self._ids, self._vectors):
                fh.write(json.dumps({"id": cid, "v": [float(x) for x in vec]}) + "\n")
        with chunks_path.open("w", encoding="utf-8") as fh:
            for cid in self._ids:
                c = self._chunks[cid]
                fh.write(
                    json.dumps(
                        {
                            "source_uri": c.source_uri,
                            "kind": c.kind,
                            "text": c.text,
                            "metadata": c.metadata,
                            "ordinal": c.ordinal,
                        },
                        sort_keys=True,
                    )
                    + "\n"
                )

    @classmethod
    def load(cls, index_path: str | Path, chunks_path: str | Path) -> "VectorIndex":
        index_path = Path(index_path)
        chunks_path = Path(chunks_path)
        chunks: list[DocumentChunk] = []
        with chunks_path.open(encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    rec = json.loads(line)
                    chunks.append(DocumentChunk(**rec))
        by_id = {c.chunk_id: c for c in chunks}
        with index_path.open(encoding="utf-8") as fh:
            header = json.loads(fh.readline())
            index = cls(dimension=int(header["dimension"]))
            for line in fh:
                if not line.strip():
                    continue
                rec = json.loads(line)
                vec = EmbeddingVector(np.asarray(rec["v"], dtype=np.float64))
                index.add(by_id[rec["id"]], vec)
        if len(index) != int(header["entries"]):
            raise IntegrityError(
                f"index file corrupt: header says {header['entries']} entries, found {len(index)}"
            )
        return index.freeze()


def build_index(chunks: list[DocumentChunk], embedder) -> VectorIndex:
    """Embed every chunk and return a frozen index."""
    index = VectorIndex(dimension=embedder.dimension)
    for chunk in chunks:
        index.add(chunk, embedder.embed(chunk.text))
    return index.freeze()


def query(index: VectorIndex, text: str, k: int, embedder) -> list[RetrievalResult]:
    """Exact top-k by cosine similarity; ties broken by chunk id ascending."""
    if k <= 0:
        raise ArgumentError(f"k must be positive, got {k}")
    if not index.frozen:
        raise IntegrityError("query requires a frozen index")
    if len(index) == 0:
        return []
    vector = embedder.embed(text)
    if vector.dimension != index.dimension:
        raise IntegrityError(
            f"query dimension {vector.dimension} does not match index dimension {index.dimension}"
        )
    scores = index.scores(vector)
    ranked = sorted(
        zip(index.ids, scores), key=lambda pair: (-round(float(pair[1]), 12), pair[0])
    )
    return [RetrievalResult(chunk=index.chunk(cid), score=float(s)) for cid, s in ranked[:k]]
