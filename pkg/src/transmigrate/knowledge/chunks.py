"""Repository ingestion and text chunking.

Text is split into chunks of at most 1,000 characters with a 100-character
overlap between consecutive chunks. Chunk ids are ``<source_uri>#<ordinal>``
and therefore stable across runs, which makes ingestion idempotent and
retrieval tie-breaks deterministic.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

from transmigrate.sourcemodel import lexer
from transmigrate.sourcemodel.grammar import profile_for_extension

logger = logging.getLogger(__name__)

CHUNK_SIZE = 1000
CHUNK_OVERLAP = 100

KINDS = ("readme", "api_doc", "code_comment", "pull_request", "issue", "web_page")

_DOC_SUFFIXES = {".md", ".rst", ".txt", ".adoc", ".html", ".htm"}
_SOURCE_SUFFIXES = {".java", ".swift"}


@dataclass
class DocumentChunk:
    source_uri: str
    kind: str
    text: str
    metadata: dict[str, str] = field(default_factory=dict)
    ordinal: int = 0

    @property
    def chunk_id(self) -> str:
        return f"{self.source_uri}#{self.ordinal}"


def chunk_text(
    source_uri: str,
    kind: str,
    text: str,
    metadata: dict[str, str] | None = None,
    size: int = CHUNK_SIZE,
    overlap: int = CHUNK_OVERLAP,
) -> list[DocumentChunk]:
    """Split normalized text into overlapping chunks; empty text yields none."""
    normalized = text.strip()
    if not normalized:
        return []
    meta = dict(metadata or {})
    if len(normalized) <= size:
        return [DocumentChunk(source_uri, kind, normalized, meta, 0)]
    stride = size - overlap
    chunks = []
    ordinal = 0
    pos = 0
    while pos < len(normalized) - overlap:
        piece = normalized[pos : pos + size]
        chunks.append(DocumentChunk(source_uri, kind, piece, dict(meta), ordinal))
        ordinal += 1
        pos += stride
    return chunks


def infer_kind(rel_path: str) -> str | None:
    """Document kind from path conventions; None means "not ingestible"."""
    p = Path(rel_path)
    name = p.name.lower()
    parts = {part.lower() for part in p.parts[:-1]}
    if name.startswith("readme"):
        return "readme"
    if p.suffix.lower() in _SOURCE_SUFFIXES:
        return "code_comment"
    if parts & {"pulls", "pull_requests", "prs"} or "pull_request" in name:
        return "pull_request"
    if parts & {"issues"} or name.startswith("issue"):
        return "issue"
    if p.suffix.lower() in _DOC_SUFFIXES:
        return "api_doc"
    return None


def ingest_repository(root: str | Path) -> list[DocumentChunk]:
    """Walk ``root`` and chunk every ingestible text file, in sorted path
    order. Binary files are skipped with a logged notice, never an error.
    Source files contribute their comments (kind ``code_comment``)."""
    root = Path(root)
    chunks: list[DocumentChunk] = []
    for path in sorted(p for p in root.rglob("*") if p.is_file()):
        rel = path.relative_to(root).as_posix()
        kind = infer_kind(rel)
        if kind is None:
            continue
        try:
            raw = path.read_bytes()
        except OSError as exc:
            logger.warning("skipping unreadable file %s: %s", rel, exc)
            continue
        if b"\0" in raw[:8192]:
            logger.info("skipping binary file %s", rel)
            continue
        text = raw.decode("utf-8", errors="replace")
        if kind == "code_comment":
            for i, comment in enumerate(_extract_comments(rel, text)):
                chunks.extend(
                    chunk_text(f"{rel}:comment{i}", "code_comment", comment, {"path": rel})
                )
        else:
            chunks.extend(chunk_text(rel, kind, text, {"path": rel}))
    return chunks


def _extract_comments(rel_path: str, text: str) -> list[str]:
    """Comment blocks of a source file; line comments on consecutive lines
    merge into one block."""
    profile = profile_for_extension(rel_path)
    if profile is None:
        return []
    data = text.encode("utf-8")
    line_marker = profile.line_comment
    blocks: list[str] = []
    run: list[str] = []
    prev_line: int | None = None

    def flush_run() -> None:
        if run:
            blocks.append("\n".join(run))
            run.clear()

    for tok in lexer.tokenize(data, profile):
        if tok.kind != lexer.COMMENT:
            continue
        stripped = _strip_comment_markers(tok.text, profile)
        if line_marker is not None and tok.text.startswith(line_marker):
            line = lexer.line_and_column(data, tok.start)[0]
            if not (run and prev_line is not None and line == prev_line + 1):
                flush_run()
            run.append(stripped)
            prev_line = line
        else:
            flush_run()
            prev_line = None
            blocks.append(stripped)
    flush_run()
    return [b.strip() for b in blocks if b.strip()]


def _strip_comment_markers(text: str, profile) -> str:
    out = text
    if profile.block_comment:
        opener, closer = profile.block_comment
        if out.startswith(opener):
            out = out[len(opener):]
            if out.endswith(closer):
                out = out[: -len(closer)]
            lines = [ln.strip().lstrip("*").strip() for ln in out.splitlines()]
            return "\n".join(ln for ln in lines if ln)
    if profile.line_comment and out.startswith(profile.line_comment):
        out = out[len(profile.line_comment):]
    return out.strip()
