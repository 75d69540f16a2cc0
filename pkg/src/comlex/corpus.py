"""Plain-text corpus ingestion and keyword-in-context concordance.

Tokens are maximal runs of letters plus internal hyphens/apostrophes;
matching is case-insensitive on lowercase forms.  KWIC windows are
character-based, trimmed to whitespace boundaries where possible, and a
line's ``span`` always reconstructs ``left + match + right`` verbatim
from the source document.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from pathlib import Path

from .entries import Entry
from .morphology import inflections

_TOKEN_RE = re.compile(r"[^\W\d_]+(?:['-][^\W\d_]+)*", re.UNICODE)

_CACHE_MAGIC = "comlex-corpus-index 1"


class EmptyCorpusError(ValueError):
    pass


@dataclass(frozen=True)
class KwicLine:
    doc_id: int
    source: str
    left: str
    match: str
    right: str
    span: tuple[int, int]  # char span of left+match+right in the document


class CorpusIndex:
    """Immutable after construction; concurrently queryable."""

    def __init__(self, documents, postings, spans):
        self.documents: list[tuple[int, str, str]] = documents
        self.postings: dict[str, list[tuple[int, int]]] = postings
        self.spans: list[list[tuple[int, int]]] = spans

    @property
    def total_tokens(self) -> int:
        return sum(len(s) for s in self.spans)

    def document_text(self, doc_id: int) -> str:
        return self.documents[doc_id][2]


def ingest(documents) -> CorpusIndex:
    """Index ``(source-name, text)`` pairs in the order given."""
    documents = list(documents)
    if not documents:
        raise EmptyCorpusError("no documents to index")
    docs: list[tuple[int, str, str]] = []
    postings: dict[str, list[tuple[int, int]]] = {}
    spans: list[list[tuple[int, int]]] = []
    for doc_id, (source, text) in enumerate(documents):
        docs.append((doc_id, source, text))
        doc_spans: list[tuple[int, int]] = []
        for offset, match in enumerate(_TOKEN_RE.finditer(text)):
            doc_spans.append(match.span())
            postings.setdefault(match.group().lower(), []).append((doc_id, offset))
        spans.append(doc_spans)
    return CorpusIndex(docs, postings, spans)


def _trim_left(text: str, start: int, window: int) -> int:
    lo = start - window
    if lo <= 0:
        return 0
    # If the cut lands inside a word, drop the partial word when a
    # whitespace boundary exists within the window.
    if not text[lo - 1].isspace() and not text[lo].isspace():
        for i in range(lo, start):
            if text[i].isspace():
                return i + 1
    return lo


def _trim_right(text: str, end: int, window: int) -> int:
    hi = end + window
    if hi >= len(text):
        return len(text)
    if not text[hi - 1].isspace() and not text[hi].isspace():
        for i in range(hi - 1, end - 1, -1):
            if text[i].isspace():
                return i
    return hi


def kwic(index: CorpusIndex, forms, window: int = 40, limit: int = 25) -> list[KwicLine]:
    """Concordance lines for any of ``forms``, ordered by (doc, offset)."""
    if window < 0:
        raise ValueError("window must be >= 0")
    if limit < 1:
        raise ValueError("limit must be >= 1")
    wanted = {f.lower() for f in forms}
    hits: list[tuple[int, int]] = []
    for form in wanted:
        hits.extend(index.postings.get(form, ()))
    hits.sort()
    lines: list[KwicLine] = []
    for doc_id, offset in hits[:limit]:
        _, source, text = index.documents[doc_id]
        start, end = index.spans[doc_id][offset]
        lo = _trim_left(text, start, window)
        hi = _trim_right(text, end, window)
        lines.append(
            KwicLine(doc_id, source, text[lo:start], text[start:end], text[end:hi], (lo, hi))
        )
    return lines


def concordance_for_entry(
    index: CorpusIndex, entry: Entry, window: int = 40, limit: int = 25
) -> list[KwicLine]:
    """KWIC over the entry's base form and generated inflections."""
    return kwic(index, inflections(entry), window, limit)


# -- corpus loading and cache -------------------------------------------------


def load_corpus_dir(corpus_dir: str | Path) -> list[tuple[str, str]]:
    """All ``.txt`` files under ``corpus_dir``, sorted by name."""
    root = Path(corpus_dir)
    out = []
    for path in sorted(root.glob("*.txt")):
        out.append((path.name, path.read_text("utf-8")))
    return out


def corpus_hash(documents) -> str:
    digest = hashlib.sha256()
    for source, text in documents:
        digest.update(source.encode("utf-8"))
        digest.update(b"\x00")
        digest.update(text.encode("utf-8"))
        digest.update(b"\x00")
    return digest.hexdigest()


def save_index_cache(index: CorpusIndex, digest: str, path: str | Path) -> None:
    payload = {
        "magic": _CACHE_MAGIC,
        "hash": digest,
        "documents": [[d, s, t] for d, s, t in index.documents],
        "postings": {tok: [[d, o] for d, o in post] for tok, post in index.postings.items()},
        "spans": [[[a, b] for a, b in doc] for doc in index.spans],
    }
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload), "utf-8")


def load_index_cache(path: str | Path, digest: str) -> CorpusIndex | None:
    """Return the cached index, or None when absent, stale, or unreadable."""
    path = Path(path)
    if not path.exists():
        return None
    try:
        payload = json.loads(path.read_text("utf-8"))
        if payload.get("magic") != _CACHE_MAGIC or payload.get("hash") != digest:
            return None
        documents = [(d, s, t) for d, s, t in payload["documents"]]
        postings = {
            tok: [(d, o) for d, o in post] for tok, post in payload["postings"].items()
        }
        spans = [[(a, b) for a, b in doc] for doc in payload["spans"]]
        return CorpusIndex(documents, postings, spans)
    except (ValueError, KeyError, TypeError):
        return None


def load_or_build_index(corpus_dir: str | Path, cache_path: str | Path | None = None) -> CorpusIndex:
    """Ingest a corpus directory, consulting the content-hash cache."""
    documents = load_corpus_dir(corpus_dir)
    digest = corpus_hash(documents)
    if cache_path is not None:
        cached = load_index_cache(cache_path, digest)
        if cached is not None:
            return cached
    index = ingest(documents)
    if cache_path is not None:
        save_index_cache(index, digest, cache_path)
    return index
