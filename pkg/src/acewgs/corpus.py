"""Article manifest and full-text corpus access, plus the RAG chunker.

Layout convention: a corpus directory holds ``manifest.csv`` (UTF-8, header
``ref_id,year,title,abstract,journal,authors,doi``, authors ``;``-separated
inside the cell) and one ``corpus/<ref_id>.txt`` plain-text file per
article that has an ingested full text.
"""

from __future__ import annotations

import csv
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path

from acewgs.errors import (
    DuplicateRefId,
    InvalidParams,
    MissingField,
    MissingText,
    ParseError,
)

logger = logging.getLogger(__name__)

MANIFEST_FIELDS = ("ref_id", "year", "title", "abstract", "journal", "authors", "doi")
REF_ID_PATTERN = re.compile(r"^R\d+$")

CHUNK_SIZE = 1000
CHUNK_OVERLAP = 150


@dataclass(frozen=True)
class ArticleMeta:
    """One row of the seven-field article manifest."""

    ref_id: str
    year: int
    title: str
    abstract: str
    journal: str
    authors: tuple[str, ...]
    doi: str

    @property
    def authors_cell(self) -> str:
        """Authors as the single string used for querying and display."""
        return "; ".join(self.authors)


@dataclass(frozen=True)
class Chunk:
    """A character window of one article's full text."""

    ref_id: str
    seq: int
    text: str
    char_start: int
    char_end: int


def load_manifest(path: str | Path) -> list[ArticleMeta]:
    """Load and validate the manifest; order of rows is preserved."""
    path = Path(path)
    rows: list[ArticleMeta] = []
    seen: set[str] = set()
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            return []
        if tuple(h.strip() for h in header) != MANIFEST_FIELDS:
            raise ParseError(1, f"expected header {','.join(MANIFEST_FIELDS)}")
        for lineno, cells in enumerate(reader, start=2):
            if not cells or (len(cells) == 1 and not cells[0].strip()):
                continue
            if len(cells) != len(MANIFEST_FIELDS):
                raise ParseError(lineno, f"expected 7 fields, got {len(cells)}")
            ref_id, year_s, title, abstract, journal, authors_s, doi = cells
            ref_id = ref_id.strip()
            if not ref_id or not year_s.strip() or not title.strip():
                raise MissingField(f"line {lineno}: ref_id, year and title are required")
            if not REF_ID_PATTERN.match(ref_id):
                raise ParseError(lineno, f"ref_id {ref_id!r} does not match R<number>")
            try:
                year = int(year_s)
            except ValueError:
                raise ParseError(lineno, f"year {year_s!r} is not an integer") from None
            if not 1900 <= year <= 2100:
                raise ParseError(lineno, f"year {year} outside [1900, 2100]")
            if ref_id in seen:
                raise DuplicateRefId(f"line {lineno}: duplicate ref_id {ref_id}")
            seen.add(ref_id)
            authors = tuple(a.strip() for a in authors_s.split(";") if a.strip())
            rows.append(ArticleMeta(ref_id=ref_id, year=year, title=title.strip(),
                                    abstract=abstract.strip(), journal=journal.strip(),
                                    authors=authors, doi=doi.strip()))
    return rows


def chunk_document(text: str, ref_id: str = "", size: int = CHUNK_SIZE,
                   overlap: int = CHUNK_OVERLAP) -> list[Chunk]:
    """Split text into fixed character windows with the given overlap.

    Windows start at multiples of (size - overlap); the final window may
    be shorter. Dropping each chunk's first ``overlap`` characters (except
    the first chunk's) and concatenating reconstructs the input exactly.
    """
    if size <= 0 or overlap < 0 or overlap >= size:
        raise InvalidParams(f"need 0 <= overlap < size, got size={size} overlap={overlap}")
    if not text:
        return []
    step = size - overlap
    chunks = []
    start = 0
    seq = 0
    while True:
        end = min(start + size, len(text))
        chunks.append(Chunk(ref_id=ref_id, seq=seq, text=text[start:end],
                            char_start=start, char_end=end))
        if end >= len(text):
            break
        start += step
        seq += 1
    return chunks


def expected_chunk_count(length: int, size: int = CHUNK_SIZE,
                         overlap: int = CHUNK_OVERLAP) -> int:
    """max(1, ceil((len - overlap) / (size - overlap))) for len > 0."""
    if length <= 0:
        return 0
    step = size - overlap
    return max(1, -((length - overlap) // -step))


@dataclass
class CorpusStore:
    """Immutable-after-load view of a corpus directory."""

    root: Path
    articles: list[ArticleMeta] = field(default_factory=list)

    @classmethod
    def open(cls, root: str | Path) -> "CorpusStore":
        root = Path(root)
        articles = load_manifest(root / "manifest.csv")
        return cls(root=root, articles=articles)

    @property
    def ref_ids(self) -> set[str]:
        return {a.ref_id for a in self.articles}

    def get(self, ref_id: str) -> ArticleMeta | None:
        for a in self.articles:
            if a.ref_id == ref_id:
                return a
        return None

    def text_path(self, ref_id: str) -> Path:
        return self.root / "corpus" / f"{ref_id}.txt"

    def has_text(self, ref_id: str) -> bool:
        return self.text_path(ref_id).is_file()

    def load_text(self, ref_id: str) -> str:
        path = self.text_path(ref_id)
        if not path.is_file():
            raise MissingText(f"no full text at {path}")
        return path.read_text(encoding="utf-8")

    def validate_layout(self) -> list[str]:
        """Ingest check: returns human-readable warnings (missing texts)."""
        warnings = []
        for a in self.articles:
            if not self.has_text(a.ref_id):
                warnings.append(f"{a.ref_id}: no full text (comprehension unavailable)")
        return warnings
