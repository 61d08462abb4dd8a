"""Per-article comprehension: retrieve the most relevant chunks, then ask.

Answers are generated from a prompt holding only the selected article's
excerpts, so cross-article leakage is structurally impossible; the prompt
template instructs the model to refuse when the excerpts don't contain
the answer.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from acewgs.corpus import CorpusStore, chunk_document
from acewgs.errors import ArticleNotIndexed, EmptyRetrieval
from acewgs.extract import load_prompt
from acewgs.llm import LlmClient
from acewgs.vindex import VectorIndex

logger = logging.getLogger(__name__)

DEFAULT_K = 4


@dataclass(frozen=True)
class ComprehensionAnswer:
    text: str
    sources: tuple[tuple[int, int, int], ...]   # (seq, char_start, char_end)
    model_name: str


class ComprehensionPipeline:
    """Feature 3 over one corpus + index + model backend."""

    def __init__(self, corpus: CorpusStore, index: VectorIndex, client: LlmClient,
                 k: int = DEFAULT_K, chunk_size: int = 1000, overlap: int = 150):
        self.corpus = corpus
        self.index = index
        self.client = client
        self.k = k
        self.chunk_size = chunk_size
        self.overlap = overlap
        self._template = load_prompt("comprehend")
        self._indexed: set[str] = set()

    def index_article(self, ref_id: str) -> int:
        """Chunk, embed, and (re)index one article; returns the chunk count."""
        text = self.corpus.load_text(ref_id)
        chunks = chunk_document(text, ref_id=ref_id, size=self.chunk_size,
                                overlap=self.overlap)
        entries = [(c, self.client.embed(c.text).values) for c in chunks]
        self.index.replace_ref(ref_id, entries)
        self._indexed.add(ref_id)
        if not chunks:
            logger.warning("article %s has an empty text; nothing indexed", ref_id)
        return len(chunks)

    def is_indexed(self, ref_id: str) -> bool:
        return ref_id in self._indexed or self.index.count_for_ref(ref_id) > 0

    def answer(self, ref_id: str, question: str, k: int | None = None) -> ComprehensionAnswer:
        """Embed the question, retrieve k chunks of this article, generate."""
        if not question.strip():
            raise ValueError("question must be non-empty")
        if not self.is_indexed(ref_id):
            raise ArticleNotIndexed(f"article {ref_id} has not been indexed")
        if self.index.count_for_ref(ref_id) == 0:
            raise EmptyRetrieval(f"article {ref_id} holds zero chunks")
        query = self.client.embed(question).values
        hits = self.index.search(query, k=k or self.k, ref_filter=ref_id)
        excerpts = "\n".join(
            f"[{i + 1}] {h.chunk.text}" for i, h in enumerate(hits))
        prompt = self._template.format(excerpts=excerpts, question=question)
        result = self.client.generate(prompt)
        sources = tuple((h.chunk.seq, h.chunk.char_start, h.chunk.char_end)
                        for h in hits)
        return ComprehensionAnswer(text=result.text, sources=sources,
                                   model_name=result.model_name)
