"""Comprehension pipeline: indexing, retrieval isolation, prompt content."""

import pytest

from acewgs.comprehend import ComprehensionPipeline
from acewgs.corpus import CorpusStore
from acewgs.errors import ArticleNotIndexed, EmptyRetrieval, MissingText
from acewgs.llm import LlmClient, LlmConfig
from acewgs.mockllm import MockLlmServer, MockScript
from acewgs.vindex import VectorIndex

HEADER = "ref_id,year,title,abstract,journal,authors,doi\n"


@pytest.fixture()
def corpus(tmp_path):
    (tmp_path / "manifest.csv").write_text(
        HEADER
        + "R1,2020,Alpha study,a1,J,A,10.1/1\n"
        + "R2,2021,Beta study,a2,J,B,10.1/2\n"
        + "R3,2021,Empty study,a3,J,C,10.1/3\n",
        encoding="utf-8")
    cdir = tmp_path / "corpus"
    cdir.mkdir()
    (cdir / "R1.txt").write_text(
        "ZEBRA-SENTINEL the first article discusses platinum catalysts. " * 30,
        encoding="utf-8")
    (cdir / "R2.txt").write_text(
        "OCELOT-SENTINEL the second article discusses gold catalysts. " * 30,
        encoding="utf-8")
    (cdir / "R3.txt").write_text("", encoding="utf-8")
    return CorpusStore.open(tmp_path)


@pytest.fixture()
def server():
    with MockLlmServer(MockScript.echo(embed_dim=64)) as srv:
        yield srv


@pytest.fixture()
def pipeline(corpus, server):
    client = LlmClient(LlmConfig(base_url=server.base_url, timeout=10))
    return ComprehensionPipeline(corpus, VectorIndex(), client, k=3)


class TestIndexing:
    def test_chunk_count_forced_by_length(self, corpus, server):
        client = LlmClient(LlmConfig(base_url=server.base_url, timeout=10))
        pipeline = ComprehensionPipeline(corpus, VectorIndex(), client)
        text = corpus.load_text("R1")
        expected = 2 if 1000 < len(text) <= 1850 else None
        count = pipeline.index_article("R1")
        assert count == pipeline.index.count_for_ref("R1")
        if expected:
            assert count == expected

    def test_empty_text_indexes_zero(self, pipeline):
        assert pipeline.index_article("R3") == 0
        assert pipeline.is_indexed("R3")

    def test_missing_text(self, pipeline):
        with pytest.raises(MissingText):
            pipeline.index_article("R99")

    def test_reindex_replaces(self, pipeline):
        first = pipeline.index_article("R1")
        again = pipeline.index_article("R1")
        assert first == again == pipeline.index.count_for_ref("R1")


class TestAnswer:
    def test_unindexed_raises(self, pipeline):
        with pytest.raises(ArticleNotIndexed):
            pipeline.answer("R1", "what is discussed?")

    def test_empty_article_raises(self, pipeline):
        pipeline.index_article("R3")
        with pytest.raises(EmptyRetrieval):
            pipeline.answer("R3", "anything?")

    def test_echo_proves_context_injection(self, pipeline):
        pipeline.index_article("R1")
        answer = pipeline.answer("R1", "what is this about?")
        assert "ZEBRA-SENTINEL" in answer.text
        assert "what is this about?" in answer.text

    def test_isolation_between_articles(self, pipeline, server):
        pipeline.index_article("R1")
        pipeline.index_article("R2")
        pipeline.answer("R2", "what metal?")
        prompt = server.prompts()[-1]
        assert "OCELOT-SENTINEL" in prompt
        assert "ZEBRA-SENTINEL" not in prompt

    def test_sources_are_chunk_spans(self, pipeline):
        pipeline.index_article("R1")
        answer = pipeline.answer("R1", "what is this about?")
        assert 0 < len(answer.sources) <= 3
        total = pipeline.index.count_for_ref("R1")
        for seq, start, end in answer.sources:
            assert 0 <= seq < total
            assert end - start <= 1000

    def test_deterministic_sources(self, pipeline):
        pipeline.index_article("R1")
        a = pipeline.answer("R1", "same question")
        b = pipeline.answer("R1", "same question")
        assert a.sources == b.sources

    def test_context_bounded_by_k(self, pipeline, server):
        pipeline.index_article("R1")
        pipeline.answer("R1", "bound check", k=2)
        prompt = server.prompts()[-1]
        assert prompt.count("SENTINEL") <= 2 * (1000 // len("ZEBRA-SENTINEL") + 1)
        answer = pipeline.answer("R1", "bound check", k=2)
        assert len(answer.sources) <= 2
