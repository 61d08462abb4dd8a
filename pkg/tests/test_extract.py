"""Extraction feature: translation loop, sandboxed execution."""

import pytest

from acewgs.corpus import load_manifest
from acewgs.errors import TranslationExhausted
from acewgs.extract import ExtractFeature, strip_llm_wrapping
from acewgs.llm import LlmClient, LlmConfig
from acewgs.mockllm import MockLlmServer, MockScript

from conftest import FIXTURES


@pytest.fixture(scope="module")
def manifest():
    return load_manifest(FIXTURES / "corpus_demo" / "manifest.csv")


class StubClient:
    """Duck-typed gateway returning scripted texts per call."""

    def __init__(self, replies):
        self.replies = list(replies)
        self.prompts = []

    def generate(self, prompt, model_name=None):
        self.prompts.append(prompt)
        from acewgs.llm import GenerationResult
        return GenerationResult(text=self.replies.pop(0), model_name="stub",
                                latency_ms=0.0)


class TestStripWrapping:
    def test_code_fences(self):
        assert strip_llm_wrapping("```sql\nCOUNT\n```") == "COUNT"

    def test_query_tag_and_quotes(self):
        assert strip_llm_wrapping("Query: `SELECT title`") == "SELECT title"

    def test_plain_passthrough(self):
        assert strip_llm_wrapping(" COUNT ") == "COUNT"


class TestScriptedDsl:
    def test_case_study_queries(self, manifest):
        script = MockScript.from_dsl_fixture(FIXTURES / "dsl_mock_script.json")
        with MockLlmServer(script) as server:
            client = LlmClient(LlmConfig(base_url=server.base_url, timeout=10))
            feature = ExtractFeature(client, manifest)

            a = feature.ask("Extract the journal names for all papers that "
                            "were published in the year 2021.")
            assert a.dsl == "SELECT journal WHERE year EQ 2021"
            assert a.table.single_column() == [
                "Nature", "Energy & Fuels", "Nanomaterials", "Catalysis Today",
                "Journal of Catalysis", "Journal of Catalysis", "Catalysts",
                "Heliyon", "International Journal of Energy Research", "Catalysts"]

            b = feature.ask("Retrieve papers where the string 'MoC' is "
                            "mentioned in the abstract in the exact same form.")
            assert [row[0] for row in b.table.rows] == ["R51", "R71"]

    def test_prompt_lists_fields_and_question(self, manifest):
        script = MockScript.canned_replies({"*": "COUNT"})
        with MockLlmServer(script) as server:
            client = LlmClient(LlmConfig(base_url=server.base_url, timeout=10))
            feature = ExtractFeature(client, manifest)
            feature.ask("How many articles are there?")
            prompt = server.prompts()[-1]
            for field in ("ref_id", "year", "title", "abstract", "journal",
                          "authors", "doi"):
                assert field in prompt
            assert "How many articles are there?" in prompt


class TestRetryLoop:
    def test_recovers_with_error_feedback(self, manifest):
        stub = StubClient(["SELECT bogus_field", "COUNT"])
        feature = ExtractFeature(stub, manifest)
        answer = feature.ask("how many?")
        assert answer.attempts == 2
        assert answer.table.rows == [[82]]
        # second prompt carries the parser's complaint
        assert "bogus_field" in stub.prompts[1]
        assert "rejected" in stub.prompts[1]

    def test_exhaustion_after_three_failures(self, manifest):
        stub = StubClient(["nope", "still nope", "SELECT nothing"])
        feature = ExtractFeature(stub, manifest)
        with pytest.raises(TranslationExhausted):
            feature.ask("how many?")

    def test_fenced_output_tolerated(self, manifest):
        stub = StubClient(["```\nCOUNT WHERE year EQ 2021\n```"])
        feature = ExtractFeature(stub, manifest)
        assert feature.ask("count 2021").table.rows == [[10]]


class TestDirectDsl:
    def test_run_dsl_bypasses_llm(self, manifest):
        feature = ExtractFeature(client=None, manifest=manifest)
        result = feature.run_dsl("SELECT ref_id WHERE abstract CONTAINS 'MoC'")
        assert result.table.single_column() == ["R51", "R71"]
        assert result.attempts == 0

    def test_render_text_single_column(self, manifest):
        feature = ExtractFeature(client=None, manifest=manifest)
        result = feature.run_dsl("SELECT journal WHERE year EQ 2021")
        assert result.render_text().startswith("['Nature', ")
