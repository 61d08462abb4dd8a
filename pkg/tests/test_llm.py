"""LLM gateway wire-protocol, retry, and mock-backend tests."""

import numpy as np
import pytest

from acewgs.errors import (
    ConnectionFailed,
    DimensionMismatch,
    EmptyPrompt,
    MalformedResponse,
    ModelNotFound,
)
from acewgs.llm import LlmClient, LlmConfig
from acewgs.mockllm import MockLlmServer, MockScript, mock_embedding


@pytest.fixture()
def echo_server():
    with MockLlmServer(MockScript.echo()) as server:
        yield server


def client_for(server, **overrides) -> LlmClient:
    cfg = LlmConfig(base_url=server.base_url, timeout=10, **overrides)
    return LlmClient(cfg)


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            LlmConfig(temperature=-1)
        with pytest.raises(ValueError):
            LlmConfig(top_p=0)
        with pytest.raises(ValueError):
            LlmConfig(top_k=0)

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("ACEWGS_LLM_URL", "http://example:9999")
        cfg = LlmConfig(base_url="http://other:1234")
        assert cfg.base_url == "http://example:9999"


class TestGenerate:
    def test_echo_round_trip(self, echo_server):
        result = client_for(echo_server).generate("ping")
        assert "ping" in result.text
        assert result.latency_ms >= 0

    def test_empty_prompt(self, echo_server):
        with pytest.raises(EmptyPrompt):
            client_for(echo_server).generate("")

    def test_request_carries_exactly_three_options(self, echo_server):
        client = client_for(echo_server)
        client.config.temperature = 0.0
        client.config.top_k = 10
        client.config.top_p = 0.5
        client.generate("anything")
        body = echo_server.requests[-1]["body"]
        assert body["options"] == {"temperature": 0.0, "top_k": 10, "top_p": 0.5}
        assert body["stream"] is False
        assert set(body) == {"model", "prompt", "stream", "options"}

    def test_model_not_found(self):
        script = MockScript.echo(known_models={"gemma2"})
        with MockLlmServer(script) as server:
            client = client_for(server)
            with pytest.raises(ModelNotFound):
                client.generate("hi", model_name="made-up")

    def test_canned_catch_all(self):
        with MockLlmServer(MockScript.canned_replies({"*": "OK"})) as server:
            client = client_for(server)
            assert client.generate("one").text == "OK"
            assert client.generate("two").text == "OK"

    def test_canned_pattern_match(self):
        script = MockScript.canned_replies(
            {"journal names": "SELECT journal WHERE year EQ 2021", "*": "COUNT"})
        with MockLlmServer(script) as server:
            client = client_for(server)
            assert "SELECT journal" in client.generate(
                "Extract the journal names for 2021 papers").text
            assert client.generate("anything else").text == "COUNT"


class TestRetries:
    def test_connection_failed_after_exhausting_retries(self):
        cfg = LlmConfig(base_url="http://127.0.0.1:9", timeout=0.2, max_retries=1)
        with pytest.raises(ConnectionFailed):
            LlmClient(cfg).generate("hi")

    def test_retry_recovers_from_dropped_connections(self):
        script = MockScript.echo(drop_connections=2)
        with MockLlmServer(script) as server:
            client = client_for(server, max_retries=2)
            result = client.generate("ping")
            assert "ping" in result.text
            assert server.dropped == 2

    def test_no_retry_when_drops_exceed_budget(self):
        script = MockScript.echo(drop_connections=3)
        with MockLlmServer(script) as server:
            client = client_for(server, max_retries=1)
            with pytest.raises(ConnectionFailed):
                client.generate("ping")
            # 1 + max_retries attempts, all dropped
            assert server.dropped == 2

    def test_malformed_response_not_retried(self, monkeypatch):
        calls = {"n": 0}

        class FakeResponse:
            status_code = 200
            text = "not json"

            def json(self):
                raise ValueError("nope")

        class FakeSession:
            def post(self, *a, **k):
                calls["n"] += 1
                return FakeResponse()

        client = LlmClient(LlmConfig(base_url="http://x", max_retries=3),
                           _session=FakeSession())
        with pytest.raises(MalformedResponse):
            client.generate("hi")
        assert calls["n"] == 1


class TestEmbeddings:
    def test_deterministic(self, echo_server):
        client = client_for(echo_server)
        a = client.embed("the same text")
        b = client.embed("the same text")
        np.testing.assert_array_equal(a.values, b.values)
        assert a.dimension == 256

    def test_repeatable_across_clients(self, echo_server):
        a = client_for(echo_server).embed("stable input")
        b = client_for(echo_server).embed("stable input")
        np.testing.assert_array_equal(a.values, b.values)

    def test_mock_embedding_is_hash_seeded(self):
        v1 = mock_embedding("alpha", 64)
        v2 = mock_embedding("alpha", 64)
        v3 = mock_embedding("beta", 64)
        np.testing.assert_array_equal(v1, v2)
        assert not np.array_equal(v1, v3)

    def test_dimension_mismatch_guard(self, echo_server):
        client = client_for(echo_server)
        client.embed("first")
        client._embed_dims[client.config.embed_model] = 1024
        with pytest.raises(DimensionMismatch):
            client.embed("second")

    def test_empty_text(self, echo_server):
        with pytest.raises(EmptyPrompt):
            client_for(echo_server).embed("")


class TestHealth:
    def test_ping(self, echo_server):
        assert client_for(echo_server).ping()
        cfg = LlmConfig(base_url="http://127.0.0.1:9", timeout=0.2)
        assert not LlmClient(cfg).ping()
