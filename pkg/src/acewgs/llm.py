"""HTTP client for the local model server: text generation and embeddings.

Wire protocol (JSON over HTTP, streaming disabled):
    POST {base_url}/api/generate
        {"model", "prompt", "stream": false,
         "options": {"temperature", "top_k", "top_p"}}  ->  {"response": str}
    POST {base_url}/api/embeddings
        {"model", "prompt"}                             ->  {"embedding": [float]}

The options object carries exactly the three sampling parameters, nothing
else. ACEWGS_LLM_URL overrides the configured base URL.
"""

from __future__ import annotations

import logging
import os
import time
from dataclasses import dataclass, field

import numpy as np
import requests

from acewgs.errors import (
    ConnectionFailed,
    DimensionMismatch,
    EmptyPrompt,
    MalformedResponse,
    ModelNotFound,
)

logger = logging.getLogger(__name__)

DEFAULT_MODEL = "gemma2"
DEFAULT_EMBED_MODEL = "mxbai-embed-large"


@dataclass
class LlmConfig:
    """Backend endpoint plus the sampling parameters sent with every call."""

    base_url: str = "http://127.0.0.1:11434"
    model_name: str = DEFAULT_MODEL
    embed_model: str = DEFAULT_EMBED_MODEL
    embed_url: str | None = None   # defaults to base_url
    temperature: float = 0.0
    top_k: int = 10
    top_p: float = 0.5
    timeout: float = 120.0
    max_retries: int = 2

    def __post_init__(self):
        env_url = os.environ.get("ACEWGS_LLM_URL")
        if env_url:
            self.base_url = env_url
        if not self.base_url:
            raise ValueError("base_url must be non-empty")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if not 0 < self.top_p <= 1:
            raise ValueError("top_p must be in (0, 1]")
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")

    @property
    def effective_embed_url(self) -> str:
        return self.embed_url or self.base_url


@dataclass(frozen=True)
class GenerationResult:
    text: str
    model_name: str
    latency_ms: float


@dataclass(frozen=True)
class EmbeddingVector:
    values: np.ndarray
    dimension: int


@dataclass
class LlmClient:
    """Shareable blocking client; one session pools connections."""

    config: LlmConfig
    _session: requests.Session = field(default_factory=requests.Session, repr=False)
    _embed_dims: dict[str, int] = field(default_factory=dict, repr=False)

    def generate(self, prompt: str, model_name: str | None = None) -> GenerationResult:
        """Whole-answer completion with the configured sampling options."""
        if not prompt:
            raise EmptyPrompt("generate() requires a non-empty prompt")
        model = model_name or self.config.model_name
        body = {
            "model": model,
            "prompt": prompt,
            "stream": False,
            "options": {
                "temperature": self.config.temperature,
                "top_k": self.config.top_k,
                "top_p": self.config.top_p,
            },
        }
        start = time.monotonic()
        data = self._post(f"{self.config.base_url}/api/generate", body)
        latency = (time.monotonic() - start) * 1000.0
        if "response" not in data or not isinstance(data["response"], str):
            raise MalformedResponse("generate reply lacks a 'response' string")
        return GenerationResult(text=data["response"], model_name=model,
                                latency_ms=latency)

    def embed(self, text: str, model_name: str | None = None) -> EmbeddingVector:
        """Deterministic embedding of the text under the embed model."""
        if not text:
            raise EmptyPrompt("embed() requires non-empty text")
        model = model_name or self.config.embed_model
        body = {"model": model, "prompt": text}
        data = self._post(f"{self.config.effective_embed_url}/api/embeddings", body)
        if "embedding" not in data or not isinstance(data["embedding"], list):
            raise MalformedResponse("embeddings reply lacks an 'embedding' array")
        values = np.asarray(data["embedding"], dtype=np.float64)
        if values.ndim != 1 or values.size == 0 or not np.all(np.isfinite(values)):
            raise MalformedResponse("embedding is empty or non-finite")
        known = self._embed_dims.get(model)
        if known is None:
            self._embed_dims[model] = values.size
        elif values.size != known:
            raise DimensionMismatch(
                f"model {model!r} returned dimension {values.size}, "
                f"previously {known}")
        return EmbeddingVector(values=values, dimension=int(values.size))

    def ping(self) -> bool:
        """True when the backend answers on its base URL."""
        try:
            resp = self._session.get(self.config.base_url + "/",
                                     timeout=min(self.config.timeout, 5.0))
            return resp.ok
        except requests.RequestException:
            return False

    def _post(self, url: str, body: dict) -> dict:
        """POST with retry on connection failure only (never on bad payloads)."""
        attempts = 1 + max(0, self.config.max_retries)
        last_exc: Exception | None = None
        for attempt in range(attempts):
            try:
                resp = self._session.post(url, json=body, timeout=self.config.timeout)
            except (requests.ConnectionError, requests.Timeout) as exc:
                last_exc = exc
                logger.warning("backend unreachable (attempt %d/%d): %s",
                               attempt + 1, attempts, exc)
                continue
            if resp.status_code == 404:
                raise ModelNotFound(_error_text(resp) or f"404 from {url}")
            if resp.status_code >= 400:
                raise MalformedResponse(
                    f"backend returned {resp.status_code}: {_error_text(resp)}")
            try:
                data = resp.json()
            except ValueError:
                raise MalformedResponse("backend reply is not JSON") from None
            if not isinstance(data, dict):
                raise MalformedResponse("backend reply is not a JSON object")
            return data
        raise ConnectionFailed(f"backend unreachable after {attempts} attempts: {last_exc}")


def _error_text(resp: requests.Response) -> str:
    try:
        payload = resp.json()
        if isinstance(payload, dict) and "error" in payload:
            return str(payload["error"])
    except ValueError:
        pass
    return resp.text[:200]
