"""Deterministic mock model backend for offline tests and demos.

Serves the same wire protocol as the real backend on a loopback port.
Modes:
  * echo   — generate() returns the prompt prefixed with "echo: " (proves
             prompt content reached the backend);
  * canned — generate() returns the first scripted reply whose pattern is
             a substring of the prompt, with "*" as catch-all (the
             scripted-DSL mode is a canned script loaded from a fixture
             file of question -> DSL pairs).

Embeddings are derived from a PRNG seeded with a byte-hash of the text,
so the same text embeds identically across processes and restarts.
"""

from __future__ import annotations

import hashlib
import json
import logging
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import numpy as np

from acewgs.errors import PortUnavailable

logger = logging.getLogger(__name__)


@dataclass
class MockScript:
    mode: str = "echo"
    canned: dict[str, str] = field(default_factory=dict)
    embed_dim: int = 256
    known_models: set[str] | None = None   # None accepts every model name
    drop_connections: int = 0              # drop the first N connections

    @classmethod
    def echo(cls, **kwargs) -> "MockScript":
        return cls(mode="echo", **kwargs)

    @classmethod
    def canned_replies(cls, mapping: dict[str, str], **kwargs) -> "MockScript":
        return cls(mode="canned", canned=dict(mapping), **kwargs)

    @classmethod
    def from_dsl_fixture(cls, path: str | Path, **kwargs) -> "MockScript":
        """Scripted-DSL mode: JSON file mapping question patterns to DSL."""
        mapping = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls.canned_replies(mapping, **kwargs)

    def reply_for(self, prompt: str) -> str:
        if self.mode == "echo":
            return f"echo: {prompt}"
        for pattern, reply in self.canned.items():
            if pattern != "*" and pattern in prompt:
                return reply
        return self.canned.get("*", "")


def mock_embedding(text: str, dim: int) -> np.ndarray:
    """Repeatable pseudo-embedding: PRNG seeded with a byte-hash of text."""
    digest = hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest()
    seed = int.from_bytes(digest, "little")
    rng = np.random.default_rng(seed)
    return rng.standard_normal(dim)


class _Handler(BaseHTTPRequestHandler):
    server: "MockLlmServer"

    def log_message(self, fmt, *args):
        logger.debug("mockllm: " + fmt, *args)

    def _drop(self) -> bool:
        srv = self.server
        with srv.lock:
            if srv.dropped < srv.script.drop_connections:
                srv.dropped += 1
                return True
        return False

    def _json_body(self) -> dict:
        length = int(self.headers.get("Content-Length", 0))
        raw = self.rfile.read(length) if length else b"{}"
        try:
            return json.loads(raw)
        except ValueError:
            return {}

    def _send(self, status: int, payload: dict):
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self):
        self._send(200, {"status": "ok"})

    def do_POST(self):
        if self._drop():
            self.close_connection = True
            self.connection.close()
            return
        srv = self.server
        body = self._json_body()
        with srv.lock:
            srv.requests.append({"path": self.path, "body": body})
        model = body.get("model", "")
        if srv.script.known_models is not None and model not in srv.script.known_models:
            self._send(404, {"error": f"model '{model}' not found"})
            return
        if self.path == "/api/generate":
            prompt = body.get("prompt", "")
            self._send(200, {"response": srv.script.reply_for(prompt),
                             "model": model, "done": True})
        elif self.path == "/api/embeddings":
            prompt = body.get("prompt", "")
            vec = mock_embedding(prompt, srv.script.embed_dim)
            self._send(200, {"embedding": vec.tolist()})
        else:
            self._send(404, {"error": f"unknown path {self.path}"})


class MockLlmServer(ThreadingHTTPServer):
    """Loopback mock backend; use as a context manager in tests."""

    daemon_threads = True

    def __init__(self, script: MockScript | None = None, port: int = 0):
        self.script = script or MockScript.echo()
        self.requests: list[dict] = []
        self.lock = threading.Lock()
        self.dropped = 0
        try:
            super().__init__(("127.0.0.1", port), _Handler)
        except OSError as exc:
            raise PortUnavailable(f"cannot bind 127.0.0.1:{port}: {exc}") from exc
        self._thread: threading.Thread | None = None

    @property
    def base_url(self) -> str:
        return f"http://127.0.0.1:{self.server_address[1]}"

    def start(self) -> "MockLlmServer":
        self._thread = threading.Thread(target=self.serve_forever, daemon=True)
        self._thread.start()
        return self

    def stop(self):
        self.shutdown()
        if self._thread is not None:
            self._thread.join(timeout=5)
        self.server_close()

    def __enter__(self) -> "MockLlmServer":
        return self.start()

    def __exit__(self, *exc_info):
        self.stop()

    def prompts(self, path: str = "/api/generate") -> list[str]:
        """Captured prompt strings, oldest first (for prompt-content tests)."""
        with self.lock:
            return [r["body"].get("prompt", "") for r in self.requests
                    if r["path"] == path]


def mock_backend_serve(script: MockScript, port: int = 0) -> MockLlmServer:
    """Start a mock backend thread and return the running server."""
    return MockLlmServer(script, port=port).start()
