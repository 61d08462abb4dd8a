"""HTTP service tying the four features behind the router.

Every /chat answer is routed through the same switch the tests exercise;
the API never bypasses it. All failures come back as structured JSON
{code, message} — stack traces stay in the server log.
"""

from __future__ import annotations

import logging
import re
import threading
import time
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from acewgs.catalog import Catalog
from acewgs.comprehend import ComprehensionPipeline
from acewgs.config import AppConfig
from acewgs.corpus import CorpusStore
from acewgs.errors import (
    AcewgsError,
    ArticleNotIndexed,
    ConfigError,
    DslError,
    EmptyRetrieval,
    InvalidSettings,
    LlmError,
    MissingText,
    TranslationExhausted,
    UnknownJob,
    UnknownReference,
)
from acewgs.extract import ExtractFeature, load_prompt
from acewgs.inverse import JobManager, ParameterSettings
from acewgs.llm import LlmClient
from acewgs.pso import DEFAULT_BOUNDS, DIMS
from acewgs.router import FeatureKind, Router, SessionState, load_rules, update_session
from acewgs.surrogate import load_bundle
from acewgs.vindex import VectorIndex

logger = logging.getLogger(__name__)

_COMPREHEND_SELECT_RE = re.compile(r"\bcomprehend\b", re.IGNORECASE)

_STATUS_BY_ERROR = (
    (InvalidSettings, 422),
    (DslError, 400),
    ((UnknownJob, UnknownReference, MissingText, ArticleNotIndexed,
      EmptyRetrieval), 404),
    ((LlmError, TranslationExhausted), 502),
)


class ChatRequest(BaseModel):
    session_id: str
    query: str


class ComprehendRequest(BaseModel):
    ref_id: str
    question: str
    k: int | None = None


@dataclass
class _Session:
    state: SessionState
    touched: float


class ServiceState:
    """Everything the endpoints share; built once at startup."""

    def __init__(self, config: AppConfig):
        self.config = config
        corpus_dir = Path(config.corpus.dir)
        if not (corpus_dir / "manifest.csv").is_file():
            raise ConfigError(
                f"no manifest at {corpus_dir / 'manifest.csv'}; "
                f"set corpus.dir in the config file")
        self.corpus = CorpusStore.open(corpus_dir)
        self.catalog = Catalog.load(config.service.catalog_path)
        if config.service.bundle_path:
            self.bundle = load_bundle(config.service.bundle_path)
        else:
            with resources.as_file(resources.files("acewgs")
                                   .joinpath("data/reference.bundle.json")) as p:
                self.bundle = load_bundle(p)
        self.client = LlmClient(config.llm)
        index_path = config.corpus.effective_index_path
        self.index = VectorIndex.load(index_path) if index_path.is_file() \
            else VectorIndex()
        rules = load_rules(config.service.rules_path) \
            if config.service.rules_path else None
        self.router = Router(rules=rules, known_refs=self.corpus.ref_ids)
        self.extract = ExtractFeature(self.client, self.corpus.articles)
        self.comprehension = ComprehensionPipeline(
            self.corpus, self.index, self.client, k=config.corpus.k,
            chunk_size=config.corpus.chunk_size, overlap=config.corpus.overlap)
        self.jobs = JobManager(self.catalog, self.bundle, config.pso,
                               client=self.client,
                               max_workers=config.service.max_jobs,
                               risk_lambda=config.service.risk_lambda)
        self._general_template = load_prompt("general")
        self._sessions: dict[str, _Session] = {}
        self._session_lock = threading.Lock()

    # --- sessions ------------------------------------------------------------

    def session(self, session_id: str) -> SessionState:
        now = time.monotonic()
        ttl = self.config.service.session_ttl_s
        with self._session_lock:
            expired = [sid for sid, s in self._sessions.items()
                       if now - s.touched > ttl]
            for sid in expired:
                del self._sessions[sid]
            entry = self._sessions.get(session_id)
            if entry is None:
                entry = _Session(state=SessionState(), touched=now)
                self._sessions[session_id] = entry
            entry.touched = now
            return entry.state

    def store_session(self, session_id: str, state: SessionState):
        with self._session_lock:
            self._sessions[session_id] = _Session(state=state, touched=time.monotonic())

    # --- chat ------------------------------------------------------------------

    def chat(self, session_id: str, query: str) -> dict:
        state = self.session(session_id)
        started = time.monotonic()
        routed = self.router.route(query, state)
        answer, sources, payload = self._answer(routed, state)
        new_state = update_session(state, routed)
        self.store_session(session_id, new_state)
        return {
            "session_id": session_id,
            "query": query,
            "routed_kind": routed.kind.value,
            "answer": answer,
            "sources": sources,
            "payload": payload,
            "timing_ms": (time.monotonic() - started) * 1000.0,
        }

    def _answer(self, routed, state: SessionState):
        params = routed.params
        if "mode_set" in params:
            name = params["mode_set"]
            text = ("Automatic routing restored." if name == "auto"
                    else f"Routing locked to the {name} feature. "
                         f"Send /mode auto to release.")
            return text, None, None
        if "mode_error" in params:
            return (f"Unknown mode {params['mode_error']!r}. Choose one of "
                    f"general, extract, comprehend, inverse, or auto."), None, None
        if routed.kind is FeatureKind.Inverse:
            return ("Set catalyst design parameters in the pop-up box. "
                    "Submit them to POST /api/v1/inverse/jobs to start the "
                    "inverse model."), None, None
        if routed.kind is FeatureKind.Extract:
            result = self.extract.ask(routed.raw_text)
            payload = {"dsl": result.dsl, "columns": result.table.columns,
                       "rows": result.table.rows}
            return result.render_text(), None, payload
        if routed.kind is FeatureKind.Comprehend:
            return self._comprehend_turn(routed)
        result = self.client.generate(
            self._general_template.format(question=routed.raw_text))
        return result.text, None, None

    def _comprehend_turn(self, routed):
        ref_id = routed.params["ref_id"]
        explicit = routed.params.get("explicit_select", False)
        if explicit and _COMPREHEND_SELECT_RE.search(routed.raw_text):
            self.ensure_indexed(ref_id)
            meta = self.corpus.get(ref_id)
            return (f"Ready to retrieve information from the article {ref_id}.\n"
                    f"Title: {meta.title}"), None, None
        self.ensure_indexed(ref_id)
        answer = self.comprehension.answer(ref_id, routed.raw_text)
        sources = [{"seq": s, "char_start": a, "char_end": b}
                   for s, a, b in answer.sources]
        return answer.text, sources, None

    def ensure_indexed(self, ref_id: str):
        if not self.comprehension.is_indexed(ref_id):
            count = self.comprehension.index_article(ref_id)
            logger.info("indexed %s: %d chunks", ref_id, count)

    def health(self) -> dict:
        return {
            "llm": "ok" if self.client.ping() else "down",
            "index": "ok",
            "indexed_chunks": len(self.index),
            "articles": len(self.corpus.articles),
        }


def create_app(config: AppConfig) -> FastAPI:
    state = ServiceState(config)
    app = FastAPI(title="acewgs", version="0.1.0", docs_url=None, redoc_url=None)
    app.state.service = state

    @app.exception_handler(AcewgsError)
    async def acewgs_error(request: Request, exc: AcewgsError):
        for types, status in _STATUS_BY_ERROR:
            if isinstance(exc, types):
                return JSONResponse(status_code=status,
                                    content={"code": exc.code, "message": str(exc)})
        return JSONResponse(status_code=500,
                            content={"code": exc.code, "message": str(exc)})

    @app.exception_handler(Exception)
    async def unexpected_error(request: Request, exc: Exception):
        logger.exception("unhandled error on %s", request.url.path)
        return JSONResponse(status_code=500,
                            content={"code": "internal_error",
                                     "message": "internal error"})

    @app.post("/api/v1/chat")
    def chat(body: ChatRequest):
        if not body.query.strip():
            return JSONResponse(status_code=400,
                                content={"code": "empty_query",
                                         "message": "query must be non-empty"})
        return state.chat(body.session_id, body.query)

    @app.get("/api/v1/articles")
    def articles(dsl: str | None = None):
        if dsl:
            result = state.extract.run_dsl(dsl)
            return {"columns": result.table.columns, "rows": result.table.rows,
                    "dsl": dsl}
        rows = [{"ref_id": a.ref_id, "year": a.year, "title": a.title,
                 "journal": a.journal} for a in state.corpus.articles]
        return {"articles": rows}

    @app.post("/api/v1/comprehend")
    def comprehend(body: ComprehendRequest):
        if body.ref_id not in state.corpus.ref_ids:
            raise UnknownReference(f"{body.ref_id} is not in the manifest")
        state.ensure_indexed(body.ref_id)
        answer = state.comprehension.answer(body.ref_id, body.question, k=body.k)
        return {
            "ref_id": body.ref_id,
            "answer": answer.text,
            "sources": [{"seq": s, "char_start": a, "char_end": b}
                        for s, a, b in answer.sources],
            "model_name": answer.model_name,
        }

    @app.post("/api/v1/inverse/jobs", status_code=202)
    def submit_job(body: dict):
        settings = ParameterSettings.from_dict(body)
        job_id = state.jobs.submit(settings)
        return {"job_id": job_id}

    @app.get("/api/v1/inverse/jobs/{job_id}")
    def poll_job(job_id: str):
        return state.jobs.poll(job_id)

    @app.get("/api/v1/catalog")
    def catalog():
        return {
            "catalog": state.catalog.as_dict(),
            "dimensions": list(DIMS),
            "default_bounds": {k: list(v) for k, v in DEFAULT_BOUNDS.items()},
        }

    @app.get("/api/v1/health")
    def health():
        return state.health()

    static_dir = config.service.static_dir
    if static_dir and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app


def serve(config: AppConfig):
    """Validate the setup, then run the HTTP server (blocking)."""
    import uvicorn

    app = create_app(config)
    logger.info("serving on %s:%d", config.service.host, config.service.port)
    uvicorn.run(app, host=config.service.host, port=config.service.port,
                log_level="info")
