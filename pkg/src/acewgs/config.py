"""TOML configuration: sections [llm], [corpus], [pso], [service].

Every key has a default, so a missing config file yields a usable
development setup (demo corpus, packaged catalog/bundle, local backend).
ACEWGS_CONFIG names the config file; ACEWGS_LLM_URL overrides the
backend URL (handled inside LlmConfig).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ImportError:  # python 3.10
    import tomli as tomllib

from acewgs.errors import ConfigError
from acewgs.llm import LlmConfig
from acewgs.pso import PsoConfig

_LLM_KEY_MAP = {
    "base_url": "base_url",
    "model": "model_name",
    "embed_model": "embed_model",
    "embed_url": "embed_url",
    "temperature": "temperature",
    "top_k": "top_k",
    "top_p": "top_p",
    "timeout": "timeout",
    "max_retries": "max_retries",
}

_PSO_KEYS = {"swarm_size", "max_iters", "inertia", "cognitive", "social",
             "seed", "stagnation_window"}


@dataclass
class CorpusConfig:
    dir: str = "fixtures/corpus_demo"
    index_path: str | None = None     # default: <dir>/index.awvx
    chunk_size: int = 1000
    overlap: int = 150
    k: int = 4

    @property
    def effective_index_path(self) -> Path:
        return Path(self.index_path) if self.index_path \
            else Path(self.dir) / "index.awvx"


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8080
    max_jobs: int = 2
    session_ttl_s: float = 86400.0
    catalog_path: str | None = None   # default: packaged catalog
    bundle_path: str | None = None    # default: packaged reference bundle
    rules_path: str | None = None     # default: packaged routing rules
    static_dir: str | None = None     # web UI build output, served at /
    risk_lambda: float = 0.0


@dataclass
class AppConfig:
    llm: LlmConfig = field(default_factory=LlmConfig)
    corpus: CorpusConfig = field(default_factory=CorpusConfig)
    pso: PsoConfig = field(default_factory=PsoConfig)
    service: ServiceConfig = field(default_factory=ServiceConfig)


def _apply(section: dict, target, key_map: dict, section_name: str):
    for key, value in section.items():
        attr = key_map.get(key)
        if attr is None:
            raise ConfigError(f"unknown key {section_name}.{key}")
        setattr(target, attr, value)


def load_config(path: str | Path | None = None) -> AppConfig:
    """Load configuration; ``path`` falls back to $ACEWGS_CONFIG, then defaults."""
    if path is None:
        path = os.environ.get("ACEWGS_CONFIG")
    config = AppConfig()
    if path is None:
        return config
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        data = tomllib.loads(path.read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None

    known_sections = {"llm", "corpus", "pso", "service"}
    unknown = set(data) - known_sections
    if unknown:
        raise ConfigError(f"unknown config sections: {', '.join(sorted(unknown))}")

    try:
        llm_kwargs = {}
        for key, value in data.get("llm", {}).items():
            attr = _LLM_KEY_MAP.get(key)
            if attr is None:
                raise ConfigError(f"unknown key llm.{key}")
            llm_kwargs[attr] = value
        # Constructing afresh keeps validation and the env-var override
        # (ACEWGS_LLM_URL beats the file) in one place.
        config.llm = LlmConfig(**llm_kwargs)
        pso_kwargs = {}
        for key, value in data.get("pso", {}).items():
            if key == "risk_lambda":
                config.service.risk_lambda = float(value)
                continue
            if key not in _PSO_KEYS:
                raise ConfigError(f"unknown key pso.{key}")
            pso_kwargs[key] = value
        config.pso = PsoConfig(**pso_kwargs)
        corpus_keys = {k: k for k in ("dir", "index_path", "chunk_size", "overlap", "k")}
        _apply(data.get("corpus", {}), config.corpus, corpus_keys, "corpus")
        service_keys = {k: k for k in ("host", "port", "max_jobs", "session_ttl_s",
                                       "catalog_path", "bundle_path", "rules_path",
                                       "static_dir", "risk_lambda")}
        _apply(data.get("service", {}), config.service, service_keys, "service")
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return config
