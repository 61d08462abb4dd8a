"""Feature 4 orchestration: settings -> background PSO job -> rendered report.

The structured numbers in an InverseReport come straight from the
optimizer's solution and are the source of truth; the LLM only writes the
accompanying narrative (at most 200 words) and can never alter or lose
the numbers — a backend failure degrades the report to an empty narrative
with a flag.
"""

from __future__ import annotations

import dataclasses
import logging
import threading
import uuid
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

try:
    import tomllib
except ImportError:  # python 3.10
    import tomli as tomllib

from acewgs import pso
from acewgs.catalog import Catalog
from acewgs.errors import (
    AcewgsError,
    InfeasibleSpace,
    InvalidSettings,
    LlmError,
    UnknownCatalogId,
    UnknownJob,
)
from acewgs.extract import load_prompt
from acewgs.llm import LlmClient
from acewgs.pso import DesignSpace, PsoConfig, Solution
from acewgs.surrogate import ModelBundle, predict, predict_batch

logger = logging.getLogger(__name__)

NARRATIVE_WORD_LIMIT = 200
JOB_CAPACITY = 100

FEED_GASES = (("CO", "y_co"), ("H2O", "y_h2o"), ("CO2", "y_co2"),
              ("H2", "y_h2"), ("N2", "y_n2"))


@dataclass(frozen=True)
class ParameterSettings:
    """Researcher-chosen categorical design plus the temperature window."""

    base_metal: str
    support: str
    prep_method: str
    temperature_range: tuple[float, float]
    promoter: str | None = None
    bound_overrides: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict) -> "ParameterSettings":
        try:
            t = data["temperature_range"]
            return cls(
                base_metal=data["base_metal"],
                support=data["support"],
                prep_method=data["prep_method"],
                promoter=data.get("promoter") or None,
                temperature_range=(float(t[0]), float(t[1])),
                bound_overrides={k: (float(v[0]), float(v[1]))
                                 for k, v in data.get("bound_overrides", {}).items()},
            )
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise InvalidSettings(f"bad parameter settings: {exc}") from None

    @classmethod
    def from_toml(cls, path: str | Path) -> "ParameterSettings":
        data = tomllib.loads(Path(path).read_text(encoding="utf-8"))
        return cls.from_dict(data)

    def validate(self, catalog: Catalog) -> None:
        try:
            catalog.require("base_metals", self.base_metal)
            catalog.require("supports", self.support)
            catalog.require("prep_methods", self.prep_method)
            if self.promoter is not None:
                catalog.require("promoters", self.promoter)
        except UnknownCatalogId as exc:
            raise InvalidSettings(str(exc)) from None
        lo, hi = self.temperature_range
        if lo > hi:
            raise InvalidSettings(f"temperature range ({lo}, {hi}) is inverted")
        for dim, bounds in self.bound_overrides.items():
            if dim not in pso.DIMS:
                raise InvalidSettings(f"unknown bound override {dim!r}")
            if bounds[0] > bounds[1]:
                raise InvalidSettings(f"{dim}: bounds ({bounds[0]}, {bounds[1]}) inverted")

    def build_space(self, catalog: Catalog) -> DesignSpace:
        self.validate(catalog)
        bounds = dict(self.bound_overrides)
        bounds["temperature_c"] = self.temperature_range
        try:
            return DesignSpace(base_metal=self.base_metal, support=self.support,
                               promoter=self.promoter, prep_method=self.prep_method,
                               bounds=bounds)
        except InfeasibleSpace as exc:
            raise InvalidSettings(str(exc)) from None


def run_inverse(settings: ParameterSettings, catalog: Catalog, bundle: ModelBundle,
                cfg: PsoConfig, risk_lambda: float = 0.0, progress=None) -> Solution:
    """Run the PSO search for one settings object (synchronous)."""
    space = settings.build_space(catalog)

    def objective(design):
        p = predict(design, bundle)
        return p.conversion - risk_lambda * p.uncertainty

    def objective_batch(designs):
        return [p.conversion - risk_lambda * p.uncertainty
                for p in predict_batch(designs, bundle)]

    return pso.optimize(space, objective, cfg,
                        predictor=lambda d: predict(d, bundle),
                        objective_batch=objective_batch, progress=progress)


# --- report ------------------------------------------------------------------

@dataclass(frozen=True)
class InverseReport:
    composition: tuple[tuple[str, float], ...]   # (species, wt%) at 2 decimals
    conversion_pct: float
    uncertainty_pct: float
    equilibrium_conversion_pct: float
    temperature_c: float
    prep_method: str
    feed: tuple[tuple[str, float], ...]          # (gas, vol%) at 2 decimals
    time_on_stream_h: float
    w_f_ratio: float
    narrative: str
    narrative_truncated: bool = False
    narrative_degraded: bool = False
    iterations_used: int = 0

    def to_dict(self) -> dict:
        return {
            "format_version": 1,
            "composition": [{"species": s, "wt_pct": w} for s, w in self.composition],
            "conversion_pct": self.conversion_pct,
            "uncertainty_pct": self.uncertainty_pct,
            "equilibrium_conversion_pct": self.equilibrium_conversion_pct,
            "temperature_c": self.temperature_c,
            "prep_method": self.prep_method,
            "feed": [{"gas": g, "vol_pct": v} for g, v in self.feed],
            "time_on_stream_h": self.time_on_stream_h,
            "w_f_ratio": self.w_f_ratio,
            "narrative": self.narrative,
            "narrative_truncated": self.narrative_truncated,
            "narrative_degraded": self.narrative_degraded,
            "iterations_used": self.iterations_used,
        }


def word_count(text: str) -> int:
    return len(text.split())


def fmt_num(value: float) -> str:
    """Two-decimal display with trailing zeros trimmed (92.64, 0.1, 5, 1)."""
    text = f"{value:.2f}".rstrip("0").rstrip(".")
    return text if text else "0"


def _round2(value: float) -> float:
    return round(value, 2)


def build_report_data(solution: Solution, catalog: Catalog) -> InverseReport:
    """Structured report (narrative empty) from a solution, display-rounded."""
    d = solution.design
    parts = [(catalog.require("base_metals", d.base_metal), _round2(d.base_wt_pct))]
    if d.promoter is not None:
        parts.append((catalog.require("promoters", d.promoter),
                      _round2(d.promoter_wt_pct)))
    parts.append((catalog.require("supports", d.support), _round2(d.support_wt_pct)))
    # Independent 2-decimal rounding can drift the sum by up to 0.015;
    # absorb any excess beyond +-0.01 into the largest component.
    drift = _round2(sum(w for _, w in parts) - 100.0)
    if abs(drift) > 0.01:
        biggest = max(range(len(parts)), key=lambda i: parts[i][1])
        parts[biggest] = (parts[biggest][0], _round2(parts[biggest][1] - drift))
    feed = tuple((gas, _round2(100.0 * getattr(d.feed, attr)))
                 for gas, attr in FEED_GASES)
    return InverseReport(
        composition=tuple(parts),
        conversion_pct=_round2(solution.prediction.conversion),
        uncertainty_pct=_round2(solution.prediction.uncertainty),
        equilibrium_conversion_pct=_round2(solution.prediction.x_eq),
        temperature_c=_round2(d.temperature_c),
        prep_method=catalog.require("prep_methods", d.prep_method),
        feed=feed,
        time_on_stream_h=_round2(d.time_on_stream_h),
        w_f_ratio=_round2(d.w_f_ratio),
        narrative="",
        iterations_used=solution.iterations_used,
    )


def format_solution_text(report: InverseReport) -> str:
    """The case-study sentence form of a report (the chat answer body)."""
    comp = report.composition
    comp_head = ", ".join(f"{s} ({fmt_num(w)}%)" for s, w in comp[:-1])
    support_name, support_wt = comp[-1]
    feed_text = ", ".join(f"{g} ({fmt_num(v)}%)" for g, v in report.feed[:-1])
    feed_text += f", and {report.feed[-1][0]} ({fmt_num(report.feed[-1][1])}%)"
    hours = fmt_num(report.time_on_stream_h)
    hour_word = "hour" if hours == "1" else "hours"
    return (
        f"Found a catalytic solution of {comp_head} with the support of "
        f"{support_name} ({fmt_num(support_wt)}%) that can achieve maximum "
        f"{fmt_num(report.conversion_pct)}% (error ± {fmt_num(report.uncertainty_pct)}%) "
        f"CO conversion at {fmt_num(report.temperature_c)} °C. "
        f"The catalyst preparation method is {report.prep_method}. "
        f"The initial feed gases are {feed_text}. "
        f"The time on stream is {hours} {hour_word}. "
        f"The ratio of catalyst weight to feed flow rate is "
        f"{fmt_num(report.w_f_ratio)} mg min/ml."
    )


def render_report(solution: Solution, catalog: Catalog,
                  client: LlmClient | None) -> InverseReport:
    """Attach the LLM narrative (<= 200 words) to the structured report."""
    report = build_report_data(solution, catalog)
    if client is None:
        return report
    template = load_prompt("narrate")
    solution_text = format_solution_text(report)
    narrative = ""
    truncated = False
    degraded = False
    try:
        narrative = client.generate(
            template.format(solution=solution_text, strictness="")).text.strip()
        if word_count(narrative) > NARRATIVE_WORD_LIMIT:
            stricter = ("This is your second attempt. The hard limit is 200 "
                        "words; answer in well under 200 words.")
            narrative = client.generate(
                template.format(solution=solution_text,
                                strictness=stricter)).text.strip()
        if word_count(narrative) > NARRATIVE_WORD_LIMIT:
            narrative = " ".join(narrative.split()[:NARRATIVE_WORD_LIMIT])
            truncated = True
    except LlmError as exc:
        logger.warning("narrative generation failed; returning numbers only: %s", exc)
        narrative = ""
        degraded = True
    return dataclasses.replace(report, narrative=narrative,
                               narrative_truncated=truncated,
                               narrative_degraded=degraded)


# --- background jobs -----------------------------------------------------------

class JobStatus(str, Enum):
    Queued = "queued"
    Running = "running"
    Finished = "finished"
    Failed = "failed"


@dataclass
class InverseJob:
    job_id: str
    status: JobStatus
    settings: ParameterSettings
    progress_done: int = 0
    progress_total: int = 0
    result: InverseReport | None = None
    error: str | None = None

    def snapshot(self) -> dict:
        return {
            "job_id": self.job_id,
            "status": self.status.value,
            "progress": {"done": self.progress_done, "total": self.progress_total},
            "result": self.result.to_dict() if self.result else None,
            "error": self.error,
        }


class JobManager:
    """Bounded background queue for inverse-model runs (LRU result store)."""

    def __init__(self, catalog: Catalog, bundle: ModelBundle, cfg: PsoConfig,
                 client: LlmClient | None = None, max_workers: int = 2,
                 risk_lambda: float = 0.0, capacity: int = JOB_CAPACITY):
        self.catalog = catalog
        self.bundle = bundle
        self.cfg = cfg
        self.client = client
        self.risk_lambda = risk_lambda
        self.capacity = capacity
        self._jobs: OrderedDict[str, InverseJob] = OrderedDict()
        self._lock = threading.Lock()
        self._pool = ThreadPoolExecutor(max_workers=max_workers,
                                        thread_name_prefix="inverse")
        self._futures: dict[str, object] = {}

    def submit(self, settings: ParameterSettings) -> str:
        settings.validate(self.catalog)
        settings.build_space(self.catalog)   # surfaces infeasible overrides now
        job_id = uuid.uuid4().hex[:12]
        job = InverseJob(job_id=job_id, status=JobStatus.Queued, settings=settings,
                         progress_total=self.cfg.max_iters)
        with self._lock:
            self._jobs[job_id] = job
            self._evict_locked()
        self._futures[job_id] = self._pool.submit(self._run, job_id)
        return job_id

    def poll(self, job_id: str) -> dict:
        with self._lock:
            job = self._jobs.get(job_id)
            if job is None:
                raise UnknownJob(f"no job {job_id!r} (unknown or evicted)")
            self._jobs.move_to_end(job_id)
            return job.snapshot()

    def wait(self, job_id: str, timeout: float | None = None) -> dict:
        future = self._futures.get(job_id)
        if future is None:
            raise UnknownJob(f"no job {job_id!r}")
        future.result(timeout=timeout)
        return self.poll(job_id)

    def shutdown(self):
        self._pool.shutdown(wait=False, cancel_futures=True)

    def _run(self, job_id: str):
        with self._lock:
            job = self._jobs.get(job_id)
            if job is None:
                return
            job.status = JobStatus.Running

        def progress(done, total):
            with self._lock:
                j = self._jobs.get(job_id)
                if j is not None:
                    j.progress_done = done
                    j.progress_total = total

        try:
            solution = run_inverse(job.settings, self.catalog, self.bundle,
                                   self.cfg, risk_lambda=self.risk_lambda,
                                   progress=progress)
            report = render_report(solution, self.catalog, self.client)
        except AcewgsError as exc:
            logger.warning("inverse job %s failed: %s", job_id, exc)
            with self._lock:
                j = self._jobs.get(job_id)
                if j is not None:
                    j.status = JobStatus.Failed
                    j.error = f"{exc.code}: {exc}"
                self._evict_locked()
            return
        with self._lock:
            j = self._jobs.get(job_id)
            if j is not None:
                j.status = JobStatus.Finished
                j.result = report
                j.progress_done = j.progress_total = solution.iterations_used
            self._evict_locked()

    def _evict_locked(self):
        terminal = (JobStatus.Finished, JobStatus.Failed)
        while len(self._jobs) > self.capacity:
            victim = next((jid for jid, j in self._jobs.items()
                           if j.status in terminal), None)
            if victim is None:
                break
            del self._jobs[victim]
            self._futures.pop(victim, None)
