"""Database-extraction feature: question -> DSL -> validated execution.

The LLM only ever produces text in the closed query DSL; nothing it
writes is executed directly. Unparseable output is fed back to the model
with the parser's error message, up to two retries.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from importlib import resources

from acewgs.corpus import ArticleMeta
from acewgs.dsl import QueryPlan, ResultTable, execute, parse_dsl
from acewgs.errors import DslError, TranslationExhausted
from acewgs.llm import LlmClient

logger = logging.getLogger(__name__)

TRANSLATE_RETRIES = 2

_FENCE_RE = re.compile(r"^```[a-zA-Z]*\n?|```$", re.MULTILINE)


def load_prompt(name: str) -> str:
    return resources.files("acewgs").joinpath(f"prompts/{name}.txt").read_text("utf-8")


def strip_llm_wrapping(text: str) -> str:
    """Drop code fences, a leading 'Query:' tag, and surrounding quotes."""
    text = _FENCE_RE.sub("", text).strip()
    if text.lower().startswith("query:"):
        text = text[len("query:"):].strip()
    return text.strip("`").strip()


@dataclass
class ExtractAnswer:
    dsl: str
    plan: QueryPlan
    table: ResultTable
    attempts: int

    def render_text(self) -> str:
        lines = self.table.to_lines()
        if not lines:
            return "No matching articles."
        if len(self.table.columns) == 1:
            return str([str(v) for v in self.table.single_column()])
        return "\n".join(lines)


class ExtractFeature:
    """Feature 2: metadata questions over the article manifest."""

    def __init__(self, client: LlmClient, manifest: list[ArticleMeta]):
        self.client = client
        self.manifest = manifest
        self._template = load_prompt("translate")

    def translate(self, question: str, feedback: str = "") -> str:
        """One LLM translation pass; returns the raw DSL text."""
        prompt = self._template.format(question=question, feedback=feedback)
        return self.client.generate(prompt).text

    def ask(self, question: str) -> ExtractAnswer:
        """Translate, parse (with bounded retry-on-error), and execute."""
        if not question.strip():
            raise ValueError("question must be non-empty")
        feedback = ""
        last_error: DslError | None = None
        for attempt in range(1 + TRANSLATE_RETRIES):
            raw = self.translate(question, feedback)
            dsl_text = strip_llm_wrapping(raw)
            try:
                plan = parse_dsl(dsl_text)
            except DslError as exc:
                last_error = exc
                logger.info("DSL attempt %d unparseable (%s): %r",
                            attempt + 1, exc, dsl_text)
                feedback = (f"\nYour previous query\n  {dsl_text}\n"
                            f"was rejected: {exc}. Produce a corrected query.\n")
                continue
            table = execute(plan, self.manifest)
            return ExtractAnswer(dsl=dsl_text, plan=plan, table=table,
                                 attempts=attempt + 1)
        raise TranslationExhausted(
            f"no parseable DSL after {1 + TRANSLATE_RETRIES} attempts: {last_error}")

    def run_dsl(self, dsl_text: str) -> ExtractAnswer:
        """Execute DSL directly (CLI/API path, no LLM involved)."""
        plan = parse_dsl(dsl_text)
        return ExtractAnswer(dsl=dsl_text, plan=plan,
                             table=execute(plan, self.manifest), attempts=0)
