"""Rule-based query routing onto the four assistant features.

Priority order: explicit "/mode" command > mode lock > inverse keywords >
comprehend patterns > session stickiness (an active article captures
otherwise-unclaimed queries) > extract patterns > General fallback.

Rules live in a text file, one per line: ``priority feature regex``
(lower priority number wins; regexes are case-insensitive; '#' starts a
comment). Externalizing them keeps routing auditable and tunable without
code changes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from enum import Enum
from importlib import resources
from pathlib import Path

from acewgs.errors import UnknownReference


class FeatureKind(str, Enum):
    General = "general"
    Extract = "extract"
    Comprehend = "comprehend"
    Inverse = "inverse"


_REF_RE = re.compile(r"\bR\d+\b")
_MODE_RE = re.compile(r"^/mode\s+(\w+)\s*$", re.IGNORECASE)

_MODE_NAMES = {
    "general": FeatureKind.General,
    "extract": FeatureKind.Extract,
    "comprehend": FeatureKind.Comprehend,
    "inverse": FeatureKind.Inverse,
}


@dataclass(frozen=True)
class Rule:
    priority: int
    feature: FeatureKind
    pattern: re.Pattern

    @classmethod
    def parse(cls, line: str) -> "Rule | None":
        body = line.split("#", 1)[0].strip()
        if not body:
            return None
        parts = body.split(None, 2)
        if len(parts) != 3:
            raise ValueError(f"rule line needs 'priority feature pattern': {line!r}")
        priority, feature, pattern = parts
        return cls(priority=int(priority), feature=FeatureKind(feature.lower()),
                   pattern=re.compile(pattern, re.IGNORECASE))


@dataclass(frozen=True)
class RoutedQuery:
    kind: FeatureKind
    raw_text: str
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SessionState:
    active_article: str | None = None
    mode_lock: FeatureKind | None = None
    history: tuple[tuple[str, FeatureKind], ...] = ()


def load_rules(path: str | Path) -> list[Rule]:
    rules = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        rule = Rule.parse(line)
        if rule is not None:
            rules.append(rule)
    return sorted(rules, key=lambda r: r.priority)


def default_rules() -> list[Rule]:
    """The packaged rules file (data/router_rules.txt)."""
    text = resources.files("acewgs").joinpath("data/router_rules.txt").read_text("utf-8")
    rules = []
    for line in text.splitlines():
        rule = Rule.parse(line)
        if rule is not None:
            rules.append(rule)
    return sorted(rules, key=lambda r: r.priority)


class Router:
    """Deterministic router over a rule list and the corpus' reference IDs."""

    def __init__(self, rules: list[Rule] | None = None,
                 known_refs: set[str] | None = None):
        self.rules = sorted(rules if rules is not None else default_rules(),
                            key=lambda r: r.priority)
        self.known_refs = known_refs or set()

    def route(self, query: str, state: SessionState | None = None) -> RoutedQuery:
        """Map one query (plus session state) to a feature and parameters."""
        state = state or SessionState()
        text = query.strip()
        if not text:
            raise ValueError("query must be non-empty")

        mode = _MODE_RE.match(text)
        if mode:
            name = mode.group(1).lower()
            if name == "auto":
                return RoutedQuery(kind=FeatureKind.General, raw_text=query,
                                   params={"mode_set": "auto"})
            if name in _MODE_NAMES:
                return RoutedQuery(kind=_MODE_NAMES[name], raw_text=query,
                                   params={"mode_set": name})
            return RoutedQuery(kind=FeatureKind.General, raw_text=query,
                               params={"mode_error": name})

        if state.mode_lock is not None:
            return self._routed(state.mode_lock, query, state)

        first_match: FeatureKind | None = None
        for rule in self.rules:
            if rule.pattern.search(text):
                first_match = rule.feature
                break

        if first_match is FeatureKind.Inverse:
            return self._routed(FeatureKind.Inverse, query, state)
        if first_match is FeatureKind.Comprehend:
            return self._routed(FeatureKind.Comprehend, query, state)
        # Session stickiness: an active article captures queries no
        # higher-priority rule claimed (matches the follow-up dialogue
        # flow where questions omit the reference ID).
        if state.active_article is not None:
            return self._routed(FeatureKind.Comprehend, query, state)
        if first_match is not None:
            return self._routed(first_match, query, state)
        return self._routed(FeatureKind.General, query, state)

    def _routed(self, kind: FeatureKind, query: str, state: SessionState) -> RoutedQuery:
        params: dict = {}
        if kind is FeatureKind.Comprehend:
            ref = self._extract_ref(query)
            if ref is None:
                ref = state.active_article
            if ref is None:
                raise UnknownReference(
                    "no reference ID given and no article is active")
            if self.known_refs and ref not in self.known_refs:
                raise UnknownReference(f"{ref} is not in the manifest")
            params["ref_id"] = ref
            params["explicit_select"] = self._extract_ref(query) is not None
        return RoutedQuery(kind=kind, raw_text=query, params=params)

    @staticmethod
    def _extract_ref(query: str) -> str | None:
        m = _REF_RE.search(query)
        return m.group(0) if m else None


def update_session(state: SessionState, routed: RoutedQuery) -> SessionState:
    """Fold a routed query into the session (pure; returns the new state)."""
    history = state.history + ((routed.raw_text, routed.kind),)
    mode_set = routed.params.get("mode_set")
    if mode_set == "auto":
        # Ends both the mode lock and article stickiness.
        return replace(state, mode_lock=None, active_article=None, history=history)
    if mode_set in _MODE_NAMES:
        return replace(state, mode_lock=_MODE_NAMES[mode_set], history=history)
    if routed.kind is FeatureKind.Comprehend and "ref_id" in routed.params:
        return replace(state, active_article=routed.params["ref_id"], history=history)
    if routed.kind is FeatureKind.Inverse:
        # An explicit non-comprehend route ends article stickiness.
        return replace(state, active_article=None, history=history)
    return replace(state, history=history)
