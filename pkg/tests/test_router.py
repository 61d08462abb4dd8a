"""Switch routing rules, priorities, and session stickiness."""

import pytest
from hypothesis import given, settings, strategies as st

from acewgs.errors import UnknownReference
from acewgs.router import (
    FeatureKind,
    Router,
    Rule,
    SessionState,
    default_rules,
    update_session,
)

REFS = {"R12", "R51", "R71"}


@pytest.fixture()
def router():
    return Router(known_refs=REFS)


class TestRouting:
    def test_run_inverse_model(self, router):
        assert router.route("Run inverse model.").kind is FeatureKind.Inverse

    def test_comprehend_with_ref(self, router):
        routed = router.route("Comprehend the article of reference ID R71.")
        assert routed.kind is FeatureKind.Comprehend
        assert routed.params["ref_id"] == "R71"

    def test_general_fallback(self, router):
        assert router.route("What is the water-gas shift reaction?").kind \
            is FeatureKind.General

    def test_extract_keywords(self, router):
        q = "Extract the journal names for all papers that were published in 2021."
        assert router.route(q).kind is FeatureKind.Extract

    def test_unknown_reference(self, router):
        with pytest.raises(UnknownReference):
            router.route("Comprehend the article of reference ID R999.")

    def test_comprehend_without_ref_or_active(self, router):
        with pytest.raises(UnknownReference):
            router.route("Comprehend the article.")

    def test_empty_query_rejected(self, router):
        with pytest.raises(ValueError):
            router.route("   ")

    def test_deterministic(self, router):
        state = SessionState(active_article="R51")
        q = "Find the preparation method."
        assert router.route(q, state) == router.route(q, state)


class TestStickiness:
    def test_followup_routes_to_active_article(self, router):
        state = SessionState()
        routed = router.route("Comprehend the article of reference ID R71.", state)
        state = update_session(state, routed)
        assert state.active_article == "R71"
        follow = router.route("Extract the name of the catalysts mentioned "
                              "in the article.", state)
        assert follow.kind is FeatureKind.Comprehend
        assert follow.params["ref_id"] == "R71"

    def test_inverse_still_wins_while_sticky(self, router):
        state = SessionState(active_article="R71")
        assert router.route("Run inverse model.", state).kind is FeatureKind.Inverse

    def test_mode_auto_clears_stickiness(self, router):
        state = SessionState(active_article="R71")
        routed = router.route("/mode auto", state)
        state = update_session(state, routed)
        assert state.active_article is None
        assert state.mode_lock is None
        q = "Provide one or two catalyst design ideas."
        assert router.route(q, state).kind is FeatureKind.General


class TestModeLock:
    def test_lock_and_clear(self, router):
        state = SessionState()
        state = update_session(state, router.route("/mode extract", state))
        assert state.mode_lock is FeatureKind.Extract
        assert router.route("anything at all", state).kind is FeatureKind.Extract
        state = update_session(state, router.route("/mode auto", state))
        assert state.mode_lock is None

    def test_mode_command_bypasses_lock(self, router):
        state = SessionState(mode_lock=FeatureKind.Extract)
        routed = router.route("/mode inverse", state)
        assert routed.params["mode_set"] == "inverse"


class TestSessionUpdates:
    def test_history_grows(self, router):
        state = SessionState()
        routed = router.route("What is WGS?", state)
        state = update_session(state, routed)
        assert len(state.history) == 1
        assert state.history[0] == ("What is WGS?", FeatureKind.General)

    def test_inverse_clears_active_article(self, router):
        state = SessionState(active_article="R71")
        state = update_session(state, router.route("Run inverse model.", state))
        assert state.active_article is None


class TestPriorities:
    def test_totality(self, router):
        # Every non-empty query maps to exactly one feature (no active
        # article, so comprehension needs an explicit in-manifest ref).
        @given(st.text(min_size=1).filter(
            lambda s: s.strip() and "R" not in s and not s.lstrip().startswith("/")))
        @settings(max_examples=300, deadline=None)
        def check(query):
            kind = router.route(query).kind
            assert kind in set(FeatureKind)
        check()

    def test_lower_priority_rule_added_later_cannot_steal(self):
        base = default_rules()
        fixture = [
            ("Run inverse model.", FeatureKind.Inverse),
            ("Comprehend the article of reference ID R71.", FeatureKind.Comprehend),
            ("Retrieve papers where the string 'MoC' appears.", FeatureKind.Extract),
        ]
        before = [Router(base, REFS).route(q).kind for q, _ in fixture]
        widened = base + [Rule.parse("99 extract .*")]
        after = [Router(widened, REFS).route(q).kind for q, _ in fixture]
        assert before == after == [kind for _, kind in fixture]
