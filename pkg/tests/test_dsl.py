"""Query DSL parser, renderer round-trip, and executor tests."""

import pytest
from hypothesis import given, settings, strategies as st

from acewgs.corpus import ArticleMeta
from acewgs.dsl import (
    ALL_OPS,
    NUMERIC_FIELDS,
    STRING_FIELDS,
    Predicate,
    QueryPlan,
    execute,
    parse_dsl,
    render_plan,
)
from acewgs.errors import DslSyntaxError, DslTypeError, UnknownField


def article(ref, year, journal="J", title="T", abstract="A", authors=("X",),
            doi="10.1/x"):
    return ArticleMeta(ref_id=ref, year=year, title=title, abstract=abstract,
                       journal=journal, authors=tuple(authors), doi=doi)


MANIFEST = [
    article("R51", 2017, journal="Science", abstract="Au clusters on α-MoC."),
    article("R60", 2019, journal="Nature", abstract="ceria supported copper"),
    article("R71", 2021, journal="Nature", abstract="crowding Pt on α-MoC"),
]


class TestParser:
    def test_select_with_contains(self):
        plan = parse_dsl("SELECT ref_id, title WHERE abstract CONTAINS 'MoC'")
        assert plan.verb == "SELECT"
        assert plan.fields == ("ref_id", "title")
        assert plan.predicates == (Predicate("abstract", "CONTAINS", "MoC"),)
        assert plan.limit is None

    def test_bare_count(self):
        assert parse_dsl("COUNT") == QueryPlan(verb="COUNT")

    def test_count_with_where(self):
        plan = parse_dsl("COUNT WHERE year EQ 2021")
        assert plan.predicates == (Predicate("year", "EQ", 2021),)

    def test_unknown_field(self):
        with pytest.raises(UnknownField):
            parse_dsl("SELECT nonsense WHERE year EQ 2021")

    def test_type_error_numeric_op_on_string_field(self):
        with pytest.raises(DslTypeError):
            parse_dsl("SELECT title WHERE title GT 5")

    def test_type_error_contains_on_year(self):
        with pytest.raises(DslTypeError):
            parse_dsl("SELECT title WHERE year CONTAINS '20'")

    def test_type_error_value_mismatch(self):
        with pytest.raises(DslTypeError):
            parse_dsl("SELECT title WHERE year EQ '2021'")
        with pytest.raises(DslTypeError):
            parse_dsl("SELECT title WHERE journal EQ 2021")

    def test_trailing_input_rejected(self):
        with pytest.raises(DslSyntaxError):
            parse_dsl("COUNT garbage")
        with pytest.raises(DslSyntaxError):
            parse_dsl("SELECT title WHERE year EQ 2021 SELECT")

    def test_unterminated_string(self):
        with pytest.raises(DslSyntaxError):
            parse_dsl("SELECT title WHERE journal EQ 'Nature")

    def test_whitespace_insensitive_and_case_insensitive_keywords(self):
        a = parse_dsl("select  journal\n where year eq 2021\tlimit 3")
        b = parse_dsl("SELECT journal WHERE year EQ 2021 LIMIT 3")
        assert a == b

    def test_escaped_quote(self):
        plan = parse_dsl("SELECT title WHERE abstract CONTAINS 'O''Neill'")
        assert plan.predicates[0].value == "O'Neill"

    def test_limit_positive(self):
        with pytest.raises(DslSyntaxError):
            parse_dsl("SELECT title LIMIT 0")

    def test_empty_query(self):
        with pytest.raises(DslSyntaxError):
            parse_dsl("")


def plans() -> st.SearchStrategy:
    string_values = st.text(
        alphabet=st.characters(blacklist_categories=("Cs", "Cc")),
        min_size=0, max_size=12)
    numeric_pred = st.builds(
        Predicate, field=st.just("year"),
        op=st.sampled_from(sorted(ALL_OPS - {"CONTAINS", "ICONTAINS"})),
        value=st.integers(min_value=-9999, max_value=9999))
    string_pred = st.builds(
        Predicate, field=st.sampled_from(sorted(STRING_FIELDS)),
        op=st.sampled_from(["EQ", "NEQ", "CONTAINS", "ICONTAINS"]),
        value=string_values)
    predicates = st.lists(st.one_of(numeric_pred, string_pred),
                          min_size=0, max_size=4).map(tuple)
    selects = st.builds(
        QueryPlan, verb=st.just("SELECT"),
        fields=st.lists(st.sampled_from(sorted(NUMERIC_FIELDS | STRING_FIELDS)),
                        min_size=1, max_size=4).map(tuple),
        predicates=predicates,
        limit=st.one_of(st.none(), st.integers(min_value=1, max_value=99)))
    counts = st.builds(QueryPlan, verb=st.just("COUNT"), fields=st.just(()),
                       predicates=predicates, limit=st.none())
    return st.one_of(selects, counts)


class TestRoundTrip:
    @given(plans())
    @settings(max_examples=500, deadline=None)
    def test_parse_render_identity(self, plan):
        assert parse_dsl(render_plan(plan)) == plan


class TestExecutor:
    def test_contains_case_sensitive(self):
        plan = parse_dsl("SELECT ref_id WHERE abstract CONTAINS 'MoC'")
        assert execute(plan, MANIFEST).single_column() == ["R51", "R71"]
        plan = parse_dsl("SELECT ref_id WHERE abstract CONTAINS 'moc'")
        assert execute(plan, MANIFEST).single_column() == []
        plan = parse_dsl("SELECT ref_id WHERE abstract ICONTAINS 'moc'")
        assert execute(plan, MANIFEST).single_column() == ["R51", "R71"]

    def test_projection_in_manifest_order(self):
        plan = parse_dsl("SELECT journal WHERE year GTE 2019")
        assert execute(plan, MANIFEST).single_column() == ["Nature", "Nature"]

    def test_count_empty(self):
        plan = parse_dsl("COUNT WHERE year EQ 3000")
        assert execute(plan, MANIFEST).rows == [[0]]

    def test_predicates_anded(self):
        plan = parse_dsl(
            "SELECT ref_id WHERE year GTE 2018 AND journal EQ 'Nature' "
            "AND abstract CONTAINS 'Pt'")
        assert execute(plan, MANIFEST).single_column() == ["R71"]

    def test_limit(self):
        plan = parse_dsl("SELECT ref_id LIMIT 2")
        assert execute(plan, MANIFEST).single_column() == ["R51", "R60"]

    def test_rows_satisfy_predicates_independent_refilter(self):
        plan = parse_dsl("SELECT ref_id, year WHERE year GT 2017")
        table = execute(plan, MANIFEST)
        by_ref = {a.ref_id: a for a in MANIFEST}
        for ref, year in table.rows:
            assert by_ref[ref].year == year and year > 2017

    def test_multi_field_rows(self):
        plan = parse_dsl("SELECT ref_id, year, journal WHERE year EQ 2021")
        assert execute(plan, MANIFEST).rows == [["R71", 2021, "Nature"]]
