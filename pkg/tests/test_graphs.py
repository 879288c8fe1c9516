import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sarfkit.errors import NormalizationError, ParseError
from sarfkit.graphs import (
    VIRTUAL_MEMBER,
    MemberGraph,
    WeightedDigraph,
    lift,
    normalize,
    parse_class_graph,
    parse_member_graph,
    parse_package_map,
    write_class_graph,
    write_member_graph,
    write_package_map,
)


class TestParseMemberGraph:
    def test_single_line(self):
        g = parse_member_graph("A\tf\tB\tg\tinvoke\n")
        assert g.edges == {(("A", "f"), ("B", "g"))}
        assert g.modules == {"A", "B"}
        assert g.members["A"] == {"f"}

    def test_duplicate_lines_collapse(self):
        g = parse_member_graph("A\tf\tB\tg\tinvoke\nA\tf\tB\tg\tinvoke\n")
        assert len(g.edges) == 1

    def test_typeref_targets_virtual_member(self):
        g = parse_member_graph("A\tf\tB\t<class>\ttyperef\n")
        assert g.edges == {(("A", "f"), ("B", VIRTUAL_MEMBER))}

    def test_typeref_redirects_named_member(self):
        g = parse_member_graph("A\tf\tB\tg\ttyperef\n")
        assert g.edges == {(("A", "f"), ("B", VIRTUAL_MEMBER))}

    def test_comments_and_blank_lines(self):
        g = parse_member_graph("# header\n\nA\tf\tB\tg\tinvoke\n")
        assert len(g.edges) == 1

    def test_all_kinds_accepted(self):
        text = "".join(
            f"A\tf{i}\tB\tg\t{kind}\n"
            for i, kind in enumerate(
                ["invoke", "field_read", "field_write", "inherit", "typeref"]
            )
        )
        g = parse_member_graph(text)
        assert len(g.edges) == 5

    @pytest.mark.parametrize(
        "bad, message",
        [
            ("A\tf\tB\tg\n", "expected 5"),
            ("A\tf\tB\tg\tcall\n", "unknown dependency kind"),
            ("A\t\tB\tg\tinvoke\n", "empty field"),
            ("A\t<class>\tB\tg\tinvoke\n", "source member"),
            ("A\tf\tB\t<class>\tinvoke\n", "reserved"),
        ],
    )
    def test_errors_name_the_line(self, bad, message):
        with pytest.raises(ParseError, match="line 2"):
            parse_member_graph("A\tf\tB\tg\tinvoke\n" + bad)
        with pytest.raises(ParseError, match=message):
            parse_member_graph(bad)


class TestNormalize:
    def test_nested_module_merges_into_prefix(self):
        g = parse_member_graph("X\tf\tOuter$Inner\tm\tinvoke\n")
        n = normalize(g)
        assert n.modules == {"X", "Outer"}
        assert n.members["Outer"] == {"Inner$m"}
        assert n.edges == {(("X", "f"), ("Outer", "Inner$m"))}

    def test_intra_module_edge_removed(self):
        g = parse_member_graph("A\tf\tA\tg\tinvoke\nA\tf\tB\tg\tinvoke\n")
        n = normalize(g)
        assert n.edges == {(("A", "f"), ("B", "g"))}

    def test_merge_created_intra_edge_removed(self):
        g = parse_member_graph("Outer$Inner\tm\tOuter\tf\tinvoke\n")
        n = normalize(g)
        assert n.edges == frozenset()
        assert n.members["Outer"] == {"Inner$m", "f"}

    def test_identity_on_flat_graph(self):
        g = parse_member_graph("A\tf\tB\tg\tinvoke\nB\tg\tC\th\tinvoke\n")
        assert normalize(g) == g

    def test_collision_reported(self):
        g = parse_member_graph(
            "Outer$Inner\tm\tX\tf\tinvoke\nOuter\tInner$m\tX\tf\tinvoke\n"
        )
        with pytest.raises(NormalizationError, match="Outer.Inner\\$m"):
            normalize(g)

    def test_custom_separator(self):
        g = parse_member_graph("Outer/Inner\tm\tX\tf\tinvoke\n")
        n = normalize(g, separator="/")
        assert n.modules == {"Outer", "X"}
        assert n.members["Outer"] == {"Inner/m"}

    def test_separator_must_be_single_character(self):
        g = MemberGraph.from_edges([])
        with pytest.raises(ValueError):
            normalize(g, separator="::")


class TestLift:
    def test_multiplicity_collapses(self):
        g = parse_member_graph("A\tf\tB\tg\tinvoke\nA\th\tB\tg\tinvoke\n")
        lifted = lift(g)
        assert lifted.edges == {("A", "B"): 1.0}

    def test_direction_preserved(self):
        g = parse_member_graph("A\tf\tB\tg\tinvoke\nB\tg\tA\tf\tinvoke\n")
        lifted = lift(g)
        assert set(lifted.edges) == {("A", "B"), ("B", "A")}

    def test_dependency_free_module_dropped(self):
        g = MemberGraph.from_edges(
            [(("A", "f"), ("B", "g")), (("C", "x"), ("C", "y"))]
        )
        lifted = lift(g)
        assert lifted.vertices == {"A", "B"}

    def test_every_vertex_has_degree(self):
        g = parse_member_graph("A\tf\tB\tg\tinvoke\nC\tf\tB\tg\tinvoke\n")
        lifted = lift(g)
        for v in lifted.vertices:
            assert lifted.fanin(v) > 0 or any(src == v for src, _ in lifted.edges)


class TestParseClassGraph:
    def test_default_weight(self):
        g = parse_class_graph("A\tB\n")
        assert g.edges == {("A", "B"): 1.0}

    def test_explicit_weight(self):
        g = parse_class_graph("A\tB\t0.25\n")
        assert g.edges[("A", "B")] == 0.25

    def test_duplicates_sum(self):
        g = parse_class_graph("A\tB\t0.25\nA\tB\t0.5\n")
        assert g.edges[("A", "B")] == 0.75

    @pytest.mark.parametrize(
        "bad", ["A\tA\n", "A\tB\t0\n", "A\tB\t-1\n", "A\tB\tx\n", "A\n", "\tB\n"]
    )
    def test_rejects(self, bad):
        with pytest.raises(ParseError, match="line 1"):
            parse_class_graph(bad)

    def test_weight_invariant(self):
        g = parse_class_graph("A\tB\nB\tC\t2\nC\tA\t0.5\n")
        total_out = sum(g.out_strength(v) for v in g.vertices)
        total_in = sum(g.in_strength(v) for v in g.vertices)
        assert abs(total_out - g.total_weight) < 1e-9
        assert abs(total_in - g.total_weight) < 1e-9


class TestParsePackageMap:
    def test_basic(self):
        p = parse_package_map("X\ta.b\n")
        assert p.assignment == {"X": "a.b"}

    def test_duplicate_idempotent(self):
        p = parse_package_map("X\ta.b\nX\ta.b\n")
        assert p.assignment == {"X": "a.b"}

    def test_conflict_rejected(self):
        with pytest.raises(ParseError, match="line 2"):
            parse_package_map("X\ta.b\nX\ta.c\n")

    def test_empty_field_rejected(self):
        with pytest.raises(ParseError):
            parse_package_map("X\t\n")


identifiers = st.text(alphabet="abXY12", min_size=1, max_size=3)
nested_modules = st.builds(
    lambda base, suffix: f"{base}${suffix}" if suffix else base,
    identifiers,
    st.one_of(st.none(), identifiers),
)
member_edges = st.lists(
    st.tuples(
        st.tuples(nested_modules, identifiers), st.tuples(nested_modules, identifiers)
    ),
    max_size=12,
)


@given(member_edges)
@settings(max_examples=150, deadline=None)
def test_normalize_is_idempotent(edges):
    g = MemberGraph.from_edges(edges)
    try:
        once = normalize(g)
    except NormalizationError:
        return
    assert normalize(once) == once


@given(member_edges)
@settings(max_examples=150, deadline=None)
def test_lift_vertices_are_cross_module_incident(edges):
    g = MemberGraph.from_edges(edges)
    lifted = lift(g)
    expected = {
        m for (sm, _), (dm, _) in g.edges if sm != dm for m in (sm, dm)
    }
    assert lifted.vertices == expected
    assert all(src != dst for src, dst in lifted.edges)


@given(member_edges)
@settings(max_examples=100, deadline=None)
def test_member_graph_round_trip(edges):
    g = MemberGraph.from_edges(edges)
    # the writer only restores modules/members reachable from edges
    if not g.edges:
        return
    assert parse_member_graph(write_member_graph(g)) == g


@given(
    st.dictionaries(
        st.tuples(identifiers, identifiers).filter(lambda e: e[0] != e[1]),
        st.floats(min_value=0.001, max_value=1000.0, allow_nan=False),
        max_size=10,
        min_size=1,
    )
)
@settings(max_examples=100, deadline=None)
def test_class_graph_round_trip(raw_edges):
    # snap weights to the writer's 9-significant-digit precision first
    edges = {pair: float(f"{w:.9g}") for pair, w in raw_edges.items()}
    vertices = frozenset(v for pair in edges for v in pair)
    g = WeightedDigraph(vertices=vertices, edges=edges)
    assert parse_class_graph(write_class_graph(g)) == g


def test_package_map_round_trip():
    p = parse_package_map("X\ta.b\nY\ta\nZ\tb.c.d\n")
    assert parse_package_map(write_package_map(p)) == p


def test_virtual_member_round_trip():
    g = parse_member_graph("A\tf\tB\tg\ttyperef\nA\tf\tC\th\tinherit\n")
    assert parse_member_graph(write_member_graph(g)) == g
