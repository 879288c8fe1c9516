import pytest

from sarfkit.clustering import Decomposition
from sarfkit.graphs import WeightedDigraph, parse_member_graph


@pytest.fixture
def two_pair_graph() -> WeightedDigraph:
    """A<->B and C<->D, four unit edges."""
    return WeightedDigraph(
        vertices=frozenset("ABCD"),
        edges={("A", "B"): 1.0, ("B", "A"): 1.0, ("C", "D"): 1.0, ("D", "C"): 1.0},
    )


@pytest.fixture
def shared_target_member_graph():
    """B={m1,m2}; a1,a2 in A depend on m1; c1 in C depends on m2."""
    return parse_member_graph(
        "A\ta1\tB\tm1\tinvoke\n"
        "A\ta2\tB\tm1\tinvoke\n"
        "C\tc1\tB\tm2\tinvoke\n"
    )


def blocks(*groups):
    return Decomposition.from_blocks([list(g) for g in groups])


@pytest.fixture
def fig2_partitions():
    """Ten modules: reference A of two fives, a finer C, and the coarse D."""
    a = blocks(["a1", "a2", "a3", "a4", "a5"], ["b1", "b2", "b3", "b4", "b5"])
    c = blocks(["a1", "a2", "a3"], ["a4", "a5"], ["b1", "b2", "b3"], ["b4", "b5"])
    d = blocks(["a1", "a2", "a3", "a4", "a5", "b1", "b2", "b3", "b4", "b5"])
    return c, d, a
