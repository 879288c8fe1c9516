"""Seeded synthetic graphs for tests and benchmarks: planted partitions,
random member/module graphs, and edge rewiring."""

from __future__ import annotations

import os
import random
from typing import Sequence

from .clustering import Decomposition
from .graphs import MemberGraph, WeightedDigraph

#: Environment variable consulted when no explicit seed is given.
SEED_ENV_VAR = "SARF_KIT_SEED"


def default_seed() -> int:
    return int(os.environ.get(SEED_ENV_VAR, "0"))


def _rng(seed: int | None) -> random.Random:
    return random.Random(default_seed() if seed is None else seed)


def planted_partition_graph(
    communities: int = 4,
    community_size: int = 8,
    p_intra: float = 0.6,
    p_inter: float = 0.05,
    seed: int | None = None,
) -> tuple[WeightedDigraph, Decomposition]:
    """Directed planted-partition graph plus its planted decomposition.

    Every ordered vertex pair receives a unit edge with probability ``p_intra``
    inside a community and ``p_inter`` across communities.  Deterministic for a
    given seed.
    """
    rng = _rng(seed)
    total = communities * community_size
    width = max(2, len(str(total - 1)))
    names = [f"m{i:0{width}d}" for i in range(total)]
    community_of = {name: i // community_size for i, name in enumerate(names)}
    edges: dict[tuple[str, str], float] = {}
    for src in names:
        for dst in names:
            if src == dst:
                continue
            p = p_intra if community_of[src] == community_of[dst] else p_inter
            if rng.random() < p:
                edges[(src, dst)] = 1.0
    blocks = [
        names[c * community_size : (c + 1) * community_size] for c in range(communities)
    ]
    return (
        WeightedDigraph(vertices=frozenset(names), edges=edges),
        Decomposition.from_blocks(blocks),
    )


def add_omnipresent_sink(graph: WeightedDigraph, name: str = "sink") -> WeightedDigraph:
    """Add one vertex receiving a unit edge from every existing vertex."""
    if name in graph.vertices:
        raise ValueError(f"vertex {name!r} already exists")
    edges = dict(graph.edges)
    for vertex in sorted(graph.vertices):
        edges[(vertex, name)] = 1.0
    return WeightedDigraph(vertices=graph.vertices | {name}, edges=edges)


def rewire_edges(
    graph: WeightedDigraph, fraction: float, seed: int | None = None
) -> WeightedDigraph:
    """Replace a seeded sample of edges with random non-existing ones.

    Each removed edge's weight re-attaches to its replacement; the vertex set
    is unchanged.
    """
    if not 0.0 <= fraction <= 1.0:
        raise ValueError("fraction must lie in [0, 1]")
    rng = _rng(seed)
    ordered = sorted(graph.edges.items())
    count = round(fraction * len(ordered))
    removed = set(rng.sample(range(len(ordered)), count))
    edges = {pair: w for i, (pair, w) in enumerate(ordered) if i not in removed}
    vertices = sorted(graph.vertices)
    for i in sorted(removed):
        _, weight = ordered[i]
        while True:
            src = rng.choice(vertices)
            dst = rng.choice(vertices)
            if src != dst and (src, dst) not in edges:
                edges[(src, dst)] = weight
                break
    return WeightedDigraph(vertices=graph.vertices, edges=edges)


def random_class_graph(
    vertices: int = 12,
    edge_probability: float = 0.2,
    weighted: bool = False,
    seed: int | None = None,
) -> WeightedDigraph:
    """Random directed graph with at least one edge; unit or uniform weights."""
    rng = _rng(seed)
    width = max(2, len(str(max(vertices - 1, 1))))
    names = [f"v{i:0{width}d}" for i in range(vertices)]
    edges: dict[tuple[str, str], float] = {}
    for src in names:
        for dst in names:
            if src != dst and rng.random() < edge_probability:
                edges[(src, dst)] = rng.uniform(0.25, 4.0) if weighted else 1.0
    if not edges and len(names) >= 2:
        edges[(names[0], names[1])] = 1.0
    return WeightedDigraph(vertices=frozenset(names), edges=edges)


def random_member_graph(
    modules: int = 6,
    members_per_module: int = 3,
    edge_probability: float = 0.15,
    seed: int | None = None,
) -> MemberGraph:
    """Random normalized member graph (cross-module edges only)."""
    rng = _rng(seed)
    refs = [
        (f"M{i}", f"f{j}") for i in range(modules) for j in range(members_per_module)
    ]
    edges = set()
    for src in refs:
        for dst in refs:
            if src[0] != dst[0] and rng.random() < edge_probability:
                edges.add((src, dst))
    if not edges and modules >= 2:
        edges.add((refs[0], ("M1", "f0")))
    return MemberGraph.from_edges(edges)


def random_decomposition(
    modules: Sequence[str] | int, seed: int | None = None
) -> Decomposition:
    """Random partition of the given modules (or of ``modules`` fresh names)."""
    rng = _rng(seed)
    if isinstance(modules, int):
        names = [f"x{i:02d}" for i in range(modules)]
    else:
        names = sorted(modules)
    blocks: list[list[str]] = []
    for name in names:
        if blocks and rng.random() < 0.6:
            rng.choice(blocks).append(name)
        else:
            blocks.append([name])
    return Decomposition.from_blocks(blocks)
