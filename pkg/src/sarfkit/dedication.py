"""Dedication scoring: fan-in based weighting of dependency edges.

The score of an edge (A, B) estimates how exclusively B serves A.  The simple
variant uses module-level fan-in only; the multi-level variant distributes the
score over the individual members of B that A actually reaches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .errors import DomainError
from .graphs import MemberGraph, MemberRef, WeightedDigraph

#: Absolute tolerance for the internal per-target normalization checks.
SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class DedicationTerms:
    """Ingredients of the multi-level score for one edge (A, B).

    ``members_depended`` is the set of B's members reached from A,
    ``external_fanin`` maps each externally depended member of B to the number
    of members outside B depending on it, and ``externally_depended_count`` is
    the number of B's members with at least one external dependent.
    """

    members_depended: frozenset[str]
    external_fanin: Mapping[str, int]
    externally_depended_count: int


def _external_dependents(graph: MemberGraph) -> dict[str, dict[str, set[MemberRef]]]:
    """target module -> target member -> set of external (module, member) sources."""
    table: dict[str, dict[str, set[MemberRef]]] = {}
    for (src_mod, src_mem), (dst_mod, dst_mem) in graph.edges:
        if src_mod == dst_mod:
            continue
        table.setdefault(dst_mod, {}).setdefault(dst_mem, set()).add((src_mod, src_mem))
    return table


def dedication_simple(graph: WeightedDigraph) -> WeightedDigraph:
    """Re-weight every edge (A, B) to 1/fanin(B).

    Existing weights are ignored: the score is purely structural.  The weights
    into each target sum to exactly one.
    """
    weights = {(src, dst): 1.0 / graph.fanin(dst) for (src, dst) in graph.edges}
    targets = {dst for _, dst in weights}
    for target in targets:
        total = math.fsum(w for (_, dst), w in sorted(weights.items()) if dst == target)
        assert abs(total - 1.0) < SUM_TOLERANCE
    return WeightedDigraph(vertices=graph.vertices, edges=weights)


def dedication_terms(graph: MemberGraph, source: str, target: str) -> DedicationTerms:
    """Compute the multi-level score ingredients for the edge (source, target).

    ``graph`` must be normalized; only cross-module member edges count.
    """
    table = _external_dependents(graph).get(target, {})
    xfanin = {member: len(srcs) for member, srcs in table.items()}
    reached = frozenset(
        member
        for member, srcs in table.items()
        if any(mod == source for mod, _ in srcs)
    )
    if not reached:
        raise DomainError(f"no member edge from {source!r} into {target!r}")
    return DedicationTerms(
        members_depended=reached,
        external_fanin=xfanin,
        externally_depended_count=len(xfanin),
    )


def dedication_multilevel(graph: MemberGraph) -> WeightedDigraph:
    """Score every lifted edge from the member-level structure.

    Each member m of B that A reaches contributes
    ``1 / (external_fanin(m) * externally_depended_count(B))``.  The vertex set
    equals the lifted graph's vertex set, and the weights into each target sum
    to at most one.
    """
    table = _external_dependents(graph)
    weights: dict[tuple[str, str], float] = {}
    for target in sorted(table):
        xfanin = {member: len(srcs) for member, srcs in table[target].items()}
        depended_count = len(xfanin)
        by_source: dict[str, set[str]] = {}
        for member, srcs in table[target].items():
            for src_mod, _ in srcs:
                by_source.setdefault(src_mod, set()).add(member)
        for source in sorted(by_source):
            weights[(source, target)] = math.fsum(
                1.0 / (xfanin[member] * depended_count)
                for member in sorted(by_source[source])
            )
        total = math.fsum(weights[(source, target)] for source in sorted(by_source))
        assert 0.0 < total <= 1.0 + SUM_TOLERANCE
    vertices = frozenset(v for edge in weights for v in edge)
    return WeightedDigraph(vertices=vertices, edges=weights)
