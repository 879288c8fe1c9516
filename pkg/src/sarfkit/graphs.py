"""Dependency-graph data model: member-level graphs, module-level weighted digraphs,
package maps, the TSV interchange formats, and the normalization/lifting rules."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .errors import NormalizationError, ParseError

#: Reserved member token standing in for "the module itself" as the target of a
#: type reference.  Forbidden as an ordinary member name.
VIRTUAL_MEMBER = "<class>"

DEPENDENCY_KINDS = ("invoke", "field_read", "field_write", "inherit", "typeref")

#: Default character separating a top-level module name from nested-module suffixes.
DEFAULT_SEPARATOR = "$"

MemberRef = tuple[str, str]
MemberEdge = tuple[MemberRef, MemberRef]


@dataclass(frozen=True, eq=True)
class MemberGraph:
    """Directed member-level dependency graph.

    Modules own members; edges connect ``(module, member)`` pairs.  Member
    identifiers are opaque except for the reserved :data:`VIRTUAL_MEMBER` token.
    Instances are immutable; all operations on them are pure functions.
    """

    modules: frozenset[str]
    members: Mapping[str, frozenset[str]]
    edges: frozenset[MemberEdge]

    def __post_init__(self) -> None:
        if set(self.members) != set(self.modules):
            raise ValueError("members mapping must have exactly one entry per module")
        for src, dst in self.edges:
            for module, member in (src, dst):
                if module not in self.modules or member not in self.members[module]:
                    raise ValueError(f"edge endpoint {module}.{member} is not declared")

    @classmethod
    def from_edges(cls, edges: Iterable[MemberEdge]) -> "MemberGraph":
        """Build a graph whose modules and members are exactly the edge endpoints."""
        edge_set = frozenset(edges)
        members: dict[str, set[str]] = {}
        for src, dst in edge_set:
            for module, member in (src, dst):
                members.setdefault(module, set()).add(member)
        return cls(
            modules=frozenset(members),
            members={module: frozenset(ms) for module, ms in members.items()},
            edges=edge_set,
        )

    def cross_module_edges(self) -> frozenset[MemberEdge]:
        return frozenset(e for e in self.edges if e[0][0] != e[1][0])


@dataclass(frozen=True, eq=True)
class WeightedDigraph:
    """Module-level directed graph with strictly positive edge weights.

    Zero-weight edges are absent rather than stored, and self-edges are
    rejected.  Isolated vertices are permitted (they can appear in synthetic
    graphs); the TSV parser only ever declares vertices through edges.
    """

    vertices: frozenset[str]
    edges: Mapping[tuple[str, str], float]

    def __post_init__(self) -> None:
        for (src, dst), weight in self.edges.items():
            if src == dst:
                raise ValueError(f"self-edge on {src!r}")
            if src not in self.vertices or dst not in self.vertices:
                raise ValueError(f"edge ({src}, {dst}) references an undeclared vertex")
            if not (weight > 0.0) or math.isinf(weight):
                raise ValueError(f"edge ({src}, {dst}) must have a positive finite weight")

    @cached_property
    def total_weight(self) -> float:
        """W: the sum of all edge weights."""
        return math.fsum(w for _, w in sorted(self.edges.items()))

    @cached_property
    def _fanin(self) -> dict[str, int]:
        counts = {v: 0 for v in self.vertices}
        for _, dst in self.edges:
            counts[dst] += 1
        return counts

    @cached_property
    def _out_strength(self) -> dict[str, float]:
        acc: dict[str, list[float]] = {v: [] for v in self.vertices}
        for (src, _), weight in sorted(self.edges.items()):
            acc[src].append(weight)
        return {v: math.fsum(ws) for v, ws in acc.items()}

    @cached_property
    def _in_strength(self) -> dict[str, float]:
        acc: dict[str, list[float]] = {v: [] for v in self.vertices}
        for (_, dst), weight in sorted(self.edges.items()):
            acc[dst].append(weight)
        return {v: math.fsum(ws) for v, ws in acc.items()}

    def fanin(self, vertex: str) -> int:
        """Number of distinct incoming edges of ``vertex``."""
        return self._fanin[vertex]

    def out_strength(self, vertex: str) -> float:
        """k_out: summed weight of outgoing edges."""
        return self._out_strength[vertex]

    def in_strength(self, vertex: str) -> float:
        """k_in: summed weight of incoming edges."""
        return self._in_strength[vertex]

    def with_unit_weights(self) -> "WeightedDigraph":
        return WeightedDigraph(self.vertices, {e: 1.0 for e in self.edges})


@dataclass(frozen=True, eq=True)
class PackageMap:
    """Assignment of each module to exactly one dot-separated package path."""

    assignment: Mapping[str, str]

    def packages(self) -> dict[str, frozenset[str]]:
        """Group modules by their exact package path."""
        groups: dict[str, set[str]] = {}
        for module, path in self.assignment.items():
            groups.setdefault(path, set()).add(module)
        return {path: frozenset(mods) for path, mods in groups.items()}


def _data_lines(text: str):
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        yield lineno, line


def parse_member_graph(text: str) -> MemberGraph:
    """Parse the member-edge TSV format.

    Columns: ``src_module  src_member  dst_module  dst_member  kind``.
    Duplicate lines collapse to one edge; ``typeref`` edges are redirected to
    the destination module's virtual member and kinds are otherwise discarded.
    """
    edges: set[MemberEdge] = set()
    for lineno, line in _data_lines(text):
        cols = line.split("\t")
        if len(cols) != 5:
            raise ParseError(f"line {lineno}: expected 5 tab-separated columns, got {len(cols)}")
        src_mod, src_mem, dst_mod, dst_mem, kind = cols
        if not all(cols):
            raise ParseError(f"line {lineno}: empty field")
        if kind not in DEPENDENCY_KINDS:
            raise ParseError(f"line {lineno}: unknown dependency kind {kind!r}")
        if src_mem == VIRTUAL_MEMBER:
            raise ParseError(f"line {lineno}: {VIRTUAL_MEMBER} cannot be a source member")
        if kind == "typeref":
            dst_mem = VIRTUAL_MEMBER
        elif dst_mem == VIRTUAL_MEMBER:
            raise ParseError(
                f"line {lineno}: {VIRTUAL_MEMBER} is reserved for typeref targets"
            )
        edges.add(((src_mod, src_mem), (dst_mod, dst_mem)))
    return MemberGraph.from_edges(edges)


def normalize(graph: MemberGraph, separator: str = DEFAULT_SEPARATOR) -> MemberGraph:
    """Merge nested modules into their top-level module and drop intra-module edges.

    A module whose identifier contains ``separator`` is renamed to the prefix
    before the first occurrence; its members are re-homed under that prefix
    with the removed suffix prepended so they stay unique.  Edges between
    members of the same post-merge module are deleted and duplicates collapse.
    Idempotent.
    """
    if len(separator) != 1:
        raise ValueError("separator must be a single character")
    member_map: dict[MemberRef, MemberRef] = {}
    module_map: dict[str, str] = {}
    for module in sorted(graph.modules):
        if separator in module:
            prefix, _, suffix = module.partition(separator)
            if not prefix:
                raise NormalizationError(
                    f"module {module!r} has an empty name before {separator!r}"
                )
            module_map[module] = prefix
            for member in graph.members[module]:
                member_map[(module, member)] = (prefix, f"{suffix}{separator}{member}")
        else:
            module_map[module] = module
            for member in graph.members[module]:
                member_map[(module, member)] = (module, member)

    owners: dict[MemberRef, list[MemberRef]] = {}
    for old, new in member_map.items():
        owners.setdefault(new, []).append(old)
    collisions = sorted(new for new, olds in owners.items() if len(olds) > 1)
    if collisions:
        listing = ", ".join(f"{module}.{member}" for module, member in collisions)
        raise NormalizationError(f"member identifiers collide after merging: {listing}")

    members: dict[str, set[str]] = {module_map[m]: set() for m in graph.modules}
    for module, member in member_map.values():
        members[module].add(member)
    edges: set[MemberEdge] = set()
    for src, dst in graph.edges:
        new_src, new_dst = member_map[src], member_map[dst]
        if new_src[0] == new_dst[0]:
            continue
        edges.add((new_src, new_dst))
    return MemberGraph(
        modules=frozenset(members),
        members={module: frozenset(ms) for module, ms in members.items()},
        edges=frozenset(edges),
    )


def lift(graph: MemberGraph) -> WeightedDigraph:
    """Collapse a member-level graph to a unit-weighted module-level graph.

    Only modules touching at least one cross-module member edge become
    vertices; dependency-free modules are dropped.
    """
    edges: dict[tuple[str, str], float] = {}
    for (src_mod, _), (dst_mod, _) in graph.edges:
        if src_mod != dst_mod:
            edges[(src_mod, dst_mod)] = 1.0
    vertices = frozenset(v for edge in edges for v in edge)
    return WeightedDigraph(vertices=vertices, edges=edges)


def parse_class_graph(text: str) -> WeightedDigraph:
    """Parse the module-edge TSV format: ``src  dst  [weight]``.

    The weight defaults to 1; duplicate ``(src, dst)`` lines sum their weights.
    """
    weights: dict[tuple[str, str], float] = {}
    for lineno, line in _data_lines(text):
        cols = line.split("\t")
        if len(cols) not in (2, 3):
            raise ParseError(f"line {lineno}: expected 2 or 3 tab-separated columns, got {len(cols)}")
        src, dst = cols[0], cols[1]
        if not src or not dst:
            raise ParseError(f"line {lineno}: empty module field")
        if src == dst:
            raise ParseError(f"line {lineno}: self-edge on {src!r}")
        weight = 1.0
        if len(cols) == 3:
            try:
                weight = float(cols[2])
            except ValueError:
                raise ParseError(f"line {lineno}: malformed weight {cols[2]!r}") from None
            if not math.isfinite(weight) or weight <= 0.0:
                raise ParseError(f"line {lineno}: weight must be positive, got {cols[2]}")
        key = (src, dst)
        weights[key] = weights.get(key, 0.0) + weight
    vertices = frozenset(v for edge in weights for v in edge)
    return WeightedDigraph(vertices=vertices, edges=weights)


def parse_package_map(text: str) -> PackageMap:
    """Parse the package TSV format: ``module  package.path``."""
    assignment: dict[str, str] = {}
    for lineno, line in _data_lines(text):
        cols = line.split("\t")
        if len(cols) != 2:
            raise ParseError(f"line {lineno}: expected 2 tab-separated columns, got {len(cols)}")
        module, path = cols
        if not module or not path:
            raise ParseError(f"line {lineno}: empty field")
        if module in assignment and assignment[module] != path:
            raise ParseError(
                f"line {lineno}: module {module!r} assigned to both "
                f"{assignment[module]!r} and {path!r}"
            )
        assignment[module] = path
    return PackageMap(assignment=assignment)


def format_weight(weight: float) -> str:
    """Canonical 9-significant-digit weight rendering used by the TSV writer."""
    return f"{weight:.9g}"


def write_member_graph(graph: MemberGraph) -> str:
    """Canonical member-edge TSV: rows sorted, virtual-member targets as typeref."""
    lines = []
    for (src_mod, src_mem), (dst_mod, dst_mem) in sorted(graph.edges):
        kind = "typeref" if dst_mem == VIRTUAL_MEMBER else "invoke"
        lines.append(f"{src_mod}\t{src_mem}\t{dst_mod}\t{dst_mem}\t{kind}")
    return "".join(line + "\n" for line in lines)


def write_class_graph(graph: WeightedDigraph) -> str:
    """Canonical module-edge TSV: rows sorted lexicographically, 9-digit weights."""
    lines = []
    for (src, dst), weight in sorted(graph.edges.items()):
        lines.append(f"{src}\t{dst}\t{format_weight(weight)}")
    return "".join(line + "\n" for line in lines)


def write_package_map(package_map: PackageMap) -> str:
    lines = [f"{module}\t{path}" for module, path in sorted(package_map.assignment.items())]
    return "".join(line + "\n" for line in lines)
