"""Directed weighted modularity, greedy agglomeration, and the clustering pipelines.

The quality objective for a decomposition is

    Q_D = (1/W) * sum_ij [A_ij - k_i_out * k_j_in / W] * delta(c_i, c_j)

which is zero for the single-cluster decomposition and lies in [-1, 1].  The
greedy engine repeatedly merges the cluster pair with the largest gain until
one cluster remains, then the recorded merge tree is cut top-down wherever
dividing a cluster into its children does not lose quality.

Everything here is deterministic: ties are broken by cluster identifier, and
all iteration happens in sorted order.
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .dedication import dedication_multilevel, dedication_simple
from .errors import DomainError, ParseError
from .graphs import DEFAULT_SEPARATOR, MemberGraph, WeightedDigraph, lift, normalize

#: Gains closer than this are treated as equal and resolved lexicographically.
TIE_TOLERANCE = 1e-12

#: Vertex-count ceiling for the exact partition-enumeration oracle.
BRUTE_FORCE_LIMIT = 10

_RECHECK_INTERVAL = 1024
_DRIFT_TOLERANCE = 1e-6

GraphInput = Union[MemberGraph, WeightedDigraph]


@dataclass(frozen=True, eq=True)
class Decomposition:
    """A partition of module identifiers into named, non-empty, disjoint clusters."""

    clusters: Mapping[str, frozenset[str]]
    universe: frozenset[str]

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for name, block in self.clusters.items():
            if not name:
                raise ValueError("cluster names must be non-empty")
            if not block:
                raise ValueError(f"cluster {name!r} is empty")
            if seen & block:
                raise ValueError(f"cluster {name!r} overlaps another cluster")
            seen |= block
        if seen != set(self.universe):
            raise ValueError("clusters do not partition the universe")

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[str]]) -> "Decomposition":
        """Name blocks C1..Ck ordered by their lexicographically smallest member."""
        ordered = sorted((frozenset(b) for b in blocks), key=min)
        clusters = {f"C{i}": block for i, block in enumerate(ordered, start=1)}
        universe = frozenset(x for block in ordered for x in block)
        return cls(clusters=clusters, universe=universe)

    @property
    def size(self) -> int:
        return len(self.universe)

    def blocks(self) -> list[frozenset[str]]:
        """Clusters in sorted-name order."""
        return [self.clusters[name] for name in sorted(self.clusters)]

    def as_partition(self) -> frozenset[frozenset[str]]:
        """The underlying partition, with cluster names forgotten."""
        return frozenset(self.clusters.values())

    def same_partition(self, other: "Decomposition") -> bool:
        return self.universe == other.universe and self.as_partition() == other.as_partition()

    def restricted_to(self, modules: Iterable[str]) -> "Decomposition":
        """Drop every module outside ``modules``; empty clusters disappear."""
        keep = frozenset(modules) & self.universe
        clusters = {
            name: block & keep for name, block in self.clusters.items() if block & keep
        }
        return Decomposition(clusters=clusters, universe=keep)


@dataclass(frozen=True)
class MergeRecord:
    """One greedy merge: ``left`` and ``right`` fold into ``into`` (= ``left``)."""

    left: str
    right: str
    into: str
    q_after: float
    gain: float


@dataclass(frozen=True)
class Dendrogram:
    """Binary merge tree over the graph's vertices, one record per merge.

    Cluster identifiers are vertex identifiers: a merged cluster inherits the
    smaller of its children's identifiers, so an id in a later record refers to
    the most recently produced cluster carrying it.
    """

    leaves: tuple[str, ...]
    merges: tuple[MergeRecord, ...]


@dataclass
class ClusterState:
    """Per-cluster aggregates used for incremental modularity gains.

    ``inter[i][j]`` is the summed weight of edges from cluster i to cluster j
    (including i == j); ``a_out``/``a_in`` are the summed vertex strengths.
    """

    a_out: dict[str, float]
    a_in: dict[str, float]
    inter: dict[str, dict[str, float]]
    total_weight: float

    @classmethod
    def from_decomposition(cls, graph: WeightedDigraph, decomposition: Decomposition) -> "ClusterState":
        _require_partition_of(graph, decomposition)
        total = graph.total_weight
        if total <= 0.0:
            raise DomainError("cluster aggregates need a graph with positive total weight")
        cluster_of = {
            vertex: name
            for name, block in decomposition.clusters.items()
            for vertex in block
        }
        inter: dict[str, dict[str, float]] = {name: {} for name in decomposition.clusters}
        for (src, dst), weight in sorted(graph.edges.items()):
            row = inter[cluster_of[src]]
            col = cluster_of[dst]
            row[col] = row.get(col, 0.0) + weight
        a_out = {
            name: math.fsum(graph.out_strength(v) for v in sorted(block))
            for name, block in decomposition.clusters.items()
        }
        a_in = {
            name: math.fsum(graph.in_strength(v) for v in sorted(block))
            for name, block in decomposition.clusters.items()
        }
        return cls(a_out=a_out, a_in=a_in, inter=inter, total_weight=total)


def _require_partition_of(graph: WeightedDigraph, decomposition: Decomposition) -> None:
    if decomposition.universe != graph.vertices:
        raise DomainError("decomposition does not partition the graph's vertex set")


def modularity(graph: WeightedDigraph, decomposition: Decomposition) -> float:
    """Directed weighted modularity of ``decomposition`` on ``graph``."""
    _require_partition_of(graph, decomposition)
    total = graph.total_weight
    if total <= 0.0:
        raise DomainError("modularity is undefined for an edgeless graph")
    cluster_of = {
        vertex: name for name, block in decomposition.clusters.items() for vertex in block
    }
    intra: dict[str, list[float]] = {name: [] for name in decomposition.clusters}
    for (src, dst), weight in sorted(graph.edges.items()):
        name = cluster_of[src]
        if name == cluster_of[dst]:
            intra[name].append(weight)
    terms = []
    for name in sorted(decomposition.clusters):
        block = decomposition.clusters[name]
        a_out = math.fsum(graph.out_strength(v) for v in sorted(block))
        a_in = math.fsum(graph.in_strength(v) for v in sorted(block))
        terms.append(math.fsum(intra[name]) / total - (a_out * a_in) / (total * total))
    return math.fsum(terms)


def merge_gain(state: ClusterState, first: str, second: str) -> float:
    """Exact modularity change from merging two clusters of ``state``."""
    if first == second:
        raise DomainError("cannot merge a cluster with itself")
    for name in (first, second):
        if name not in state.a_out:
            raise DomainError(f"unknown cluster {name!r}")
    total = state.total_weight
    e_fs = state.inter.get(first, {}).get(second, 0.0)
    e_sf = state.inter.get(second, {}).get(first, 0.0)
    expected = (
        state.a_out[first] * state.a_in[second] + state.a_out[second] * state.a_in[first]
    ) / total
    return (e_fs + e_sf - expected) / total


def agglomerate(graph: WeightedDigraph) -> Dendrogram:
    """Greedy agglomeration: repeatedly merge the pair with maximal gain.

    Candidate pairs are clusters connected by at least one edge; once none
    remain (disconnected components), every remaining pair is a candidate and
    the least-loss merge applies.  Ties within :data:`TIE_TOLERANCE` resolve to
    the lexicographically least ``(min id, max id)`` pair, and the merged
    cluster inherits the smaller id.  Expected cost on sparse graphs is
    O(|V| log^2 |V|) via lazily invalidated heaps.
    """
    if not graph.vertices:
        raise DomainError("cannot cluster an empty graph")
    total = graph.total_weight
    if total <= 0.0:
        raise DomainError("cannot cluster a graph with zero total weight")

    ids = sorted(graph.vertices)
    a_out = {v: graph.out_strength(v) for v in ids}
    a_in = {v: graph.in_strength(v) for v in ids}
    out_w: dict[str, dict[str, float]] = {v: {} for v in ids}
    in_w: dict[str, dict[str, float]] = {v: {} for v in ids}
    for (src, dst), weight in sorted(graph.edges.items()):
        out_w[src][dst] = weight
        in_w[dst][src] = weight
    intra = {v: 0.0 for v in ids}
    live = set(ids)

    def gain_of(first: str, second: str) -> float:
        linked = out_w[first].get(second, 0.0) + in_w[first].get(second, 0.0)
        expected = (a_out[first] * a_in[second] + a_out[second] * a_in[first]) / total
        return (linked - expected) / total

    gains: dict[tuple[str, str], float] = {}
    heap: list[tuple[float, str, str]] = []
    for first in ids:
        for second in out_w[first]:
            pair = (first, second) if first < second else (second, first)
            if pair not in gains:
                value = gain_of(*pair)
                gains[pair] = value
                heap.append((-value, pair[0], pair[1]))
    heapq.heapify(heap)

    def pop_best() -> tuple[str, str, float] | None:
        best = None
        while heap:
            negated, first, second = heapq.heappop(heap)
            if first in live and second in live and gains.get((first, second)) == -negated:
                best = (negated, first, second)
                break
        if best is None:
            return None
        best_value = -best[0]
        window = [best]
        seen = {(best[1], best[2])}
        while heap and -heap[0][0] >= best_value - TIE_TOLERANCE:
            negated, first, second = heapq.heappop(heap)
            pair = (first, second)
            if (
                first in live
                and second in live
                and gains.get(pair) == -negated
                and pair not in seen
            ):
                window.append((negated, first, second))
                seen.add(pair)
        choice = min(window, key=lambda item: (item[1], item[2]))
        for item in window:
            if item is not choice:
                heapq.heappush(heap, item)
        return choice[1], choice[2], -choice[0]

    def best_disconnected() -> tuple[str, str, float]:
        order = sorted(live)
        values: dict[tuple[str, str], float] = {}
        best_value = None
        for i, first in enumerate(order):
            for second in order[i + 1 :]:
                value = -(a_out[first] * a_in[second] + a_out[second] * a_in[first]) / (
                    total * total
                )
                values[(first, second)] = value
                if best_value is None or value > best_value:
                    best_value = value
        for pair in sorted(values):
            if values[pair] >= best_value - TIE_TOLERANCE:
                return pair[0], pair[1], values[pair]
        raise AssertionError("no candidate pair")

    q_current = math.fsum(-(a_out[v] * a_in[v]) / (total * total) for v in ids)
    merges: list[MergeRecord] = []
    while len(live) > 1:
        picked = pop_best()
        if picked is None:
            picked = best_disconnected()
        keep, gone, gain = picked

        gone_out = out_w.pop(gone)
        gone_in = in_w.pop(gone)
        keep_out = out_w[keep]
        keep_in = in_w[keep]
        intra[keep] += intra.pop(gone) + keep_out.pop(gone, 0.0) + keep_in.pop(gone, 0.0)
        for other, weight in gone_out.items():
            if other == keep:
                continue
            keep_out[other] = keep_out.get(other, 0.0) + weight
            row = in_w[other]
            row.pop(gone, None)
            row[keep] = row.get(keep, 0.0) + weight
        for other, weight in gone_in.items():
            if other == keep:
                continue
            keep_in[other] = keep_in.get(other, 0.0) + weight
            row = out_w[other]
            row.pop(gone, None)
            row[keep] = row.get(keep, 0.0) + weight
        a_out[keep] += a_out.pop(gone)
        a_in[keep] += a_in.pop(gone)
        live.discard(gone)

        for other in set(gone_out) | set(gone_in):
            if other == keep:
                continue
            gains.pop((gone, other) if gone < other else (other, gone), None)
        gains.pop((keep, gone) if keep < gone else (gone, keep), None)
        for other in sorted(set(keep_out) | set(keep_in)):
            pair = (keep, other) if keep < other else (other, keep)
            value = gain_of(keep, other)
            gains[pair] = value
            heapq.heappush(heap, (-value, pair[0], pair[1]))

        q_current += gain
        if len(merges) % _RECHECK_INTERVAL == _RECHECK_INTERVAL - 1:
            exact = math.fsum(
                intra[c] / total - (a_out[c] * a_in[c]) / (total * total)
                for c in sorted(live)
            )
            assert abs(exact - q_current) < _DRIFT_TOLERANCE
            q_current = exact
        merges.append(
            MergeRecord(left=keep, right=gone, into=keep, q_after=q_current, gain=gain)
        )
    return Dendrogram(leaves=tuple(ids), merges=tuple(merges))


@dataclass(frozen=True)
class _TreeNode:
    members: frozenset[str]
    left: "_TreeNode | None"
    right: "_TreeNode | None"
    merge_gain: float | None


def _build_tree(dendrogram: Dendrogram) -> _TreeNode:
    nodes: dict[str, _TreeNode] = {
        leaf: _TreeNode(frozenset((leaf,)), None, None, None) for leaf in dendrogram.leaves
    }
    for record in dendrogram.merges:
        left = nodes[record.left]
        right = nodes[record.right]
        nodes[record.into] = _TreeNode(
            left.members | right.members, left, right, record.gain
        )
    if dendrogram.merges:
        return nodes[dendrogram.merges[-1].into]
    if len(nodes) != 1:
        raise DomainError("dendrogram without merges must have a single leaf")
    return next(iter(nodes.values()))


def flat_cut(dendrogram: Dendrogram, graph: WeightedDigraph) -> Decomposition:
    """Optimal flat decomposition: divide top-down while the gain is non-negative.

    Starting from the root, a cluster is replaced by its two children whenever
    the division does not decrease modularity (a gain of exactly zero divides).
    The resulting modularity is therefore never below zero.
    """
    if frozenset(dendrogram.leaves) != graph.vertices:
        raise DomainError("dendrogram does not match the graph's vertex set")
    root = _build_tree(dendrogram)
    blocks: list[frozenset[str]] = []
    stack = [root]
    while stack:
        node = stack.pop()
        if node.merge_gain is not None and node.merge_gain <= 0.0:
            stack.append(node.left)
            stack.append(node.right)
        else:
            blocks.append(node.members)
    return Decomposition.from_blocks(blocks)


def prepare_graph(
    graph: GraphInput,
    algorithm: str = "sarf",
    separator: str = DEFAULT_SEPARATOR,
) -> WeightedDigraph:
    """Weighting stage of the pipeline.

    ``sarf`` applies the Dedication score (multi-level when member data is
    available, simple otherwise); ``newman`` lifts member graphs and forces
    every weight to one.
    """
    if algorithm == "sarf":
        if isinstance(graph, MemberGraph):
            return dedication_multilevel(normalize(graph, separator))
        return dedication_simple(graph)
    if algorithm == "newman":
        if isinstance(graph, MemberGraph):
            return lift(normalize(graph, separator)).with_unit_weights()
        return graph.with_unit_weights()
    raise DomainError(f"unknown algorithm {algorithm!r}")


def cluster_sarf(
    graph: GraphInput, separator: str = DEFAULT_SEPARATOR
) -> tuple[Decomposition, Dendrogram]:
    """Full pipeline: normalize, Dedication-weight, agglomerate, cut."""
    weighted = prepare_graph(graph, "sarf", separator)
    dendrogram = agglomerate(weighted)
    return flat_cut(dendrogram, weighted), dendrogram


def cluster_newman_unweighted(
    graph: GraphInput, separator: str = DEFAULT_SEPARATOR
) -> tuple[Decomposition, Dendrogram]:
    """Baseline pipeline: unit weights, no Dedication stage."""
    weighted = prepare_graph(graph, "newman", separator)
    dendrogram = agglomerate(weighted)
    return flat_cut(dendrogram, weighted), dendrogram


def iter_partitions(items: Sequence[str]) -> Iterator[list[list[str]]]:
    """All set partitions of ``items``; blocks ordered by their first element."""
    items = list(items)
    n = len(items)
    if n == 0:
        yield []
        return
    blocks: list[list[str]] = []

    def recurse(index: int) -> Iterator[list[list[str]]]:
        if index == n:
            yield [list(block) for block in blocks]
            return
        item = items[index]
        for block in blocks:
            block.append(item)
            yield from recurse(index + 1)
            block.pop()
        blocks.append([item])
        yield from recurse(index + 1)
        blocks.pop()

    yield from recurse(0)


def brute_force_best_partition(graph: WeightedDigraph) -> tuple[Decomposition, float]:
    """Exhaustive modularity maximization for graphs of at most 10 vertices.

    Test oracle: enumerates every set partition and returns the maximal one
    (lexicographically least on exact ties).
    """
    if len(graph.vertices) > BRUTE_FORCE_LIMIT:
        raise DomainError(
            f"refusing exhaustive search beyond {BRUTE_FORCE_LIMIT} vertices"
        )
    total = graph.total_weight
    if total <= 0.0:
        raise DomainError("modularity is undefined for an edgeless graph")
    vertices = sorted(graph.vertices)
    edge_items = sorted(graph.edges.items())
    k_out = {v: graph.out_strength(v) for v in vertices}
    k_in = {v: graph.in_strength(v) for v in vertices}

    best_q: float | None = None
    best_blocks: tuple[tuple[str, ...], ...] | None = None
    for blocks in iter_partitions(vertices):
        index = {v: i for i, block in enumerate(blocks) for v in block}
        intra = [0.0] * len(blocks)
        for (src, dst), weight in edge_items:
            i = index[src]
            if i == index[dst]:
                intra[i] += weight
        q = 0.0
        for i, block in enumerate(blocks):
            a_out = 0.0
            a_in = 0.0
            for v in block:
                a_out += k_out[v]
                a_in += k_in[v]
            q += intra[i] / total - (a_out * a_in) / (total * total)
        canonical = tuple(tuple(block) for block in blocks)
        if best_q is None or q > best_q or (q == best_q and canonical < best_blocks):
            best_q = q
            best_blocks = canonical
    decomposition = Decomposition.from_blocks(best_blocks)
    return decomposition, modularity(graph, decomposition)


def decomposition_to_json(decomposition: Decomposition) -> str:
    payload = {
        "universe_size": len(decomposition.universe),
        "clusters": {
            name: sorted(block) for name, block in decomposition.clusters.items()
        },
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def decomposition_from_json(text: str) -> Decomposition:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid decomposition JSON: {exc}") from None
    if not isinstance(payload, dict) or "clusters" not in payload:
        raise ParseError("decomposition JSON must be an object with a 'clusters' map")
    raw = payload["clusters"]
    if not isinstance(raw, dict):
        raise ParseError("'clusters' must map names to module lists")
    clusters: dict[str, frozenset[str]] = {}
    for name, modules in raw.items():
        if not isinstance(modules, list) or not all(isinstance(m, str) for m in modules):
            raise ParseError(f"cluster {name!r} must list module identifiers")
        clusters[name] = frozenset(modules)
    universe = frozenset(m for block in clusters.values() for m in block)
    declared = payload.get("universe_size")
    if declared is not None and declared != len(universe):
        raise ParseError(
            f"universe_size {declared} does not match the {len(universe)} modules listed"
        )
    try:
        return Decomposition(clusters=clusters, universe=universe)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def dendrogram_to_json(dendrogram: Dendrogram) -> str:
    payload = {
        "leaves": list(dendrogram.leaves),
        "merges": [
            {"left": m.left, "right": m.right, "into": m.into, "q_after": m.q_after}
            for m in dendrogram.merges
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
