"""Decomposition comparison measures: the MoJo family, NED, stability, occupancy,
and the package-derived reference decomposition."""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .clustering import Decomposition, iter_partitions
from .errors import DomainError
from .graphs import PackageMap

#: Universe ceiling for the breadth-first move/join oracle.
MNO_BRUTE_FORCE_LIMIT = 8

#: Universe ceiling for the exhaustive worst-case-partition oracle.
MAX_MNO_BRUTE_FORCE_LIMIT = 10

#: Clusters at most this large fold into their parent package.
DEFAULT_MERGE_THRESHOLD = 5

#: Occupancy above this marks a package structure as a poor reference.
OCCUPANCY_GUIDELINE = 40.0

MEASURES = ("mno", "mojo", "mojofm", "mojosim", "ned")


def _require_shared_universe(c: Decomposition, a: Decomposition) -> None:
    if c.universe != a.universe:
        raise DomainError(
            "decompositions cover different universes; restrict them to the shared "
            "modules before comparing"
        )
    if not c.universe:
        raise DomainError("cannot compare empty decompositions")


def _max_matching(candidates: Sequence[Sequence[int]]) -> int:
    """Maximum bipartite matching size (augmenting paths)."""
    matched_to: dict[int, int] = {}

    def augment(left: int, banned: set[int]) -> bool:
        for right in candidates[left]:
            if right in banned:
                continue
            banned.add(right)
            if right not in matched_to or augment(matched_to[right], banned):
                matched_to[right] = left
                return True
        return False

    size = 0
    for left in range(len(candidates)):
        if augment(left, set()):
            size += 1
    return size


def _mno_blocks(blocks: Iterable[Iterable[str]], owner: Mapping[str, int], n: int) -> int:
    """Move/join count from raw blocks into the partition described by ``owner``.

    Each source block is tagged with a target cluster of maximal intersection;
    modules outside the tagged cluster move, blocks sharing a tag join.  The
    number of distinct tags is maximized by bipartite matching, which yields
    the exact minimum.
    """
    kept = 0
    candidates: list[list[int]] = []
    for block in blocks:
        counts = Counter(owner[x] for x in block)
        top = max(counts.values())
        kept += top
        candidates.append(sorted(i for i, c in counts.items() if c == top))
    return n - kept + len(candidates) - _max_matching(candidates)


def mno(c: Decomposition, a: Decomposition) -> int:
    """Minimum number of move and join operations transforming ``c`` into ``a``."""
    _require_shared_universe(c, a)
    owner = {
        x: i for i, name in enumerate(sorted(a.clusters)) for x in a.clusters[name]
    }
    blocks = [c.clusters[name] for name in sorted(c.clusters)]
    return _mno_blocks(blocks, owner, len(c.universe))


def mno_brute_force(c: Decomposition, a: Decomposition) -> int:
    """Breadth-first search over move/join operations; exact but tiny inputs only."""
    _require_shared_universe(c, a)
    if len(c.universe) > MNO_BRUTE_FORCE_LIMIT:
        raise DomainError(
            f"refusing brute-force search beyond {MNO_BRUTE_FORCE_LIMIT} modules"
        )
    start = c.as_partition()
    target = a.as_partition()
    if start == target:
        return 0
    seen = {start}
    frontier: deque[tuple[frozenset[frozenset[str]], int]] = deque([(start, 0)])
    while frontier:
        state, depth = frontier.popleft()
        for successor in _move_join_successors(state):
            if successor in seen:
                continue
            if successor == target:
                return depth + 1
            seen.add(successor)
            frontier.append((successor, depth + 1))
    raise AssertionError("every partition is reachable by moves and joins")


def _move_join_successors(state: frozenset[frozenset[str]]):
    blocks = list(state)
    for i in range(len(blocks)):
        for j in range(i + 1, len(blocks)):
            yield (state - {blocks[i], blocks[j]}) | {blocks[i] | blocks[j]}
    for block in blocks:
        for x in block:
            remainder = block - {x}
            for other in blocks:
                if other is block:
                    continue
                moved = (state - {block, other}) | {other | {x}}
                if remainder:
                    moved |= {remainder}
                else:
                    moved -= {block}
                yield moved
            if remainder:
                yield (state - {block}) | {remainder, frozenset((x,))}


def mojo(c: Decomposition, a: Decomposition) -> int:
    """Symmetric move/join distance: the cheaper of the two directions."""
    return min(mno(c, a), mno(a, c))


def mojosim(c: Decomposition, a: Decomposition) -> float:
    """Normalized similarity: ``(1 - MoJo/N) * 100``; symmetric."""
    _require_shared_universe(c, a)
    return (1.0 - mojo(c, a) / len(c.universe)) * 100.0


def max_mno(a: Decomposition) -> int:
    """Worst-case move/join count into ``a`` over every source partition.

    Depends only on the multiset of cluster sizes: sorting sizes ascending and
    greedily matching each cluster that can still contribute a distinct tag
    gives the irreducible part; everything else must move or join.  Validated
    exhaustively against :func:`max_mno_brute_force`.
    """
    if not a.universe:
        raise DomainError("cannot score an empty decomposition")
    matched = 0
    for size in sorted(len(block) for block in a.clusters.values()):
        if size > matched:
            matched += 1
    return len(a.universe) - matched


def max_mno_brute_force(a: Decomposition) -> int:
    """Exhaustive worst-case search over all partitions of the universe."""
    if not a.universe:
        raise DomainError("cannot score an empty decomposition")
    if len(a.universe) > MAX_MNO_BRUTE_FORCE_LIMIT:
        raise DomainError(
            f"refusing exhaustive enumeration beyond {MAX_MNO_BRUTE_FORCE_LIMIT} modules"
        )
    owner = {
        x: i for i, name in enumerate(sorted(a.clusters)) for x in a.clusters[name]
    }
    n = len(a.universe)
    worst = 0
    for blocks in iter_partitions(sorted(a.universe)):
        worst = max(worst, _mno_blocks(blocks, owner, n))
    return worst


def mojofm(c: Decomposition, a: Decomposition) -> float:
    """Effectiveness measure: ``(1 - mno(c, a) / max_mno(a)) * 100``; one-directional."""
    _require_shared_universe(c, a)
    bound = max_mno(a)
    if bound == 0:
        raise DomainError("MoJoFM is undefined when every partition equals the target")
    return (1.0 - mno(c, a) / bound) * 100.0


def ned(c: Decomposition) -> float:
    """Fraction of modules in reasonably sized clusters (5 up to max(20, N/5))."""
    n = len(c.universe)
    if n < 1:
        raise DomainError("NED needs a non-empty decomposition")
    upper = max(20.0, n / 5.0)
    kept = sum(len(block) for block in c.clusters.values() if 5 <= len(block) <= upper)
    return kept / n


@dataclass(frozen=True)
class VersionSeries:
    """Ordered decompositions of consecutive versions of one system."""

    entries: tuple[tuple[str, Decomposition], ...]

    def __post_init__(self) -> None:
        labels = [label for label, _ in self.entries]
        if len(set(labels)) != len(labels):
            raise ValueError("version labels must be unique")


def stability(series: VersionSeries) -> list[float]:
    """MoJoSim between consecutive versions, restricted to their shared modules."""
    if len(series.entries) < 2:
        raise DomainError("stability needs at least two versions")
    values = []
    for (label_a, deco_a), (label_b, deco_b) in zip(series.entries, series.entries[1:]):
        shared = deco_a.universe & deco_b.universe
        if not shared:
            raise DomainError(f"versions {label_a!r} and {label_b!r} share no modules")
        values.append(mojosim(deco_a.restricted_to(shared), deco_b.restricted_to(shared)))
    return values


def occupancy(package_map: PackageMap) -> float:
    """Percent of modules held by the most populous package."""
    groups = package_map.packages()
    if not groups:
        raise DomainError("occupancy needs a non-empty package map")
    total = len(package_map.assignment)
    largest = max(len(mods) for mods in groups.values())
    return 100.0 * largest / total


def auth_decomposition(
    package_map: PackageMap, threshold: int = DEFAULT_MERGE_THRESHOLD
) -> Decomposition:
    """Reference decomposition derived from the package hierarchy.

    Every package starts as a cluster; while a cluster of at most ``threshold``
    modules has a parent package (created when absent), it folds into the
    parent.  Deepest paths merge first, lexicographic within a depth, iterating
    to a fixpoint; root-level clusters never fold.
    """
    if threshold < 0:
        raise DomainError("threshold must be non-negative")
    clusters: dict[str, set[str]] = {
        path: set(mods) for path, mods in package_map.packages().items()
    }
    if not clusters:
        raise DomainError("cannot derive a decomposition from an empty package map")
    while True:
        mergeable = [
            path
            for path, mods in clusters.items()
            if len(mods) <= threshold and "." in path
        ]
        if not mergeable:
            break
        mergeable.sort(key=lambda path: (-path.count("."), path))
        path = mergeable[0]
        parent = path.rsplit(".", 1)[0]
        clusters.setdefault(parent, set()).update(clusters.pop(path))
    return Decomposition(
        clusters={path: frozenset(mods) for path, mods in clusters.items()},
        universe=frozenset(package_map.assignment),
    )


@dataclass(frozen=True)
class MetricReport:
    """Computed measure values together with the operands' cardinalities."""

    values: Mapping[str, float | int]
    n: int
    k_computed: int | None = None
    k_authoritative: int | None = None
    mno_ops: int | None = None
    n_maxops: int | None = None
    restricted: bool = False

    def to_json_dict(self) -> dict:
        payload: dict[str, object] = {"n": self.n}
        if self.k_computed is not None:
            payload["k"] = self.k_computed
        if self.k_authoritative is not None:
            payload["k_a"] = self.k_authoritative
        if self.mno_ops is not None:
            payload["mno"] = self.mno_ops
        if self.n_maxops is not None:
            payload["n_maxops"] = self.n_maxops
        if self.restricted:
            payload["restricted_to_shared_universe"] = True
        payload.update(self.values)
        return payload


def evaluate(
    computed: Decomposition,
    authoritative: Decomposition,
    measures: Sequence[str] = ("mojofm", "mojosim", "ned"),
    restrict: bool = False,
) -> MetricReport:
    """Score ``computed`` against ``authoritative`` with the requested measures."""
    unknown = [m for m in measures if m not in MEASURES]
    if unknown:
        raise DomainError(f"unknown measures: {', '.join(sorted(unknown))}")
    restricted = False
    if restrict and computed.universe != authoritative.universe:
        shared = computed.universe & authoritative.universe
        if not shared:
            raise DomainError("the decompositions share no modules")
        computed = computed.restricted_to(shared)
        authoritative = authoritative.restricted_to(shared)
        restricted = True
    _require_shared_universe(computed, authoritative)

    values: dict[str, float | int] = {}
    mno_ops = mno(computed, authoritative) if {"mno", "mojofm"} & set(measures) else None
    bound = max_mno(authoritative) if "mojofm" in measures else None
    for measure in measures:
        if measure == "mno":
            values["mno"] = mno_ops
        elif measure == "mojo":
            values["mojo"] = mojo(computed, authoritative)
        elif measure == "mojofm":
            if bound == 0:
                raise DomainError(
                    "MoJoFM is undefined when every partition equals the target"
                )
            values["mojofm"] = (1.0 - mno_ops / bound) * 100.0
        elif measure == "mojosim":
            values["mojosim"] = mojosim(computed, authoritative)
        elif measure == "ned":
            values["ned"] = ned(computed)
    return MetricReport(
        values=values,
        n=len(computed.universe),
        k_computed=len(computed.clusters),
        k_authoritative=len(authoritative.clusters),
        mno_ops=mno_ops,
        n_maxops=bound,
        restricted=restricted,
    )


def average(values: Sequence[float]) -> float:
    if not values:
        raise DomainError("cannot average an empty list")
    return math.fsum(values) / len(values)
