"""sarfkit: dependency-graph clustering by Dedication-weighted directed
modularity maximization, plus the MoJo-family evaluation measures."""

from .clustering import (
    ClusterState,
    Decomposition,
    Dendrogram,
    MergeRecord,
    agglomerate,
    brute_force_best_partition,
    cluster_newman_unweighted,
    cluster_sarf,
    decomposition_from_json,
    decomposition_to_json,
    dendrogram_to_json,
    flat_cut,
    merge_gain,
    modularity,
    prepare_graph,
)
from .dedication import (
    DedicationTerms,
    dedication_multilevel,
    dedication_simple,
    dedication_terms,
)
from .errors import DomainError, NormalizationError, ParseError, SarfError
from .graphs import (
    VIRTUAL_MEMBER,
    MemberGraph,
    PackageMap,
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
from .metrics import (
    MetricReport,
    VersionSeries,
    auth_decomposition,
    evaluate,
    max_mno,
    max_mno_brute_force,
    mno,
    mno_brute_force,
    mojo,
    mojofm,
    mojosim,
    ned,
    occupancy,
    stability,
)

__version__ = "0.1.0"

__all__ = [
    "ClusterState",
    "Decomposition",
    "DedicationTerms",
    "Dendrogram",
    "DomainError",
    "MemberGraph",
    "MergeRecord",
    "MetricReport",
    "NormalizationError",
    "PackageMap",
    "ParseError",
    "SarfError",
    "VIRTUAL_MEMBER",
    "VersionSeries",
    "WeightedDigraph",
    "agglomerate",
    "auth_decomposition",
    "brute_force_best_partition",
    "cluster_newman_unweighted",
    "cluster_sarf",
    "decomposition_from_json",
    "decomposition_to_json",
    "dedication_multilevel",
    "dedication_simple",
    "dedication_terms",
    "dendrogram_to_json",
    "evaluate",
    "flat_cut",
    "lift",
    "max_mno",
    "max_mno_brute_force",
    "merge_gain",
    "mno",
    "mno_brute_force",
    "modularity",
    "mojo",
    "mojofm",
    "mojosim",
    "ned",
    "normalize",
    "occupancy",
    "parse_class_graph",
    "parse_member_graph",
    "parse_package_map",
    "prepare_graph",
    "stability",
    "write_class_graph",
    "write_member_graph",
    "write_package_map",
]
