"""Local motif clustering around seed nodes.

Given a graph and a seed node, find a cluster containing the seed whose
triangle (motif) conductance is low: few triangles straddle the cluster
boundary relative to the triangle mass inside. The search enumerates motifs
in a BFS ball around the seed, condenses everything else into one node, and
repeatedly 2-way-partitions an exact graph or hypergraph model of that local
motif structure, keeping the best scoring seed-side block. A motif-weighted
personalized PageRank baseline is included for benchmarking.
"""

from ._accel import NUMBA_ENABLED
from .appr import MotifWeightedGraph, appr_cluster, build_motif_graph, motif_conductance_of
from .ball import Ball, grow_ball, induced_closed_hood
from .driver import ClusterConfig, ClusterResult, enforce_consistency, find_cluster
from .graph import (
    Bipartition,
    Graph,
    GraphIntegrityError,
    GraphParseError,
    Hypergraph,
    cut_net,
    edge_cut,
    graph_from_arcs,
    load_graph,
    read_edgelist,
    read_metis,
    write_hmetis,
    write_metis,
)
from .labelprop import label_prop_refine
from .model import (
    Conductance,
    MotifModel,
    build_graph_model,
    build_hypergraph_model,
    build_model,
    dump_model,
    eval_motif_conductance,
    volume_assumption_holds,
)
from .partition import (
    CoarseLevel,
    PartitionError,
    PartitionerConfig,
    build_hierarchy,
    check_balance,
    partition_structure,
)
from .triangles import MotifCollection, enumerate_triangles

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "Bipartition",
    "ClusterConfig",
    "ClusterResult",
    "CoarseLevel",
    "Conductance",
    "Graph",
    "GraphIntegrityError",
    "GraphParseError",
    "Hypergraph",
    "MotifCollection",
    "MotifModel",
    "MotifWeightedGraph",
    "NUMBA_ENABLED",
    "PartitionError",
    "PartitionerConfig",
    "appr_cluster",
    "build_graph_model",
    "build_hierarchy",
    "build_hypergraph_model",
    "build_model",
    "build_motif_graph",
    "check_balance",
    "cut_net",
    "dump_model",
    "edge_cut",
    "enforce_consistency",
    "enumerate_triangles",
    "eval_motif_conductance",
    "find_cluster",
    "graph_from_arcs",
    "grow_ball",
    "induced_closed_hood",
    "label_prop_refine",
    "load_graph",
    "motif_conductance_of",
    "partition_structure",
    "read_edgelist",
    "read_metis",
    "volume_assumption_holds",
    "write_hmetis",
    "write_metis",
    "__version__",
]
