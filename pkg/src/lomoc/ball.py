"""Seed-ball selection: fixed-depth BFS with whole-layer growth.

The cluster search never looks at the full graph. It operates on a ball S of
BFS layers around the seed, together with the induced subgraph on the closed
neighborhood N[S] (motifs can straddle the ball boundary, so the hood keeps
one extra ring of nodes).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._accel import maybe_njit
from .graph import Graph, concat_ranges


@dataclass
class Ball:
    """A BFS ball S plus the induced closed-neighborhood subgraph.

    ``hood`` is the induced subgraph on N[S] with local ids 0..h-1;
    ``hood_globals[i]`` is the parent-graph id of hood node i. ``s_mask`` marks
    which hood nodes belong to S. ``frontier_complete`` is True when S has no
    neighbors outside itself, i.e. the ball swallowed its whole component.
    """

    hood: Graph
    hood_globals: np.ndarray
    s_mask: np.ndarray
    seed_hood: int
    layers_used: int
    frontier_complete: bool
    graph_total_weight: int

    @property
    def size(self) -> int:
        return int(self.s_mask.sum())

    def members_global(self) -> np.ndarray:
        return self.hood_globals[self.s_mask]


@maybe_njit
def _bfs_layers(indptr, indices, source, layers, min_size):
    """BFS from source, whole layers only.

    Grows ``layers`` layers, then keeps appending whole layers while the ball
    holds fewer than ``min_size`` nodes and unvisited neighbors remain.
    Returns (members, layers_used, frontier_complete).
    """
    n = indptr.shape[0] - 1
    dist = np.full(n, -1, dtype=np.int64)
    order = np.empty(n, dtype=np.int64)
    dist[source] = 0
    order[0] = source
    size = 1
    level = 0
    level_start = 0
    while True:
        next_start = size
        for i in range(level_start, next_start):
            v = order[i]
            for j in range(indptr[v], indptr[v + 1]):
                w = indices[j]
                if dist[w] < 0:
                    dist[w] = level + 1
                    order[size] = w
                    size += 1
        if size == next_start:
            # frontier exhausted: the ball is a full connected component
            return order[:size].copy(), level, True
        level += 1
        level_start = next_start
        if level >= layers and size >= min_size:
            break
    # one cheap look ahead: complete iff the last layer has no unvisited neighbor
    complete = True
    for i in range(level_start, size):
        v = order[i]
        for j in range(indptr[v], indptr[v + 1]):
            if dist[indices[j]] < 0:
                complete = False
                break
        if not complete:
            break
    return order[:size].copy(), level, complete


def induced_closed_hood(g: Graph, members: np.ndarray) -> tuple[Graph, np.ndarray]:
    """Induced subgraph on members plus all their neighbors.

    ``members`` must be sorted ascending. Returns (subgraph, globals) where
    globals[i] is the parent id of local node i, ascending.
    """
    deg = np.diff(g.indptr)
    nbrs = concat_ranges(g.indices, g.indptr[members], deg[members])
    hood = np.unique(np.concatenate([members, nbrs]))
    h = len(hood)
    lens = deg[hood]
    src_local = np.repeat(np.arange(h, dtype=np.int64), lens)
    dst_global = concat_ranges(g.indices, g.indptr[hood], lens)
    w_flat = concat_ranges(g.edge_weight, g.indptr[hood], lens)
    pos = np.searchsorted(hood, dst_global)
    pos_c = np.minimum(pos, h - 1)
    in_hood = hood[pos_c] == dst_global
    # source-major CSR order is preserved: hood ascending, neighbor lists sorted
    dst_local = pos_c[in_hood]
    indptr = np.zeros(h + 1, dtype=np.int64)
    np.add.at(indptr, src_local[in_hood] + 1, 1)
    indptr = np.cumsum(indptr)
    sub = Graph(indptr, dst_local, w_flat[in_hood], g.node_weight[hood], g.orig_ids[hood])
    return sub, hood


def grow_ball(g: Graph, seed: int, layers: int, min_size: int = 100) -> Ball:
    """Grow the BFS ball for one repetition.

    ``layers`` is the fixed BFS depth for this repetition; ``min_size`` (0
    disables it) forces extra whole layers until the ball is at least that
    big or the component is exhausted.
    """
    if not (0 <= seed < g.n):
        raise ValueError(f"seed {seed} out of range for graph with {g.n} nodes")
    if layers < 1:
        raise ValueError("layers must be at least 1")
    members, layers_used, complete = _bfs_layers(
        g.indptr, g.indices, np.int64(seed), np.int64(layers), np.int64(min_size)
    )
    members = np.sort(members)
    hood_graph, hood = induced_closed_hood(g, members)
    s_mask = np.zeros(len(hood), dtype=bool)
    s_mask[np.searchsorted(hood, members)] = True
    seed_hood = int(np.searchsorted(hood, seed))
    return Ball(
        hood=hood_graph,
        hood_globals=hood,
        s_mask=s_mask,
        seed_hood=seed_hood,
        layers_used=int(layers_used),
        frontier_complete=bool(complete),
        graph_total_weight=g.total_node_weight(),
    )
