"""Triangle enumeration on the ball's closed neighborhood.

Classic forward enumeration: process nodes by descending degree (ties by id),
mark each node's later-ranked neighbors, then scan neighbors-of-neighbors for
marks. Each triangle is reported exactly once, as a sorted id triple. Only
triangles with at least one corner inside S are kept; those are exactly the
motifs whose membership or cut status the local search can change.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._accel import maybe_njit
from .graph import Graph


@dataclass
class MotifCollection:
    """Triangles touching S, plus per-node motif degrees over the hood.

    ``triples`` has shape (count, 3) with each row sorted ascending;
    ``motif_degree[v]`` counts kept triangles containing hood node v.
    """

    triples: np.ndarray
    motif_degree: np.ndarray

    @property
    def count(self) -> int:
        return len(self.triples)

    def degree_of_set(self, nodes: np.ndarray) -> int:
        return int(self.motif_degree[nodes].sum())


@maybe_njit
def _forward_triangles(indptr, indices, rank, in_s):
    n = indptr.shape[0] - 1
    node_at = np.empty(n, dtype=np.int64)
    for v in range(n):
        node_at[rank[v]] = v
    marked = np.full(n, -1, dtype=np.int64)
    deg_mu = np.zeros(n, dtype=np.int64)
    cap = 1024
    tri = np.empty((cap, 3), dtype=np.int64)
    count = 0
    for r in range(n):
        v = node_at[r]
        for j in range(indptr[v], indptr[v + 1]):
            u = indices[j]
            if rank[u] > r:
                marked[u] = v
        for j in range(indptr[v], indptr[v + 1]):
            u = indices[j]
            if rank[u] <= r:
                continue
            ru = rank[u]
            for k in range(indptr[u], indptr[u + 1]):
                w = indices[k]
                if rank[w] > ru and marked[w] == v:
                    if not (in_s[v] or in_s[u] or in_s[w]):
                        continue
                    if count == cap:
                        cap *= 2
                        bigger = np.empty((cap, 3), dtype=np.int64)
                        bigger[:count] = tri[:count]
                        tri = bigger
                    a, b, c = v, u, w
                    if a > b:
                        a, b = b, a
                    if b > c:
                        b, c = c, b
                    if a > b:
                        a, b = b, a
                    tri[count, 0] = a
                    tri[count, 1] = b
                    tri[count, 2] = c
                    deg_mu[a] += 1
                    deg_mu[b] += 1
                    deg_mu[c] += 1
                    count += 1
    return tri[:count].copy(), deg_mu


def enumerate_triangles(hood: Graph, s_mask: np.ndarray) -> MotifCollection:
    """All triangles of ``hood`` with at least one corner where s_mask is True."""
    n = hood.n
    deg = hood.degrees()
    # rank: descending degree, ties by ascending id
    by_key = np.lexsort((np.arange(n, dtype=np.int64), -deg))
    rank = np.empty(n, dtype=np.int64)
    rank[by_key] = np.arange(n, dtype=np.int64)
    triples, deg_mu = _forward_triangles(hood.indptr, hood.indices, rank, np.ascontiguousarray(s_mask))
    return MotifCollection(triples=triples, motif_degree=deg_mu)
