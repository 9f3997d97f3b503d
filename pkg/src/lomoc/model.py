"""Exact (hyper)graph models of the motif structure around the ball.

Both models contract everything outside S into a single node t and preserve
the local motif-conductance landscape exactly:

* graph model: for every motif, each pair of its (contracted) endpoints adds
  1 to the connecting edge weight. The weighted degree of each node is then
  twice its motif degree and any cut weight is twice the number of cut
  motifs, so cut/volume ratios equal motif conductance unchanged.
* hypergraph model: one net per motif with the motif's (contracted) nodes as
  pins; identical pin sets merge with summed weights. Cut-net weight equals
  the number of cut motifs and weighted pin degree equals motif degree.

Nodes carry true weights (1 per S node, c(S-bar) on t) for bookkeeping, but
the partitioner sees every node with weight 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .ball import Ball
from .graph import (
    Graph,
    Hypergraph,
    cut_net,
    edge_cut,
    graph_from_arcs,
    write_hmetis,
    write_metis,
)
from .triangles import MotifCollection


class Conductance(NamedTuple):
    """Motif conductance value; degenerate means the seed side had zero volume."""

    value: float
    degenerate: bool


DEGENERATE = Conductance(1.0, True)


@dataclass
class MotifModel:
    """Contracted model over the S nodes plus t (always the last node id).

    Exactly one of ``graph``/``hgraph`` is set, per ``kind``. ``globals_s[i]``
    is the parent-graph id of model node i (i < t). ``weighted_degree`` is
    d_omega per model node; ``true_node_weight`` holds 1 per S node and
    c(S-bar) on t.
    """

    kind: str
    graph: Graph | None
    hgraph: Hypergraph | None
    seed_local: int
    t_local: int
    globals_s: np.ndarray
    true_node_weight: np.ndarray
    weighted_degree: np.ndarray
    n_motifs: int
    no_motifs: bool

    @property
    def n_nodes(self) -> int:
        return self.t_local + 1

    def unit_node_weight(self) -> np.ndarray:
        return np.ones(self.n_nodes, dtype=np.int64)

    def cut_of(self, block: np.ndarray) -> int:
        if self.kind == "graph":
            return edge_cut(self.graph, block)
        return cut_net(self.hgraph, block)


def _contract_ids(ball: Ball) -> tuple[np.ndarray, np.ndarray, int, int]:
    """Map hood-local ids to model ids: S nodes keep rank order, the rest fold to t."""
    s_local = np.flatnonzero(ball.s_mask)
    n_s = len(s_local)
    t = n_s
    mod_of_hood = np.full(ball.hood.n, t, dtype=np.int64)
    mod_of_hood[s_local] = np.arange(n_s, dtype=np.int64)
    seed_local = int(np.searchsorted(s_local, ball.seed_hood))
    return mod_of_hood, s_local, seed_local, t


def _true_weights(ball: Ball, s_local: np.ndarray, t: int) -> np.ndarray:
    w = np.empty(t + 1, dtype=np.int64)
    w[:t] = ball.hood.node_weight[s_local]
    w[t] = ball.graph_total_weight - int(w[:t].sum())
    return w


def build_graph_model(ball: Ball, motifs: MotifCollection) -> MotifModel:
    mod_of_hood, s_local, seed_local, t = _contract_ids(ball)
    n = t + 1
    mapped = mod_of_hood[motifs.triples]  # (count, 3)
    # each motif contributes one unit per endpoint pair; pairs collapsing onto
    # (t, t) vanish, pairs sharing only t merge there with multiplicity
    pairs = np.concatenate([mapped[:, [0, 1]], mapped[:, [0, 2]], mapped[:, [1, 2]]])
    g = graph_from_arcs(n, pairs[:, 0], pairs[:, 1], merge="sum")
    wdeg = np.zeros(n, dtype=np.int64)
    src = np.repeat(np.arange(n, dtype=np.int64), np.diff(g.indptr))
    np.add.at(wdeg, src, g.edge_weight)
    return MotifModel(
        kind="graph",
        graph=g,
        hgraph=None,
        seed_local=seed_local,
        t_local=t,
        globals_s=ball.hood_globals[s_local],
        true_node_weight=_true_weights(ball, s_local, t),
        weighted_degree=wdeg,
        n_motifs=motifs.count,
        no_motifs=motifs.count == 0,
    )


def build_hypergraph_model(ball: Ball, motifs: MotifCollection) -> MotifModel:
    mod_of_hood, s_local, seed_local, t = _contract_ids(ball)
    n = t + 1
    mapped = np.sort(mod_of_hood[motifs.triples], axis=1)
    if len(mapped):
        # two corners outside S fold into a single t pin; t sorts last
        rows = mapped.copy()
        dup = rows[:, 1] == rows[:, 2]
        rows[dup, 2] = -1
        uniq, inverse = np.unique(rows, axis=0, return_inverse=True)
        w = np.bincount(inverse.reshape(-1), minlength=len(uniq)).astype(np.int64)
        sizes = 3 - (uniq[:, 2] == -1).astype(np.int64)
        flat = uniq.ravel()
        pins = flat[flat >= 0]
        net_indptr = np.concatenate(([0], np.cumsum(sizes)))
    else:
        pins = np.empty(0, dtype=np.int64)
        w = np.empty(0, dtype=np.int64)
        net_indptr = np.zeros(1, dtype=np.int64)
    h = Hypergraph(net_indptr, pins, w, np.ones(n, dtype=np.int64))
    wdeg = np.zeros(n, dtype=np.int64)
    if len(pins):
        np.add.at(wdeg, pins, np.repeat(w, np.diff(net_indptr)))
    return MotifModel(
        kind="hypergraph",
        graph=None,
        hgraph=h,
        seed_local=seed_local,
        t_local=t,
        globals_s=ball.hood_globals[s_local],
        true_node_weight=_true_weights(ball, s_local, t),
        weighted_degree=wdeg,
        n_motifs=motifs.count,
        no_motifs=motifs.count == 0,
    )


def build_model(ball: Ball, motifs: MotifCollection, kind: str) -> MotifModel:
    if kind == "graph":
        return build_graph_model(ball, motifs)
    if kind == "hypergraph":
        return build_hypergraph_model(ball, motifs)
    raise ValueError(f"unknown model kind {kind!r}")


def eval_motif_conductance(model: MotifModel, block: np.ndarray) -> Conductance:
    """Motif conductance of the seed-side block, straight off the model.

    For the graph model both cut and volume are twice their motif counts; for
    the hypergraph model both equal the motif counts. Either way the ratio is
    |cut motifs| / d_mu(C). Zero seed-side volume is degenerate and pins the
    value to the 1.0 sentinel.
    """
    cmask = block == block[model.seed_local]
    vol = int(model.weighted_degree[cmask].sum())
    if vol == 0:
        return DEGENERATE
    return Conductance(model.cut_of(block) / vol, False)


def volume_assumption_holds(g: Graph, ball: Ball) -> bool:
    """True when the ball's motif volume does not exceed its complement's.

    Dividing a model cut by the seed-side volume matches the min-side
    definition of motif conductance exactly when this holds; local clusters
    around a seed are far below half the graph's motif mass in practice.
    """
    from .triangles import enumerate_triangles

    all_motifs = enumerate_triangles(g, np.ones(g.n, dtype=bool))
    vol_s = int(all_motifs.motif_degree[ball.members_global()].sum())
    return 2 * vol_s <= int(all_motifs.motif_degree.sum())


def dump_model(model: MotifModel, path: str) -> None:
    """Write the model with its true node weights, for offline inspection."""
    if model.kind == "graph":
        g = model.graph
        write_metis(Graph(g.indptr, g.indices, g.edge_weight, model.true_node_weight), path)
    else:
        h = model.hgraph
        write_hmetis(
            Hypergraph(h.net_indptr, h.pins, h.net_weight, model.true_node_weight), path
        )
