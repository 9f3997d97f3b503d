"""Top-level local clustering search.

For each ball repetition i (BFS depth i+1 by default), enumerate the motifs
touching the ball, build the chosen model, and run beta partition repetitions
with the imbalance allowance drawn uniformly per repetition. Every candidate
partition is made consistent (seed and contraction node in different blocks),
optionally polished by label propagation (graph model), and scored by exact
motif conductance; the best scoring seed-side block wins.

Each (ball, partition) repetition gets its own child RNG stream, so results
for a fixed seed value are reproducible regardless of timing.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .ball import grow_ball
from .graph import Bipartition, Graph
from .labelprop import label_prop_refine
from .model import MotifModel, build_model, eval_motif_conductance
from .partition import PartitionerConfig, partition_structure
from .triangles import enumerate_triangles

SENTINEL_PHI = 1.0


@dataclass
class ClusterConfig:
    model: str = "graph"  # "graph" or "hypergraph"
    alpha: int = 3  # ball repetitions
    beta: int = 80  # partition repetitions per ball
    eps_lo: float = 0.05
    eps_hi: float = 0.90
    lp_rounds: int = 3
    min_ball_size: int = 100  # last repetition grows whole layers up to this; 0 disables
    layers: tuple[int, ...] | None = None  # per-repetition BFS depth override
    time_limit: float = 3600.0  # seconds
    rng_seed: int = 0
    partitioner: PartitionerConfig = field(default_factory=PartitionerConfig)

    def layers_for(self, rep: int) -> int:
        if self.layers:
            return int(self.layers[min(rep, len(self.layers) - 1)])
        return rep + 1


@dataclass
class ClusterResult:
    """Best cluster found. ``cluster`` holds graph-internal node ids, sorted."""

    cluster: np.ndarray
    phi: float
    degenerate: bool
    model_kind: str
    balls_grown: int
    partitions_tried: int
    best_repetition: tuple[int, int] | None
    timed_out: bool
    timings: dict[str, float]

    @property
    def size(self) -> int:
        return len(self.cluster)


def enforce_consistency(model: MotifModel, p: Bipartition) -> Bipartition:
    """Make the seed and t sit in different blocks.

    A partition that lumps them together describes the complement cluster; the
    cheapest consistent representative flips the seed alone. Balance is a
    search-time device and is deliberately not rechecked here.
    """
    if p.block[model.seed_local] != p.block[model.t_local]:
        return p
    block = p.block.copy()
    block[model.seed_local] = 1 - int(block[model.seed_local])
    return Bipartition(block, p.epsilon, model.cut_of(block))


def _seed_block_members(model: MotifModel, block: np.ndarray) -> np.ndarray:
    same = np.flatnonzero(block == block[model.seed_local])
    return model.globals_s[same[same < model.t_local]]


def _degenerate_result(g: Graph, seed: int, kind: str, balls: int, parts: int,
                       timed_out: bool, timings: dict[str, float]) -> ClusterResult:
    return ClusterResult(
        cluster=np.array([seed], dtype=np.int64),
        phi=SENTINEL_PHI,
        degenerate=True,
        model_kind=kind,
        balls_grown=balls,
        partitions_tried=parts,
        best_repetition=None,
        timed_out=timed_out,
        timings=timings,
    )


def find_cluster(g: Graph, seed: int, cfg: ClusterConfig | None = None) -> ClusterResult:
    """Search for a low motif-conductance cluster containing ``seed``."""
    cfg = cfg or ClusterConfig()
    if cfg.model not in ("graph", "hypergraph"):
        raise ValueError(f"unknown model kind {cfg.model!r}")
    if not (0 <= seed < g.n):
        raise ValueError(f"seed {seed} out of range for graph with {g.n} nodes")
    t0 = time.perf_counter()
    timings = {"ball_ms": 0.0, "enum_ms": 0.0, "model_ms": 0.0,
               "partition_ms": 0.0, "lp_ms": 0.0, "total_ms": 0.0}
    best_phi = None
    best_cluster = None
    best_rep = None
    balls = 0
    parts = 0
    timed_out = False

    def out_of_time() -> bool:
        return (time.perf_counter() - t0) > cfg.time_limit

    for i in range(cfg.alpha):
        if out_of_time():
            timed_out = True
            break
        min_size = cfg.min_ball_size if i == cfg.alpha - 1 else 0
        tb = time.perf_counter()
        ball = grow_ball(g, seed, cfg.layers_for(i), min_size)
        balls += 1
        te = time.perf_counter()
        timings["ball_ms"] += (te - tb) * 1e3
        motifs = enumerate_triangles(ball.hood, ball.s_mask)
        tm = time.perf_counter()
        timings["enum_ms"] += (tm - te) * 1e3
        if i == 0 and motifs.motif_degree[ball.seed_hood] == 0:
            # every motif through the seed lives inside its first ball's hood,
            # so a zero here is global: the seed belongs to no motif at all
            timings["total_ms"] = (time.perf_counter() - t0) * 1e3
            return _degenerate_result(g, seed, cfg.model, balls, parts, False, timings)
        if ball.frontier_complete and motifs.count >= 1:
            # the ball is the seed's whole component: nothing it contains can
            # be cut, so the component itself is a perfect cluster
            timings["total_ms"] = (time.perf_counter() - t0) * 1e3
            return ClusterResult(
                cluster=ball.members_global(),
                phi=0.0,
                degenerate=False,
                model_kind=cfg.model,
                balls_grown=balls,
                partitions_tried=parts,
                best_repetition=(i, -1),
                timed_out=False,
                timings=timings,
            )
        model = build_model(ball, motifs, cfg.model)
        timings["model_ms"] += (time.perf_counter() - tm) * 1e3
        if model.no_motifs:
            continue
        for j in range(cfg.beta):
            if out_of_time():
                timed_out = True
                break
            rng = np.random.default_rng(
                np.random.SeedSequence(entropy=cfg.rng_seed, spawn_key=(i, j))
            )
            eps = float(rng.uniform(cfg.eps_lo, cfg.eps_hi))
            tp = time.perf_counter()
            p = partition_structure(
                model.graph if model.kind == "graph" else model.hgraph,
                eps, rng, model.unit_node_weight(), cfg.partitioner,
            )
            p = enforce_consistency(model, p)
            tq = time.perf_counter()
            timings["partition_ms"] += (tq - tp) * 1e3
            if model.kind == "graph" and cfg.lp_rounds > 0:
                p, _ = label_prop_refine(model, p, rng, cfg.lp_rounds)
                timings["lp_ms"] += (time.perf_counter() - tq) * 1e3
            parts += 1
            cond = eval_motif_conductance(model, p.block)
            if cond.degenerate:
                continue
            if best_phi is None or cond.value < best_phi:
                best_phi = cond.value
                best_cluster = _seed_block_members(model, p.block)
                best_rep = (i, j)
        if timed_out:
            break
    timings["total_ms"] = (time.perf_counter() - t0) * 1e3
    if best_phi is None:
        return _degenerate_result(g, seed, cfg.model, balls, parts, timed_out, timings)
    return ClusterResult(
        cluster=best_cluster,
        phi=best_phi,
        degenerate=False,
        model_kind=cfg.model,
        balls_grown=balls,
        partitions_tried=parts,
        best_repetition=best_rep,
        timed_out=timed_out,
        timings=timings,
    )
