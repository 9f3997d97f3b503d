"""Built-in multilevel 2-way partitioner for graphs and hypergraphs.

Three phases: coarsen by matching until the instance is small, split the
coarsest level by repeated region growing (with a largest-first fallback),
then project back level by level with Fiduccia-Mattheyses refinement at each
step. Balance is enforced everywhere: both blocks stay nonempty and no block
exceeds (1+epsilon) times half the total node weight, rounded up.

All randomness comes from the caller's Generator (visit orders, start nodes),
so a fixed seed reproduces the partition bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from ._accel import maybe_njit
from .graph import (
    Bipartition,
    Graph,
    Hypergraph,
    concat_ranges,
    cut_net,
    edge_cut,
    graph_from_arcs,
)

Structure = Union[Graph, Hypergraph]


class PartitionError(RuntimeError):
    """No balanced nonempty split exists (or none was found at any level)."""


@dataclass
class PartitionerConfig:
    coarsening_limit: int = 60  # stop coarsening at this many nodes
    min_shrink: float = 0.05  # or when a round shrinks the node count less than this
    init_tries: int = 10
    max_fm_passes: int = 64
    weight_cap_divisor: int = 8  # coarse nodes may not exceed total/divisor


@dataclass
class CoarseLevel:
    """One level of the hierarchy; fine_to_coarse maps the previous (finer) level here."""

    structure: Structure
    node_weight: np.ndarray
    fine_to_coarse: Optional[np.ndarray]


def _l_max(total: int, epsilon: float) -> int:
    return int((1.0 + epsilon) * ((total + 1) // 2) + 1e-9)


# ---------------------------------------------------------------------------
# heap primitives (max-gain, ties to the smaller node id)


@maybe_njit
def _heap_better(g1, v1, g2, v2):
    return g1 > g2 or (g1 == g2 and v1 < v2)


@maybe_njit
def _heap_push(heap_g, heap_v, size, g, v):
    i = size
    heap_g[i] = g
    heap_v[i] = v
    while i > 0:
        p = (i - 1) >> 1
        if _heap_better(heap_g[i], heap_v[i], heap_g[p], heap_v[p]):
            heap_g[i], heap_g[p] = heap_g[p], heap_g[i]
            heap_v[i], heap_v[p] = heap_v[p], heap_v[i]
            i = p
        else:
            break
    return size + 1


@maybe_njit
def _heap_pop(heap_g, heap_v, size):
    g = heap_g[0]
    v = heap_v[0]
    size -= 1
    heap_g[0] = heap_g[size]
    heap_v[0] = heap_v[size]
    i = 0
    while True:
        l = 2 * i + 1
        if l >= size:
            break
        best = l
        r = l + 1
        if r < size and _heap_better(heap_g[r], heap_v[r], heap_g[l], heap_v[l]):
            best = r
        if _heap_better(heap_g[best], heap_v[best], heap_g[i], heap_v[i]):
            heap_g[i], heap_g[best] = heap_g[best], heap_g[i]
            heap_v[i], heap_v[best] = heap_v[best], heap_v[i]
            i = best
        else:
            break
    return g, v, size


# ---------------------------------------------------------------------------
# graph kernels


@maybe_njit
def _match_heavy_edge(indptr, indices, eweight, nweight, visit, max_weight):
    """Greedy heaviest-edge matching; ties to the smaller neighbor id.

    Pairs whose combined weight would exceed max_weight stay unmatched.
    Returns match[v] (the partner, or v itself).
    """
    n = indptr.shape[0] - 1
    match = np.full(n, -1, dtype=np.int64)
    for i in range(n):
        v = visit[i]
        if match[v] >= 0:
            continue
        best = np.int64(-1)
        best_w = np.int64(0)
        for j in range(indptr[v], indptr[v + 1]):
            u = indices[j]
            if match[u] >= 0:
                continue
            if nweight[v] + nweight[u] > max_weight:
                continue
            w = eweight[j]
            if w > best_w or (w == best_w and (best == -1 or u < best)):
                best_w = w
                best = u
        if best >= 0:
            match[v] = best
            match[best] = v
        else:
            match[v] = v
    return match


@maybe_njit
def _fm_refine_graph(indptr, indices, eweight, nweight, block, l_max, max_passes):
    """In-place FM refinement; returns the final cut.

    Each pass pops the highest-gain movable node, applies the move, updates
    neighbor gains, and at the end rolls back to the best prefix. Stops when
    a whole pass brings no improvement, which certifies that no single move
    (balance respected) can reduce the cut.
    """
    n = indptr.shape[0] - 1
    bw = np.zeros(2, dtype=np.int64)
    bc = np.zeros(2, dtype=np.int64)
    for v in range(n):
        b = block[v]
        bw[b] += nweight[v]
        bc[b] += 1
    cut = np.int64(0)
    for v in range(n):
        for j in range(indptr[v], indptr[v + 1]):
            u = indices[j]
            if u > v and block[u] != block[v]:
                cut += eweight[j]
    cap = n + indices.shape[0] + 8
    heap_g = np.empty(cap, dtype=np.int64)
    heap_v = np.empty(cap, dtype=np.int64)
    gain = np.zeros(n, dtype=np.int64)
    locked = np.zeros(n, dtype=np.uint8)
    move_seq = np.empty(n, dtype=np.int64)
    for _pass in range(max_passes):
        hs = 0
        for v in range(n):
            locked[v] = 0
            g = np.int64(0)
            b = block[v]
            for j in range(indptr[v], indptr[v + 1]):
                if block[indices[j]] == b:
                    g -= eweight[j]
                else:
                    g += eweight[j]
            gain[v] = g
            hs = _heap_push(heap_g, heap_v, hs, g, v)
        best_cut = cut
        best_idx = -1
        cur = cut
        nm = 0
        while hs > 0:
            g, v, hs = _heap_pop(heap_g, heap_v, hs)
            if locked[v] == 1 or gain[v] != g:
                continue
            b = block[v]
            o = 1 - b
            if bc[b] <= 1:
                continue
            if bw[o] + nweight[v] > l_max:
                continue
            block[v] = np.int8(o)
            bw[b] -= nweight[v]
            bw[o] += nweight[v]
            bc[b] -= 1
            bc[o] += 1
            locked[v] = 1
            cur -= g
            move_seq[nm] = v
            nm += 1
            if cur < best_cut:
                best_cut = cur
                best_idx = nm - 1
            for j in range(indptr[v], indptr[v + 1]):
                u = indices[j]
                if locked[u] == 1:
                    continue
                w = eweight[j]
                if block[u] == b:
                    gain[u] += 2 * w
                else:
                    gain[u] -= 2 * w
                hs = _heap_push(heap_g, heap_v, hs, gain[u], u)
        for k in range(nm - 1, best_idx, -1):
            v = move_seq[k]
            o = block[v]
            b = 1 - o
            block[v] = np.int8(b)
            bw[o] -= nweight[v]
            bw[b] += nweight[v]
            bc[o] -= 1
            bc[b] += 1
        if best_idx < 0:
            break
        cut = best_cut
    return cut


# ---------------------------------------------------------------------------
# hypergraph kernels


@maybe_njit
def _match_pin_overlap(eptr, epins, wnet, vptr, vnets, nweight, visit, max_weight):
    """Greedy matching by accumulated w(e)/(|e|-1) over shared nets."""
    n = vptr.shape[0] - 1
    match = np.full(n, -1, dtype=np.int64)
    score = np.zeros(n, dtype=np.float64)
    touched = np.empty(n, dtype=np.int64)
    for i in range(n):
        v = visit[i]
        if match[v] >= 0:
            continue
        nt = 0
        for a in range(vptr[v], vptr[v + 1]):
            e = vnets[a]
            lo = eptr[e]
            hi = eptr[e + 1]
            bonus = wnet[e] / (hi - lo - 1)
            for k in range(lo, hi):
                u = epins[k]
                if u == v or match[u] >= 0:
                    continue
                if nweight[v] + nweight[u] > max_weight:
                    continue
                if score[u] == 0.0:
                    touched[nt] = u
                    nt += 1
                score[u] += bonus
        best = np.int64(-1)
        best_s = 0.0
        for k in range(nt):
            u = touched[k]
            s = score[u]
            if s > best_s or (s == best_s and (best == -1 or u < best)):
                best_s = s
                best = u
        for k in range(nt):
            score[touched[k]] = 0.0
        if best >= 0:
            match[v] = best
            match[best] = v
        else:
            match[v] = v
    return match


@maybe_njit
def _fm_refine_hyper(eptr, epins, wnet, vptr, vnets, nweight, block, l_max, max_passes):
    """FM for hypergraphs with the standard critical-net gain updates."""
    n = vptr.shape[0] - 1
    ne = eptr.shape[0] - 1
    cnt = np.zeros((2, ne), dtype=np.int64)
    for e in range(ne):
        for k in range(eptr[e], eptr[e + 1]):
            cnt[block[epins[k]], e] += 1
    cut = np.int64(0)
    bw = np.zeros(2, dtype=np.int64)
    bc = np.zeros(2, dtype=np.int64)
    for v in range(n):
        b = block[v]
        bw[b] += nweight[v]
        bc[b] += 1
    for e in range(ne):
        if cnt[0, e] > 0 and cnt[1, e] > 0:
            cut += wnet[e]
    cap = n + 8
    for e in range(ne):
        sz = eptr[e + 1] - eptr[e]
        cap += 2 * sz * sz
    heap_g = np.empty(cap, dtype=np.int64)
    heap_v = np.empty(cap, dtype=np.int64)
    gain = np.zeros(n, dtype=np.int64)
    locked = np.zeros(n, dtype=np.uint8)
    move_seq = np.empty(n, dtype=np.int64)
    for _pass in range(max_passes):
        hs = 0
        for v in range(n):
            locked[v] = 0
            b = block[v]
            g = np.int64(0)
            for a in range(vptr[v], vptr[v + 1]):
                e = vnets[a]
                if cnt[b, e] == 1:
                    g += wnet[e]
                if cnt[1 - b, e] == 0:
                    g -= wnet[e]
            gain[v] = g
            hs = _heap_push(heap_g, heap_v, hs, g, v)
        best_cut = cut
        best_idx = -1
        cur = cut
        nm = 0
        while hs > 0:
            g, v, hs = _heap_pop(heap_g, heap_v, hs)
            if locked[v] == 1 or gain[v] != g:
                continue
            b = block[v]
            o = 1 - b
            if bc[b] <= 1:
                continue
            if bw[o] + nweight[v] > l_max:
                continue
            block[v] = np.int8(o)
            bw[b] -= nweight[v]
            bw[o] += nweight[v]
            bc[b] -= 1
            bc[o] += 1
            locked[v] = 1
            cur -= g
            move_seq[nm] = v
            nm += 1
            if cur < best_cut:
                best_cut = cur
                best_idx = nm - 1
            for a in range(vptr[v], vptr[v + 1]):
                e = vnets[a]
                w = wnet[e]
                lo = eptr[e]
                hi = eptr[e + 1]
                # before the counts change: net about to become cut, or about
                # to lose its sole o-side pin bonus
                if cnt[o, e] == 0:
                    for k in range(lo, hi):
                        u = epins[k]
                        if locked[u] == 0:
                            gain[u] += w
                            hs = _heap_push(heap_g, heap_v, hs, gain[u], u)
                elif cnt[o, e] == 1:
                    for k in range(lo, hi):
                        u = epins[k]
                        if locked[u] == 0 and block[u] == o and u != v:
                            gain[u] -= w
                            hs = _heap_push(heap_g, heap_v, hs, gain[u], u)
                cnt[b, e] -= 1
                cnt[o, e] += 1
                # after: net just became uncuttable-from-b, or b side is now critical
                if cnt[b, e] == 0:
                    for k in range(lo, hi):
                        u = epins[k]
                        if locked[u] == 0:
                            gain[u] -= w
                            hs = _heap_push(heap_g, heap_v, hs, gain[u], u)
                elif cnt[b, e] == 1:
                    for k in range(lo, hi):
                        u = epins[k]
                        if locked[u] == 0 and block[u] == b:
                            gain[u] += w
                            hs = _heap_push(heap_g, heap_v, hs, gain[u], u)
        for k in range(nm - 1, best_idx, -1):
            v = move_seq[k]
            o = block[v]
            b = 1 - o
            block[v] = np.int8(b)
            bw[o] -= nweight[v]
            bw[b] += nweight[v]
            bc[o] -= 1
            bc[b] += 1
            for a in range(vptr[v], vptr[v + 1]):
                e = vnets[a]
                cnt[o, e] -= 1
                cnt[b, e] += 1
        if best_idx < 0:
            break
        cut = best_cut
    return cut


# ---------------------------------------------------------------------------
# coarsening


def _dense_coarse_ids(match: np.ndarray) -> tuple[np.ndarray, int]:
    reps = np.minimum(np.arange(len(match), dtype=np.int64), match)
    uniq = np.unique(reps)
    return np.searchsorted(uniq, reps), len(uniq)


def _coarsen_graph_once(g: Graph, nweight: np.ndarray, cid: np.ndarray, n_coarse: int):
    src = np.repeat(np.arange(g.n, dtype=np.int64), np.diff(g.indptr))
    keep = src < g.indices
    cu = cid[src[keep]]
    cv = cid[g.indices[keep]]
    w = g.edge_weight[keep]
    inner = cu != cv
    cg = graph_from_arcs(n_coarse, cu[inner], cv[inner], w[inner], merge="sum")
    cw = np.bincount(cid, weights=nweight.astype(np.float64), minlength=n_coarse).astype(np.int64)
    return cg, cw


def _coarsen_hyper_once(h: Hypergraph, nweight: np.ndarray, cid: np.ndarray, n_coarse: int):
    sizes = h.net_sizes()
    if h.num_nets == 0:
        ch = Hypergraph(np.zeros(1, dtype=np.int64), np.empty(0, dtype=np.int64),
                        np.empty(0, dtype=np.int64), np.ones(n_coarse, dtype=np.int64))
        cw = np.bincount(cid, weights=nweight.astype(np.float64), minlength=n_coarse).astype(np.int64)
        return ch, cw
    width = int(sizes.max())
    big = np.int64(n_coarse)  # pad sentinel that sorts last
    rows = np.full((h.num_nets, width), big, dtype=np.int64)
    col = np.arange(len(h.pins), dtype=np.int64) - np.repeat(h.net_indptr[:-1], sizes)
    rows[np.repeat(np.arange(h.num_nets, dtype=np.int64), sizes), col] = cid[h.pins]
    rows.sort(axis=1)
    # squash within-row duplicates to the sentinel, tracking the last kept value
    prev = rows[:, 0].copy()
    for c in range(1, width):
        dup = (rows[:, c] == prev) & (rows[:, c] != big)
        rows[dup, c] = big
        prev = np.where(dup, prev, rows[:, c])
    rows.sort(axis=1)
    new_sizes = (rows != big).sum(axis=1)
    keep = new_sizes >= 2
    rows = rows[keep]
    kept_w = h.net_weight[keep]
    uniq, inverse = np.unique(rows, axis=0, return_inverse=True)
    wsum = np.bincount(inverse.reshape(-1), weights=kept_w.astype(np.float64), minlength=len(uniq))
    sizes_u = (uniq != big).sum(axis=1)
    flat = uniq.ravel()
    pins = flat[flat != big]
    net_indptr = np.concatenate(([0], np.cumsum(sizes_u)))
    ch = Hypergraph(net_indptr, pins, wsum.astype(np.int64), np.ones(n_coarse, dtype=np.int64))
    cw = np.bincount(cid, weights=nweight.astype(np.float64), minlength=n_coarse).astype(np.int64)
    return ch, cw


def _incidence(h: Hypergraph) -> tuple[np.ndarray, np.ndarray]:
    sizes = h.net_sizes()
    net_of_pin = np.repeat(np.arange(h.num_nets, dtype=np.int64), sizes)
    order = np.argsort(h.pins, kind="stable")
    vnets = net_of_pin[order]
    vptr = np.zeros(h.n + 1, dtype=np.int64)
    np.add.at(vptr, h.pins + 1, 1)
    return np.cumsum(vptr), vnets


def build_hierarchy(
    structure: Structure,
    node_weight: np.ndarray,
    rng: np.random.Generator,
    cfg: PartitionerConfig,
) -> list[CoarseLevel]:
    """Coarsen by repeated matching; levels[0] is the input, last is coarsest."""
    levels = [CoarseLevel(structure, np.asarray(node_weight, dtype=np.int64), None)]
    total = int(levels[0].node_weight.sum())
    cap = max(1, total // cfg.weight_cap_divisor)
    while True:
        cur = levels[-1]
        n = len(cur.node_weight)
        if n <= cfg.coarsening_limit:
            break
        visit = rng.permutation(n).astype(np.int64)
        if isinstance(cur.structure, Graph):
            g = cur.structure
            match = _match_heavy_edge(
                g.indptr, g.indices, g.edge_weight, cur.node_weight, visit, np.int64(cap)
            )
        else:
            h = cur.structure
            vptr, vnets = _incidence(h)
            match = _match_pin_overlap(
                h.net_indptr, h.pins, h.net_weight, vptr, vnets,
                cur.node_weight, visit, np.int64(cap),
            )
        cid, n_coarse = _dense_coarse_ids(match)
        if n_coarse >= n or (n - n_coarse) < cfg.min_shrink * n:
            break
        if isinstance(cur.structure, Graph):
            cs, cw = _coarsen_graph_once(cur.structure, cur.node_weight, cid, n_coarse)
        else:
            cs, cw = _coarsen_hyper_once(cur.structure, cur.node_weight, cid, n_coarse)
        levels.append(CoarseLevel(cs, cw, cid))
    return levels


# ---------------------------------------------------------------------------
# initial partitioning


def _co_pin_adjacency(h: Hypergraph) -> tuple[np.ndarray, np.ndarray]:
    """Unweighted adjacency linking nodes that share a net (for region growing)."""
    sizes = h.net_sizes()
    if len(h.pins) == 0:
        return np.zeros(h.n + 1, dtype=np.int64), np.empty(0, dtype=np.int64)
    per_pin = np.repeat(sizes, sizes)
    src = np.repeat(h.pins, per_pin)
    starts = np.repeat(h.net_indptr[:-1], sizes)
    dst = concat_ranges(h.pins, starts, per_pin)
    keep = src != dst
    g = graph_from_arcs(h.n, src[keep], dst[keep], merge="first")
    return g.indptr, g.indices


def _structure_cut(structure: Structure, block: np.ndarray) -> int:
    if isinstance(structure, Graph):
        return edge_cut(structure, block)
    return cut_net(structure, block)


def _lpt_split(nweight: np.ndarray, l_max: int) -> np.ndarray | None:
    order = np.lexsort((np.arange(len(nweight)), -nweight))
    block = np.zeros(len(nweight), dtype=np.int8)
    bw = [0, 0]
    for v in order:
        w = int(nweight[v])
        pick = 0 if bw[0] <= bw[1] else 1
        if bw[pick] + w > l_max:
            pick = 1 - pick
            if bw[pick] + w > l_max:
                return None
        block[v] = pick
        bw[pick] += w
    n = len(nweight)
    if np.all(block == block[0]) and n > 1:
        # all nodes fit one side; peel the lightest off to keep both nonempty
        lightest = int(np.lexsort((np.arange(n), nweight))[0])
        if bw[block[lightest]] - int(nweight[lightest]) >= 0:
            block[lightest] = 1 - block[lightest]
    return block


def _initial_partition(
    level: CoarseLevel,
    epsilon: float,
    rng: np.random.Generator,
    cfg: PartitionerConfig,
) -> np.ndarray | None:
    """Region growing from random starts, best cut wins; LPT as a fallback."""
    nweight = level.node_weight
    n = len(nweight)
    if n < 2:
        return None
    total = int(nweight.sum())
    l_max = _l_max(total, epsilon)
    lower = total - l_max
    target = (total + 1) // 2
    if isinstance(level.structure, Graph):
        indptr, indices = level.structure.indptr, level.structure.indices
    else:
        indptr, indices = _co_pin_adjacency(level.structure)

    def valid(block: np.ndarray) -> bool:
        c0 = int(nweight[block == 0].sum())
        c1 = total - c0
        return max(c0, c1) <= l_max and min(c0, c1) >= lower and 0 < int((block == 0).sum()) < n

    best_block = None
    best_cut = None
    for _ in range(cfg.init_tries):
        restart = rng.permutation(n)
        block = np.ones(n, dtype=np.int8)
        visited = np.zeros(n, dtype=bool)
        c0 = 0
        queue: list[int] = []
        qi = 0
        ri = 0
        while c0 < target:
            if qi >= len(queue):
                while ri < n and visited[restart[ri]]:
                    ri += 1
                if ri >= n:
                    break
                queue.append(int(restart[ri]))
                visited[restart[ri]] = True
            v = queue[qi]
            qi += 1
            w = int(nweight[v])
            if c0 + w <= l_max:
                block[v] = 0
                c0 += w
            for u in indices[indptr[v] : indptr[v + 1]]:
                if not visited[u]:
                    visited[u] = True
                    queue.append(int(u))
        if valid(block):
            cut = _structure_cut(level.structure, block)
            if best_cut is None or cut < best_cut:
                best_cut = cut
                best_block = block
    if best_block is not None:
        return best_block
    block = _lpt_split(nweight, l_max)
    if block is not None and valid(block):
        return block
    return None


# ---------------------------------------------------------------------------
# multilevel driver


def _refine(level: CoarseLevel, block: np.ndarray, l_max: int, cfg: PartitionerConfig) -> int:
    if isinstance(level.structure, Graph):
        g = level.structure
        return int(
            _fm_refine_graph(
                g.indptr, g.indices, g.edge_weight, level.node_weight, block,
                np.int64(l_max), np.int64(cfg.max_fm_passes),
            )
        )
    h = level.structure
    vptr, vnets = _incidence(h)
    return int(
        _fm_refine_hyper(
            h.net_indptr, h.pins, h.net_weight, vptr, vnets, level.node_weight, block,
            np.int64(l_max), np.int64(cfg.max_fm_passes),
        )
    )


def partition_structure(
    structure: Structure,
    epsilon: float,
    rng: np.random.Generator,
    node_weight: np.ndarray | None = None,
    cfg: PartitionerConfig | None = None,
) -> Bipartition:
    """Full multilevel 2-way partition of a graph or hypergraph."""
    cfg = cfg or PartitionerConfig()
    if node_weight is None:
        nw = np.ones(structure.n, dtype=np.int64)
    else:
        nw = np.asarray(node_weight, dtype=np.int64)
    if structure.n < 2:
        raise PartitionError("cannot bipartition fewer than 2 nodes")
    total = int(nw.sum())
    l_max = _l_max(total, epsilon)
    levels = build_hierarchy(structure, nw, rng, cfg)
    # find the deepest level that admits a balanced start, then refine upward
    start = None
    start_idx = None
    for idx in range(len(levels) - 1, -1, -1):
        start = _initial_partition(levels[idx], epsilon, rng, cfg)
        if start is not None:
            start_idx = idx
            break
    if start is None:
        raise PartitionError("no balanced nonempty bipartition found")
    block = start
    _refine(levels[start_idx], block, l_max, cfg)
    for idx in range(start_idx - 1, -1, -1):
        block = block[levels[idx + 1].fine_to_coarse]
        _refine(levels[idx], block, l_max, cfg)
    cut = _structure_cut(structure, block)
    result = Bipartition(block, epsilon, cut)
    check_balance(structure, result, nw)
    return result


def check_balance(structure: Structure, p: Bipartition, node_weight: np.ndarray | None = None) -> None:
    """Raise unless p has nonempty blocks within the epsilon bound and a true cut_value."""
    nw = node_weight if node_weight is not None else np.ones(structure.n, dtype=np.int64)
    c0 = int(nw[p.block == 0].sum())
    c1 = int(nw.sum()) - c0
    l_max = _l_max(c0 + c1, p.epsilon)
    n0 = int((p.block == 0).sum())
    if n0 == 0 or n0 == structure.n:
        raise PartitionError("a block is empty")
    if max(c0, c1) > l_max:
        raise PartitionError(f"balance violated: {max(c0, c1)} > {l_max}")
    actual = _structure_cut(structure, p.block)
    if actual != p.cut_value:
        raise PartitionError(f"stored cut {p.cut_value} != recomputed {actual}")
