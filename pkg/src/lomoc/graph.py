"""Graph and hypergraph containers, cut evaluation, and file I/O.

Graphs are stored in compressed sparse row form: ``indptr``/``indices`` hold
the symmetric adjacency, ``edge_weight`` is per directed arc (both copies of
an undirected edge carry the same weight), and ``node_weight`` is per node.
Hypergraphs store one pin list per net. All index arrays are int64 and all
neighbor/pin lists are sorted ascending, which the kernels rely on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class GraphParseError(ValueError):
    """Input file does not parse under the requested format."""


class GraphIntegrityError(ValueError):
    """Parsed file is internally inconsistent (edge counts, symmetry, weights)."""


def _as_int64(a) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(a, dtype=np.int64))


def _rows_strictly_sorted(flat: np.ndarray, indptr: np.ndarray) -> bool:
    """True when every indptr-framed row of flat is strictly increasing."""
    if len(flat) < 2:
        return True
    d = np.diff(flat)
    is_start = np.zeros(len(flat) + 1, dtype=bool)
    is_start[indptr] = True
    within_row = ~is_start[1 : len(flat)]
    return bool(np.all(d[within_row] > 0))


def concat_ranges(data: np.ndarray, starts: np.ndarray, lengths: np.ndarray) -> np.ndarray:
    """Gather data[starts[i] : starts[i]+lengths[i]] for all i, concatenated."""
    total = int(lengths.sum())
    if total == 0:
        return np.empty(0, dtype=data.dtype)
    rep_starts = np.repeat(starts, lengths)
    shifted = np.concatenate(([0], np.cumsum(lengths)[:-1]))
    offsets = np.arange(total, dtype=np.int64) - np.repeat(shifted, lengths)
    return data[rep_starts + offsets]


@dataclass
class Graph:
    """Undirected graph in CSR form. ``orig_ids[i]`` is the external label of node i."""

    indptr: np.ndarray
    indices: np.ndarray
    edge_weight: np.ndarray
    node_weight: np.ndarray
    orig_ids: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        self.indptr = _as_int64(self.indptr)
        self.indices = _as_int64(self.indices)
        self.edge_weight = _as_int64(self.edge_weight)
        self.node_weight = _as_int64(self.node_weight)
        if self.orig_ids is None:
            self.orig_ids = np.arange(self.n, dtype=np.int64)
        else:
            self.orig_ids = _as_int64(self.orig_ids)

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def total_node_weight(self) -> int:
        return int(self.node_weight.sum())

    def validate(self) -> None:
        n = self.n
        if self.indptr[0] != 0 or self.indptr[-1] != len(self.indices):
            raise GraphIntegrityError("indptr does not frame indices")
        if np.any(np.diff(self.indptr) < 0):
            raise GraphIntegrityError("indptr not monotone")
        if len(self.indices) != len(self.edge_weight):
            raise GraphIntegrityError("edge_weight length mismatch")
        if len(self.node_weight) != n or len(self.orig_ids) != n:
            raise GraphIntegrityError("per-node array length mismatch")
        if n and len(self.indices):
            if self.indices.min() < 0 or self.indices.max() >= n:
                raise GraphIntegrityError("neighbor index out of range")
        src = np.repeat(np.arange(n, dtype=np.int64), np.diff(self.indptr))
        if np.any(src == self.indices):
            raise GraphIntegrityError("self loop present")
        if not _rows_strictly_sorted(self.indices, self.indptr):
            raise GraphIntegrityError("an adjacency list is not strictly sorted")
        # symmetry with equal weights: the multiset of (min,max,w) arcs must pair up
        lo = np.minimum(src, self.indices)
        hi = np.maximum(src, self.indices)
        key = np.stack([lo, hi, self.edge_weight], axis=1)
        uniq, counts = np.unique(key, axis=0, return_counts=True)
        if len(key) and np.any(counts != 2):
            raise GraphIntegrityError("adjacency not symmetric with matching weights")
        if np.any(self.edge_weight <= 0) or np.any(self.node_weight < 0):
            raise GraphIntegrityError("nonpositive edge weight or negative node weight")


@dataclass
class Hypergraph:
    """Hypergraph as a CSR of pin lists; ``net_indptr`` frames ``pins``."""

    net_indptr: np.ndarray
    pins: np.ndarray
    net_weight: np.ndarray
    node_weight: np.ndarray
    orig_ids: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        self.net_indptr = _as_int64(self.net_indptr)
        self.pins = _as_int64(self.pins)
        self.net_weight = _as_int64(self.net_weight)
        self.node_weight = _as_int64(self.node_weight)
        if self.orig_ids is None:
            self.orig_ids = np.arange(self.n, dtype=np.int64)
        else:
            self.orig_ids = _as_int64(self.orig_ids)

    @property
    def n(self) -> int:
        return len(self.node_weight)

    @property
    def num_nets(self) -> int:
        return len(self.net_indptr) - 1

    def net_sizes(self) -> np.ndarray:
        return np.diff(self.net_indptr)

    def net_pins(self, e: int) -> np.ndarray:
        return self.pins[self.net_indptr[e] : self.net_indptr[e + 1]]

    def total_node_weight(self) -> int:
        return int(self.node_weight.sum())

    def validate(self) -> None:
        if self.net_indptr[0] != 0 or self.net_indptr[-1] != len(self.pins):
            raise GraphIntegrityError("net_indptr does not frame pins")
        sizes = self.net_sizes()
        if np.any(sizes < 2):
            raise GraphIntegrityError("net with fewer than 2 pins")
        if len(self.net_weight) != self.num_nets:
            raise GraphIntegrityError("net_weight length mismatch")
        if len(self.pins) and (self.pins.min() < 0 or self.pins.max() >= self.n):
            raise GraphIntegrityError("pin index out of range")
        if not _rows_strictly_sorted(self.pins, self.net_indptr):
            raise GraphIntegrityError("a pin list is not strictly sorted")
        if np.any(self.net_weight <= 0) or np.any(self.node_weight < 0):
            raise GraphIntegrityError("nonpositive net weight or negative node weight")


@dataclass
class Bipartition:
    """Two-way partition: block[v] in {0,1}; cut_value is the cut at creation time."""

    block: np.ndarray
    epsilon: float
    cut_value: int

    def __post_init__(self):
        self.block = np.ascontiguousarray(np.asarray(self.block, dtype=np.int8))

    def copy(self) -> "Bipartition":
        return Bipartition(self.block.copy(), self.epsilon, self.cut_value)


def edge_cut(g: Graph, block: np.ndarray) -> int:
    """Total weight of edges with endpoints in different blocks."""
    n = g.n
    src = np.repeat(np.arange(n, dtype=np.int64), np.diff(g.indptr))
    mask = (src < g.indices) & (block[src] != block[g.indices])
    return int(g.edge_weight[mask].sum())


def cut_net(h: Hypergraph, block: np.ndarray) -> int:
    """Total weight of nets whose pins touch both blocks."""
    if h.num_nets == 0:
        return 0
    bp = block[h.pins].astype(np.int8)
    starts = h.net_indptr[:-1]
    lo = np.minimum.reduceat(bp, starts)
    hi = np.maximum.reduceat(bp, starts)
    return int(h.net_weight[lo != hi].sum())


def graph_from_arcs(
    n: int,
    u: np.ndarray,
    v: np.ndarray,
    w: np.ndarray | None = None,
    node_weight: np.ndarray | None = None,
    orig_ids: np.ndarray | None = None,
    merge: str = "sum",
) -> Graph:
    """Build a canonical Graph from an arbitrary list of endpoint pairs.

    Self loops are dropped. Parallel edges are merged; ``merge`` picks how
    their weights combine ("sum" or "first"). Pairs may appear in either or
    both orientations.
    """
    u = _as_int64(u)
    v = _as_int64(v)
    if w is None:
        w = np.ones(len(u), dtype=np.int64)
    else:
        w = _as_int64(w)
    keep = u != v
    u, v, w = u[keep], v[keep], w[keep]
    lo = np.minimum(u, v)
    hi = np.maximum(u, v)
    key = lo * np.int64(n) + hi
    uniq, first_idx, inverse = np.unique(key, return_index=True, return_inverse=True)
    if merge == "sum":
        # both orientations of the same pair double the sum, so halve when
        # the input is already symmetric; callers pass one orientation here
        wu = np.bincount(inverse, weights=w.astype(np.float64), minlength=len(uniq))
        wu = wu.astype(np.int64)
    elif merge == "first":
        wu = w[first_idx]
    else:
        raise ValueError(f"unknown merge mode {merge!r}")
    lo_u = uniq // n
    hi_u = uniq % n
    return _graph_from_unique_edges(n, lo_u, hi_u, wu, node_weight, orig_ids)


def _graph_from_unique_edges(n, lo, hi, w, node_weight=None, orig_ids=None) -> Graph:
    """CSR assembly from deduplicated undirected edges (lo < hi)."""
    src = np.concatenate([lo, hi])
    dst = np.concatenate([hi, lo])
    ww = np.concatenate([w, w])
    order = np.lexsort((dst, src))
    src, dst, ww = src[order], dst[order], ww[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, src + 1, 1)
    indptr = np.cumsum(indptr)
    if node_weight is None:
        node_weight = np.ones(n, dtype=np.int64)
    return Graph(indptr, dst, ww, node_weight, orig_ids)


# ---------------------------------------------------------------------------
# readers


def _data_lines(path: str, comment: str, keep_blank: bool = False):
    """Yield (lineno, stripped_line) skipping comments; blanks optional.

    METIS needs blank lines kept: an isolated node is exactly an empty
    adjacency line.
    """
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if line.startswith(comment) and line:
                continue
            if not line and not keep_blank:
                continue
            yield lineno, line


def read_edgelist(path: str) -> Graph:
    """Whitespace-separated node-id pairs, '#' comments, arbitrary labels.

    Labels are remapped to 0..n-1 in ascending label order and kept in
    ``orig_ids``. Self loops are removed after their endpoints are counted as
    nodes; duplicate edges collapse. All weights are 1.
    """
    us, vs = [], []
    for lineno, line in _data_lines(path, "#"):
        parts = line.split()
        if len(parts) != 2:
            raise GraphParseError(f"{path}: line {lineno}: expected 2 node ids, got {len(parts)}")
        try:
            us.append(int(parts[0]))
            vs.append(int(parts[1]))
        except ValueError:
            raise GraphParseError(f"{path}: line {lineno}: non-integer node id") from None
    u = np.array(us, dtype=np.int64)
    v = np.array(vs, dtype=np.int64)
    labels = np.unique(np.concatenate([u, v]))  # nodes seen only in self loops count too
    n = len(labels)
    u = np.searchsorted(labels, u)
    v = np.searchsorted(labels, v)
    return graph_from_arcs(n, u, v, orig_ids=labels, merge="first")


def read_metis(path: str) -> Graph:
    """METIS graph format: 1-based adjacency, '%' comments, optional weights.

    Edge weights must agree across the two listings of an edge; listed
    adjacency must be symmetric and its total must equal twice the declared
    edge count.
    """
    lines = _data_lines(path, "%", keep_blank=True)
    header = ""
    header_no = 0
    for header_no, header in lines:
        if header:
            break
    if not header:
        raise GraphParseError(f"{path}: empty file")
    parts = header.split()
    if len(parts) < 2 or len(parts) > 4:
        raise GraphParseError(f"{path}: line {header_no}: header needs 2-4 fields")
    try:
        n, m_decl = int(parts[0]), int(parts[1])
        fmt = parts[2] if len(parts) >= 3 else "0"
        ncon = int(parts[3]) if len(parts) == 4 else 1
    except ValueError:
        raise GraphParseError(f"{path}: line {header_no}: non-integer header field") from None
    if len(fmt) > 3 or not fmt.isdigit():
        raise GraphParseError(f"{path}: line {header_no}: bad format code {fmt!r}")
    fmt = fmt.zfill(3)
    if fmt[0] == "1":
        raise GraphParseError(f"{path}: line {header_no}: vertex sizes not supported")
    has_nw = fmt[1] == "1"
    has_ew = fmt[2] == "1"
    if has_nw and ncon != 1:
        raise GraphParseError(f"{path}: line {header_no}: only 1 node-weight constraint supported")

    node_weight = np.ones(n, dtype=np.int64)
    srcs, dsts, ws = [], [], []
    count = 0
    for lineno, line in lines:
        if count >= n:
            raise GraphParseError(f"{path}: line {lineno}: more than {n} node lines")
        try:
            vals = [int(t) for t in line.split()]
        except ValueError:
            raise GraphParseError(f"{path}: line {lineno}: non-integer token") from None
        pos = 0
        if has_nw:
            if not vals:
                raise GraphParseError(f"{path}: line {lineno}: missing node weight")
            node_weight[count] = vals[0]
            pos = 1
        rest = vals[pos:]
        if has_ew:
            if len(rest) % 2:
                raise GraphParseError(f"{path}: line {lineno}: dangling neighbor without weight")
            nbrs = rest[0::2]
            wts = rest[1::2]
        else:
            nbrs = rest
            wts = [1] * len(rest)
        for x, wt in zip(nbrs, wts):
            if x < 1 or x > n:
                raise GraphParseError(f"{path}: line {lineno}: neighbor {x} out of range 1..{n}")
            srcs.append(count)
            dsts.append(x - 1)
            ws.append(wt)
        count += 1
    if count != n:
        raise GraphIntegrityError(f"{path}: {count} node lines, header declares {n}")

    src = np.array(srcs, dtype=np.int64)
    dst = np.array(dsts, dtype=np.int64)
    w = np.array(ws, dtype=np.int64)
    if np.any(src == dst):
        raise GraphIntegrityError(f"{path}: self loop listed")
    # symmetry with consistent weights: every (lo,hi) key must appear exactly
    # twice with equal weight
    lo = np.minimum(src, dst)
    hi = np.maximum(src, dst)
    key = lo * np.int64(n) + hi
    order = np.argsort(key, kind="stable")
    key_s, w_s = key[order], w[order]
    uniq, start = np.unique(key_s, return_index=True)
    counts = np.diff(np.append(start, len(key_s)))
    if np.any(counts != 2):
        raise GraphIntegrityError(f"{path}: adjacency lists are not symmetric")
    if len(uniq) != m_decl:
        raise GraphIntegrityError(f"{path}: found {len(uniq)} edges, header declares {m_decl}")
    wmin = np.minimum.reduceat(w_s, start) if len(uniq) else w_s
    wmax = np.maximum.reduceat(w_s, start) if len(uniq) else w_s
    if np.any(wmin != wmax):
        raise GraphIntegrityError(f"{path}: edge listed with two different weights")
    lo_u = uniq // n
    hi_u = uniq % n
    return _graph_from_unique_edges(n, lo_u, hi_u, wmin, node_weight, np.arange(1, n + 1, dtype=np.int64))


def load_graph(path: str, fmt: str) -> Graph:
    """Load and normalize an input graph for clustering.

    The clustered graph is always simple, connected-or-not, and unit
    weighted: whatever weights the file carries are replaced by 1 after
    parsing, and self loops and duplicate edges are removed by the readers.
    """
    if fmt == "metis":
        g = read_metis(path)
    elif fmt == "edgelist":
        g = read_edgelist(path)
    else:
        raise ValueError(f"unknown graph format {fmt!r}")
    g.edge_weight = np.ones_like(g.edge_weight)
    g.node_weight = np.ones_like(g.node_weight)
    return g


# ---------------------------------------------------------------------------
# writers


def write_metis(g: Graph, path: str) -> None:
    """Write METIS format; weight fields are emitted only when non-unit."""
    has_nw = bool(np.any(g.node_weight != 1))
    has_ew = bool(np.any(g.edge_weight != 1))
    fmt = f"0{int(has_nw)}{int(has_ew)}"
    with open(path, "w", encoding="utf-8") as fh:
        header = f"{g.n} {g.m}"
        if fmt != "000":
            header += f" {fmt}"
        fh.write(header + "\n")
        for v in range(g.n):
            lo, hi = g.indptr[v], g.indptr[v + 1]
            toks = []
            if has_nw:
                toks.append(str(int(g.node_weight[v])))
            for j in range(lo, hi):
                toks.append(str(int(g.indices[j]) + 1))
                if has_ew:
                    toks.append(str(int(g.edge_weight[j])))
            fh.write(" ".join(toks) + "\n")


def write_hmetis(h: Hypergraph, path: str) -> None:
    """Write hMETIS format: header 'nets nodes [fmt]', then pin lines, 1-based."""
    has_nw = bool(np.any(h.node_weight != 1))
    has_ew = bool(np.any(h.net_weight != 1))
    fmt = ""
    if has_ew and has_nw:
        fmt = " 11"
    elif has_ew:
        fmt = " 1"
    elif has_nw:
        fmt = " 10"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{h.num_nets} {h.n}{fmt}\n")
        for e in range(h.num_nets):
            toks = []
            if has_ew:
                toks.append(str(int(h.net_weight[e])))
            toks.extend(str(int(p) + 1) for p in h.net_pins(e))
            fh.write(" ".join(toks) + "\n")
        if has_nw:
            for v in range(h.n):
                fh.write(f"{int(h.node_weight[v])}\n")
