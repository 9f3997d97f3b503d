import numpy as np
import pytest

from lomoc import (
    build_graph_model,
    build_hypergraph_model,
    build_model,
    cut_net,
    dump_model,
    edge_cut,
    enumerate_triangles,
    eval_motif_conductance,
    grow_ball,
    read_metis,
    volume_assumption_holds,
)
from oracles import (
    contracted_net_weights,
    cooccurrence_weights,
    cut_motifs_of_blocks,
    random_connected_graph,
)


def make_instance(rng, n=None, p=None, layers=1):
    n = n or int(rng.integers(6, 30))
    p = p or float(rng.uniform(0.15, 0.5))
    g = random_connected_graph(rng, n, p)
    seed = int(rng.integers(n))
    ball = grow_ball(g, seed, layers=layers, min_size=0)
    motifs = enumerate_triangles(ball.hood, ball.s_mask)
    return g, ball, motifs


def model_mapping(ball, model):
    """hood-local -> model-node mapping implied by the published fields."""
    mod = np.full(ball.hood.n, model.t_local, dtype=np.int64)
    s_local = np.flatnonzero(ball.s_mask)
    mod[s_local] = np.arange(len(s_local))
    return mod


def test_graph_model_weights_are_cooccurrence_counts():
    rng = np.random.default_rng(1)
    for _ in range(25):
        g, ball, motifs = make_instance(rng)
        m = build_graph_model(ball, motifs)
        mapping = model_mapping(ball, m)
        want = cooccurrence_weights(motifs.triples, mapping)
        got = {}
        for v in range(m.graph.n):
            for j in range(m.graph.indptr[v], m.graph.indptr[v + 1]):
                u = int(m.graph.indices[j])
                if v < u:
                    got[(v, u)] = int(m.graph.edge_weight[j])
        assert got == dict(want)


def test_graph_model_degree_is_twice_motif_degree():
    rng = np.random.default_rng(2)
    for _ in range(25):
        g, ball, motifs = make_instance(rng)
        m = build_graph_model(ball, motifs)
        s_local = np.flatnonzero(ball.s_mask)
        for i, hv in enumerate(s_local):
            assert m.weighted_degree[i] == 2 * motifs.motif_degree[hv]


def test_hypergraph_model_nets_merge_parallel():
    rng = np.random.default_rng(3)
    for _ in range(25):
        g, ball, motifs = make_instance(rng)
        m = build_hypergraph_model(ball, motifs)
        mapping = model_mapping(ball, m)
        want = contracted_net_weights(motifs.triples, mapping)
        got = {}
        for e in range(m.hgraph.num_nets):
            pins = tuple(int(x) for x in m.hgraph.net_pins(e))
            assert pins not in got  # parallel nets really merged
            got[pins] = int(m.hgraph.net_weight[e])
        assert got == dict(want)
        assert int(m.hgraph.net_weight.sum()) == motifs.count
        m.hgraph.validate()


def test_hypergraph_degree_is_motif_degree():
    rng = np.random.default_rng(4)
    for _ in range(25):
        g, ball, motifs = make_instance(rng)
        m = build_hypergraph_model(ball, motifs)
        s_local = np.flatnonzero(ball.s_mask)
        for i, hv in enumerate(s_local):
            assert m.weighted_degree[i] == motifs.motif_degree[hv]


def test_true_node_weights():
    rng = np.random.default_rng(5)
    g, ball, motifs = make_instance(rng, n=20, p=0.3)
    m = build_graph_model(ball, motifs)
    assert np.all(m.true_node_weight[: m.t_local] == 1)
    assert m.true_node_weight[m.t_local] == g.n - ball.size
    assert m.n_nodes == ball.size + 1


def test_cross_model_eval_agrees_bitwise():
    rng = np.random.default_rng(6)
    for _ in range(40):
        g, ball, motifs = make_instance(rng)
        mg = build_graph_model(ball, motifs)
        mh = build_hypergraph_model(ball, motifs)
        n = mg.n_nodes
        block = rng.integers(0, 2, size=n).astype(np.int8)
        block[mg.seed_local] = 0
        block[mg.t_local] = 1
        a = eval_motif_conductance(mg, block)
        b = eval_motif_conductance(mh, block)
        assert a.degenerate == b.degenerate
        if not a.degenerate:
            assert a.value == b.value  # identical floats, not just close


def test_eval_counts_cut_motifs_exactly():
    rng = np.random.default_rng(7)
    for _ in range(30):
        g, ball, motifs = make_instance(rng)
        mh = build_hypergraph_model(ball, motifs)
        n = mh.n_nodes
        block = rng.integers(0, 2, size=n).astype(np.int8)
        block[mh.seed_local] = 0
        block[mh.t_local] = 1
        # push model blocks back onto the full graph
        block_of = np.full(g.n, int(block[mh.t_local]), dtype=np.int64)
        block_of[mh.globals_s] = block[: mh.t_local]
        want_cut = cut_motifs_of_blocks(g, block_of)
        assert cut_net(mh.hgraph, block) == want_cut
        mg = build_graph_model(ball, motifs)
        assert edge_cut(mg.graph, block) == 2 * want_cut


def test_degenerate_eval():
    rng = np.random.default_rng(8)
    g, ball, motifs = make_instance(rng, n=15, p=0.35)
    m = build_graph_model(ball, motifs)
    block = np.zeros(m.n_nodes, dtype=np.int8)
    block[m.seed_local] = 1  # seed alone
    if m.weighted_degree[m.seed_local] == 0:
        cond = eval_motif_conductance(m, block)
        assert cond.degenerate and cond.value == 1.0
    # an all-zero-volume side is degenerate regardless of the cut
    empty = build_graph_model(
        ball, enumerate_triangles(ball.hood, np.zeros(ball.hood.n, dtype=bool))
    )
    assert empty.no_motifs
    cond = eval_motif_conductance(empty, np.zeros(empty.n_nodes, dtype=np.int8))
    assert cond.degenerate and cond.value == 1.0


def test_no_motifs_flag_square():
    g = np.array([0, 1, 2, 3]), np.array([1, 2, 3, 0])
    from lomoc import graph_from_arcs

    sq = graph_from_arcs(4, *g)
    ball = grow_ball(sq, 0, layers=2, min_size=0)
    motifs = enumerate_triangles(ball.hood, ball.s_mask)
    m = build_model(ball, motifs, "graph")
    assert m.no_motifs
    assert m.n_motifs == 0


def test_bad_kind():
    rng = np.random.default_rng(9)
    g, ball, motifs = make_instance(rng)
    with pytest.raises(ValueError, match="kind"):
        build_model(ball, motifs, "clique")


def test_dump_graph_model_round_trips(tmp_path):
    rng = np.random.default_rng(10)
    g, ball, motifs = make_instance(rng, n=18, p=0.4)
    m = build_graph_model(ball, motifs)
    path = str(tmp_path / "model.metis")
    dump_model(m, path)
    back = read_metis(path)
    assert back.n == m.n_nodes
    assert np.array_equal(back.node_weight, m.true_node_weight)
    assert np.array_equal(back.indices, m.graph.indices)
    assert np.array_equal(back.edge_weight, m.graph.edge_weight)


def test_volume_assumption_helper():
    rng = np.random.default_rng(11)
    g, ball, motifs = make_instance(rng, n=25, p=0.25)
    got = volume_assumption_holds(g, ball)
    all_m = enumerate_triangles(g, np.ones(g.n, dtype=bool))
    s = ball.members_global()
    vol_s = int(all_m.motif_degree[s].sum())
    assert got == (vol_s <= int(all_m.motif_degree.sum()) - vol_s)
