import numpy as np

from lomoc import enumerate_triangles, graph_from_arcs
from oracles import brute_triangles, random_graph


def as_set(mc):
    return {tuple(int(x) for x in row) for row in mc.triples}


def test_matches_oracle_across_densities():
    rng = np.random.default_rng(0)
    for trial in range(60):
        n = int(rng.integers(3, 60))
        p = float(rng.uniform(0.05, 0.7))
        g = random_graph(rng, n, p)
        mc = enumerate_triangles(g, np.ones(n, dtype=bool))
        want = brute_triangles(g)
        assert as_set(mc) == want
        # per-node degrees implied by the triple list
        deg = np.zeros(n, dtype=np.int64)
        for (i, j, k) in want:
            deg[i] += 1
            deg[j] += 1
            deg[k] += 1
        assert np.array_equal(mc.motif_degree, deg)


def test_restriction_to_marked_nodes():
    rng = np.random.default_rng(4)
    for _ in range(40):
        n = int(rng.integers(4, 40))
        g = random_graph(rng, n, 0.3)
        s = rng.random(n) < 0.4
        mc = enumerate_triangles(g, s)
        assert as_set(mc) == brute_triangles(g, s)
        # degrees count only kept triangles, including on unmarked corners
        deg = np.zeros(n, dtype=np.int64)
        for (i, j, k) in brute_triangles(g, s):
            deg[i] += 1
            deg[j] += 1
            deg[k] += 1
        assert np.array_equal(mc.motif_degree, deg)


def test_triples_sorted_and_unique():
    rng = np.random.default_rng(8)
    g = random_graph(rng, 30, 0.4)
    mc = enumerate_triangles(g, np.ones(30, dtype=bool))
    rows = [tuple(r) for r in mc.triples.tolist()]
    assert all(a < b < c for (a, b, c) in rows)
    assert len(rows) == len(set(rows))


def test_empty_and_triangle_free():
    g = graph_from_arcs(1, np.array([], dtype=np.int64), np.array([], dtype=np.int64))
    mc = enumerate_triangles(g, np.ones(1, dtype=bool))
    assert mc.count == 0
    # square has no triangles
    sq = graph_from_arcs(4, np.array([0, 1, 2, 3]), np.array([1, 2, 3, 0]))
    mc = enumerate_triangles(sq, np.ones(4, dtype=bool))
    assert mc.count == 0
    assert mc.degree_of_set(np.array([0, 1, 2, 3])) == 0


def test_deterministic():
    rng = np.random.default_rng(12)
    g = random_graph(rng, 40, 0.3)
    s = np.ones(40, dtype=bool)
    a = enumerate_triangles(g, s)
    b = enumerate_triangles(g, s)
    assert np.array_equal(a.triples, b.triples)
    assert np.array_equal(a.motif_degree, b.motif_degree)
