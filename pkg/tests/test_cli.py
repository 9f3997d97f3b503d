import json
import subprocess
import sys

import numpy as np
import pytest

from lomoc import ClusterConfig, find_cluster, load_graph, write_metis
from lomoc.cli import main
from oracles import random_connected_graph


def write_two_cliques(path, k=6):
    us, vs = [], []
    for a in range(k):
        for b in range(a + 1, k):
            us.append(a)
            vs.append(b)
            us.append(a + k)
            vs.append(b + k)
    us.append(0)
    vs.append(k)
    lines = "\n".join(f"{u} {v}" for u, v in zip(us, vs))
    path.write_text(lines + "\n")


def run_main(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def parse_jsonl(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def canonical(text):
    """Zero out wall-clock fields so reruns can be compared byte for byte."""
    rows = []
    for obj in parse_jsonl(text):
        for key in list(obj):
            if key.endswith("_ms"):
                obj[key] = 0.0
        rows.append(json.dumps(obj, sort_keys=True, separators=(",", ":")))
    return "\n".join(rows)


def test_cluster_subcommand_matches_library(tmp_path, capsys):
    f = tmp_path / "g.el"
    write_two_cliques(f)
    code, out = run_main(
        ["cluster", "--graph", str(f), "--format", "edgelist", "--seed", "2",
         "--alpha", "1", "--beta", "10", "--rng-seed", "9", "--emit-members"],
        capsys,
    )
    assert code == 0
    rec = parse_jsonl(out)[0]
    assert rec["type"] == "result"
    assert rec["algo"] == "lomoc"
    g = load_graph(str(f), "edgelist")
    res = find_cluster(g, 2, ClusterConfig(alpha=1, beta=10, rng_seed=9))
    assert rec["phi_mu"] == res.phi
    assert rec["cluster_size"] == res.size
    assert rec["members"] == [int(x) for x in g.orig_ids[res.cluster]]


def test_metis_and_edgelist_agree(tmp_path, capsys):
    rng = np.random.default_rng(0)
    g = random_connected_graph(rng, 25, 0.25)
    fm = tmp_path / "g.metis"
    write_metis(g, str(fm))
    fe = tmp_path / "g.el"
    src = np.repeat(np.arange(g.n), np.diff(g.indptr))
    keep = src < g.indices
    fe.write_text("\n".join(f"{u} {v}" for u, v in zip(src[keep], g.indices[keep])) + "\n")
    # seed label 5 in the edge list equals metis label 6 (1-based)
    args = ["--alpha", "1", "--beta", "5", "--rng-seed", "4"]
    code1, out1 = run_main(["cluster", "--graph", str(fm), "--seed", "6"] + args, capsys)
    code2, out2 = run_main(
        ["cluster", "--graph", str(fe), "--format", "edgelist", "--seed", "5"] + args, capsys
    )
    r1, r2 = parse_jsonl(out1)[0], parse_jsonl(out2)[0]
    assert (code1, code2) == (0, 0)
    assert r1["phi_mu"] == r2["phi_mu"]
    assert r1["cluster_size"] == r2["cluster_size"]


def test_bench_records_and_summary(tmp_path, capsys):
    f = tmp_path / "g.el"
    write_two_cliques(f)
    code, out = run_main(
        ["bench", "--graph", str(f), "--format", "edgelist", "--seeds-count", "5",
         "--alpha", "1", "--beta", "6", "--rng-seed", "2"],
        capsys,
    )
    assert code == 0
    rows = parse_jsonl(out)
    results = [r for r in rows if r["type"] == "result"]
    summaries = [r for r in rows if r["type"] == "summary"]
    assert {r["algo"] for r in results} == {"lomoc", "mappr"}
    assert len(results) == 10
    assert len(summaries) == 2
    for s in summaries:
        grp = [r for r in results if r["algo"] == s["algo"]]
        live = [r for r in grp if not r["degenerate"]]
        assert s["n_seeds"] == len(grp)
        assert s["n_degenerate"] == len(grp) - len(live)
        if live:
            want = sum(r["phi_mu"] for r in live) / len(live)
            assert abs(s["mean_phi_mu"] - want) < 1e-12
        want_all = sum(r["phi_mu"] for r in grp) / len(grp)
        assert abs(s["mean_phi_mu_with_sentinels"] - want_all) < 1e-12


def test_bench_deterministic_modulo_timing(tmp_path):
    f = tmp_path / "g.el"
    write_two_cliques(f)
    cmd = [sys.executable, "-m", "lomoc.cli", "bench", "--graph", str(f),
           "--format", "edgelist", "--seeds-count", "4", "--alpha", "1",
           "--beta", "5", "--rng-seed", "11", "--threads", "1"]
    a = subprocess.run(cmd, capture_output=True, text=True)
    b = subprocess.run(cmd, capture_output=True, text=True)
    assert a.returncode == 0 and b.returncode == 0
    assert canonical(a.stdout) == canonical(b.stdout)
    assert canonical(a.stdout)  # nonempty


def test_profile_curves(tmp_path, capsys):
    recs = [
        {"type": "result", "graph": "g", "algo": "a", "seed": 1, "phi_mu": 0.0,
         "cluster_size": 3, "degenerate": False, "time_ms": 1.0},
        {"type": "result", "graph": "g", "algo": "b", "seed": 1, "phi_mu": 0.0,
         "cluster_size": 3, "degenerate": False, "time_ms": 2.0},
        {"type": "result", "graph": "g", "algo": "a", "seed": 2, "phi_mu": 0.1,
         "cluster_size": 3, "degenerate": False, "time_ms": 1.0},
        {"type": "result", "graph": "g", "algo": "b", "seed": 2, "phi_mu": 0.3,
         "cluster_size": 3, "degenerate": False, "time_ms": 4.0},
        {"type": "result", "graph": "g", "algo": "a", "seed": 3, "phi_mu": 0.2,
         "cluster_size": 3, "degenerate": False, "time_ms": 1.0},
        {"type": "result", "graph": "g", "algo": "b", "seed": 3, "phi_mu": 0.0,
         "cluster_size": 3, "degenerate": False, "time_ms": 8.0},
    ]
    f = tmp_path / "r.jsonl"
    f.write_text("\n".join(json.dumps(r) for r in recs) + "\n")
    code, out = run_main(["profile", "--records", str(f)], capsys)
    assert code == 0
    rows = parse_jsonl(out)
    prof = rows[0]
    assert prof["type"] == "profile"
    pa = prof["phi_mu"]["a"]
    pb = prof["phi_mu"]["b"]
    # seed1: both zero -> ratio 1 for both; seed2: a best; seed3: b best with a at inf
    assert pa["n"] == 3 and pb["n"] == 3
    assert pa["taus"][0] == 1.0 and pa["fractions"][0] == pytest.approx(1 / 3)
    assert len(pa["taus"]) == 2  # the infinite ratio never enters the curve
    assert pb["taus"][:2] == [1.0, 1.0]
    assert pb["taus"][-1] == pytest.approx(3.0)
    # recomputed summaries follow
    assert any(r["type"] == "summary" and r["algo"] == "a" for r in rows[1:])


def test_out_flag_writes_file(tmp_path, capsys):
    f = tmp_path / "g.el"
    write_two_cliques(f)
    dest = tmp_path / "res.jsonl"
    code = main(["cluster", "--graph", str(f), "--format", "edgelist", "--seed", "0",
                 "--alpha", "1", "--beta", "4", "--out", str(dest)])
    assert code == 0
    assert capsys.readouterr().out == ""
    rec = parse_jsonl(dest.read_text())[0]
    assert rec["type"] == "result"


def test_error_exit_codes(tmp_path, capsys):
    f = tmp_path / "g.el"
    write_two_cliques(f)
    assert main(["cluster", "--graph", str(tmp_path / "nope.el"), "--format",
                 "edgelist", "--seed", "0"]) == 1
    assert main(["cluster", "--graph", str(f), "--format", "edgelist",
                 "--seed", "999"]) == 1
    bad = tmp_path / "bad.metis"
    bad.write_text("1 zz\n\n")
    assert main(["cluster", "--graph", str(bad), "--seed", "1"]) == 1
    with pytest.raises(SystemExit) as exc:
        main(["cluster", "--graph", str(f), "--format", "csv", "--seed", "0"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["noncommand"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_threads_flag_runs(tmp_path, capsys):
    f = tmp_path / "g.el"
    write_two_cliques(f)
    code, out = run_main(
        ["bench", "--graph", str(f), "--format", "edgelist", "--seeds-count", "3",
         "--alpha", "1", "--beta", "4", "--rng-seed", "3", "--threads", "2"],
        capsys,
    )
    assert code == 0
    rows = parse_jsonl(out)
    assert sum(1 for r in rows if r["type"] == "result") == 6
