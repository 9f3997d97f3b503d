"""Command line interface.

Subcommands:
  cluster  one seed query, one JSON result line
  bench    run the local search and the PPR baseline over sampled seeds,
           emitting JSONL records plus one summary line per algorithm
  profile  read bench records and emit performance-profile curves

All randomness is keyed by --rng-seed; with --threads 1 the emitted records
are reproducible run to run (timing fields aside).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .appr import appr_cluster, build_motif_graph
from .driver import ClusterConfig, ClusterResult, find_cluster
from .graph import Graph, GraphIntegrityError, GraphParseError, load_graph


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", required=True, help="input graph file")
    p.add_argument("--format", choices=("metis", "edgelist"), default="metis")
    p.add_argument("--model", choices=("graph", "hypergraph"), default="graph")
    p.add_argument("--alpha", type=int, default=3, help="ball repetitions")
    p.add_argument("--beta", type=int, default=80, help="partition repetitions per ball")
    p.add_argument("--eps-lo", type=float, default=0.05)
    p.add_argument("--eps-hi", type=float, default=0.90)
    p.add_argument("--lp-rounds", type=int, default=3)
    p.add_argument("--time-limit", type=float, default=3600.0, help="seconds per seed")
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--emit-members", action="store_true", help="include cluster members")
    p.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lomoc", description="local motif clustering")
    sub = ap.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("cluster", help="cluster around one seed")
    _add_common(pc)
    pc.add_argument("--seed", type=int, required=True, help="seed node (original label)")

    pb = sub.add_parser("bench", help="compare against the PPR baseline over sampled seeds")
    _add_common(pb)
    pb.add_argument("--seeds-count", type=int, default=10)

    pp = sub.add_parser("profile", help="performance profiles from bench records")
    pp.add_argument("--records", required=True, help="JSONL file written by bench")
    pp.add_argument("--out", default=None)
    return ap


def _config_from(args: argparse.Namespace) -> ClusterConfig:
    return ClusterConfig(
        model=args.model,
        alpha=args.alpha,
        beta=args.beta,
        eps_lo=args.eps_lo,
        eps_hi=args.eps_hi,
        lp_rounds=args.lp_rounds,
        time_limit=args.time_limit,
        rng_seed=args.rng_seed,
    )


def _emit(fh, obj: dict) -> None:
    fh.write(json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n")


def _internal_seed(g: Graph, label: int) -> int:
    pos = int(np.searchsorted(g.orig_ids, label))
    if pos >= g.n or g.orig_ids[pos] != label:
        raise ValueError(f"seed label {label} not present in the graph")
    return pos


def _result_record(graph_name: str, algo: str, g: Graph, seed_internal: int,
                   res: ClusterResult, emit_members: bool) -> dict:
    rec = {
        "type": "result",
        "graph": graph_name,
        "algo": algo,
        "seed": int(g.orig_ids[seed_internal]),
        "phi_mu": res.phi,
        "cluster_size": res.size,
        "degenerate": res.degenerate,
        "time_ms": res.timings.get("total_ms", 0.0),
    }
    if emit_members:
        rec["members"] = [int(x) for x in g.orig_ids[res.cluster]]
    return rec


def _summary_record(graph_name: str, algo: str, records: list[dict], extra_ms: float = 0.0) -> dict:
    phis = [r["phi_mu"] for r in records if not r["degenerate"]]
    sizes = [r["cluster_size"] for r in records if not r["degenerate"]]
    times = [r["time_ms"] for r in records]
    all_phis = [r["phi_mu"] for r in records]

    def geo(xs):
        xs = [max(float(x), 1e-12) for x in xs]
        return math.exp(sum(math.log(x) for x in xs) / len(xs)) if xs else 0.0

    return {
        "type": "summary",
        "graph": graph_name,
        "algo": algo,
        "n_seeds": len(records),
        "n_degenerate": sum(1 for r in records if r["degenerate"]),
        "mean_phi_mu": (sum(phis) / len(phis)) if phis else None,
        "mean_phi_mu_with_sentinels": (sum(all_phis) / len(all_phis)) if all_phis else None,
        "geomean_cluster_size": geo(sizes) if sizes else None,
        "geomean_time_ms": geo(times) if times else None,
        "total_time_ms": sum(times) + extra_ms,
        "prep_ms": extra_ms,
    }


def _ours_one(payload):
    g, seed, cfg = payload
    return find_cluster(g, seed, cfg)


def _appr_one(payload):
    w, seed = payload
    return appr_cluster(w, seed)


def _run_many(fn, payloads, threads: int):
    if threads <= 1:
        return [fn(p) for p in payloads]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, payloads))


def cmd_cluster(args: argparse.Namespace, fh) -> int:
    g = load_graph(args.graph, args.format)
    seed = _internal_seed(g, args.seed)
    res = find_cluster(g, seed, _config_from(args))
    _emit(fh, _result_record(os.path.basename(args.graph), "lomoc", g, seed, res, args.emit_members))
    return 0


def cmd_bench(args: argparse.Namespace, fh) -> int:
    g = load_graph(args.graph, args.format)
    name = os.path.basename(args.graph)
    if g.n == 0:
        raise ValueError("graph has no nodes")
    k = min(args.seeds_count, g.n)
    rng = np.random.default_rng(args.rng_seed)
    seeds = [int(s) for s in rng.choice(g.n, size=k, replace=False)]
    cfg = _config_from(args)

    ours = _run_many(_ours_one, [(g, s, cfg) for s in seeds], args.threads)
    ours_recs = []
    for s, res in zip(seeds, ours):
        rec = _result_record(name, "lomoc", g, s, res, args.emit_members)
        ours_recs.append(rec)
        _emit(fh, rec)
    _emit(fh, _summary_record(name, "lomoc", ours_recs))

    w = build_motif_graph(g)
    base = _run_many(_appr_one, [(w, s) for s in seeds], args.threads)
    base_recs = []
    for s, res in zip(seeds, base):
        rec = _result_record(name, "mappr", g, s, res, args.emit_members)
        base_recs.append(rec)
        _emit(fh, rec)
    _emit(fh, _summary_record(name, "mappr", base_recs, extra_ms=w.build_ms))
    return 0


def _profile_curves(records: list[dict], key: str) -> dict:
    by_seed: dict = {}
    algos = sorted({r["algo"] for r in records})
    for r in records:
        by_seed.setdefault((r["graph"], r["seed"]), {})[r["algo"]] = float(r[key])
    ratios = {a: [] for a in algos}
    for _, vals in sorted(by_seed.items()):
        if len(vals) != len(algos):
            continue  # seed not run under every algorithm
        best = min(vals.values())
        for a in algos:
            x = vals[a]
            if x == best == 0.0:
                ratios[a].append(1.0)
            elif best == 0.0:
                ratios[a].append(math.inf)
            else:
                ratios[a].append(x / best)
    curves = {}
    for a in algos:
        rs = sorted(ratios[a])
        n = len(rs)
        taus, fracs = [], []
        for i, t in enumerate(rs):
            if math.isinf(t):
                break
            taus.append(t)
            fracs.append((i + 1) / n)
        curves[a] = {"taus": taus, "fractions": fracs, "n": n}
    return curves


def cmd_profile(args: argparse.Namespace, fh) -> int:
    records = []
    summaries = []
    with open(args.records, "r", encoding="utf-8") as rf:
        for line in rf:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            if obj.get("type") == "result":
                records.append(obj)
            elif obj.get("type") == "summary":
                summaries.append(obj)
    if not records:
        raise ValueError("no result records found")
    out = {
        "type": "profile",
        "phi_mu": _profile_curves(records, "phi_mu"),
        "time_ms": _profile_curves(records, "time_ms"),
    }
    _emit(fh, out)
    # recompute the aggregate block from raw records so it can be checked
    # against what bench reported
    for (graph_name, algo) in sorted({(r["graph"], r["algo"]) for r in records}):
        grp = [r for r in records if r["graph"] == graph_name and r["algo"] == algo]
        prep = 0.0
        for s in summaries:
            if s.get("graph") == graph_name and s.get("algo") == algo:
                prep = s.get("prep_ms", 0.0)
        _emit(fh, _summary_record(graph_name, algo, grp, extra_ms=prep))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fh = sys.stdout
    close = False
    try:
        if args.out:
            fh = open(args.out, "w", encoding="utf-8")
            close = True
        if args.command == "cluster":
            return cmd_cluster(args, fh)
        if args.command == "bench":
            return cmd_bench(args, fh)
        return cmd_profile(args, fh)
    except (GraphParseError, GraphIntegrityError, FileNotFoundError, ValueError) as exc:
        print(f"lomoc: error: {exc}", file=sys.stderr)
        return 1
    finally:
        if close:
            fh.close()


if __name__ == "__main__":
    sys.exit(main())
