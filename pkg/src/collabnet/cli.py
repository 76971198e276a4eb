"""Command-line interface: one subcommand per pipeline stage."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .config import ConfigError, RunConfig, default_workers
from .corpus import generate_fixture_chunks, parse_corpus
from .distances import distance_histogram, sampled_mean_distance, small_world_index, weighted_comparison
from .graphml_io import import_graphml
from .percolation import PercolationPlan, Strategy, hub_analysis, percolate, tipping_point
from .pipeline import PipelineError, _csv_bytes, _json_bytes, run_pipeline
from .powerlaw import InsufficientTailError, UnboundedFitError, ccdf, fit_tail
from .records import CorpusFilter
from .report import MetricReport, build_metric_report, compare_reports


def _load_network(path: str):
    with open(path, "rb") as fh:
        return import_graphml(fh)


def _write(path: str, data: bytes) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_bytes(data)


def cmd_fixture(args) -> int:
    with open(args.out, "wb") as fh:
        for chunk in generate_fixture_chunks(
            args.seed, args.authors, args.papers, args.mean_authors
        ):
            fh.write(chunk)
    print(f"wrote fixture corpus with {args.papers} papers to {args.out}")
    return 0


def cmd_ingest(args) -> int:
    stream = parse_corpus(args.corpus, CorpusFilter(args.year_min, args.year_max))
    for _ in stream:
        pass
    payload = _json_bytes(stream.summary.as_dict())
    if args.summary:
        _write(args.summary, payload)
    else:
        sys.stdout.write(payload.decode())
    return 0


def cmd_metrics(args) -> int:
    g = _load_network(args.graphml)
    report = build_metric_report(g)
    _write(args.out, report.to_json().encode())
    print(f"metrics for {g.n_nodes} nodes / {g.n_edges} edges -> {args.out}")
    return 0


def cmd_distances(args) -> int:
    g = _load_network(args.graphml)
    if args.exact and g.n_nodes > 100_000 and not args.force:
        print(
            "refusing exact all-pairs on >1e5 nodes without --force "
            f"(network has {g.n_nodes})",
            file=sys.stderr,
        )
        return 2
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if args.exact:
        hist = distance_histogram(g)
        shares = hist.shares()
        rows = [(l, c, repr(shares[l])) for l, c in sorted(hist.counts.items())]
        (out / "distances.csv").write_bytes(_csv_bytes("length,count,share", rows))
        sw = small_world_index(g.n_nodes, g.n_edges, hist.mean)
        payload = {
            "mode": "exact",
            "mean": hist.mean,
            "diameter": hist.diameter,
            "diameter_geodesic_count": hist.diameter_geodesic_count,
            "connected_pair_share": hist.connected_pair_share,
            "small_world": {"k": sw.k, "expected_d": sw.expected_d, "is_small_world": sw.is_small_world},
        }
    else:
        est = sampled_mean_distance(g, args.sample_pairs, args.seed)
        sw = small_world_index(g.n_nodes, g.n_edges, est.mean)
        payload = {
            "mode": "sampled",
            "mean": est.mean,
            "ci95": list(est.ci95),
            "sample_size": est.sample_size,
            "seed": est.seed,
            "small_world": {"k": sw.k, "expected_d": sw.expected_d, "is_small_world": sw.is_small_world},
        }
    (out / "distances.json").write_bytes(_json_bytes(payload))
    wc = weighted_comparison(g, args.sample_pairs, args.seed)
    (out / "weighted_comparison.json").write_bytes(
        _json_bytes(
            {
                "mean_weighted_distance": wc.mean_weighted_distance,
                "mean_hops_of_weighted_geodesic": wc.mean_hops_of_weighted_geodesic,
                "mean_unweighted_distance": wc.mean_unweighted_distance,
                "mean_weight_of_unweighted_geodesic": wc.mean_weight_of_unweighted_geodesic,
                "sample_size": wc.sample_size,
                "seed": wc.seed,
            }
        )
    )
    print(f"distance analysis ({payload['mode']}) -> {args.out_dir}")
    return 0


def cmd_powerlaw(args) -> int:
    g = _load_network(args.graphml)
    degrees = g.degrees()
    if args.ccdf:
        curve = ccdf(degrees)
        _write(args.ccdf, _csv_bytes("degree,ccdf", [(d, repr(c)) for d, c in curve.points]))
    try:
        fit = fit_tail(degrees, args.bootstrap, args.seed, workers=args.workers)
    except (InsufficientTailError, UnboundedFitError) as exc:
        _write(args.out, _json_bytes({"error": str(exc)}))
        print(f"tail fit unavailable: {exc}", file=sys.stderr)
        return 0
    _write(
        args.out,
        _json_bytes(
            {
                "xmin": fit.xmin,
                "alpha": fit.alpha,
                "tail_size": fit.tail_size,
                "tail_share": fit.tail_share,
                "ks_statistic": fit.ks_statistic,
                "p_value": fit.p_value,
                "plausible": fit.plausible,
                "bootstrap_count": fit.bootstrap_count,
                "seed": fit.seed,
            }
        ),
    )
    print(f"power-law tail: xmin={fit.xmin} alpha={fit.alpha:.3f} p={fit.p_value}")
    return 0


def cmd_percolate(args) -> int:
    g = _load_network(args.graphml)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    step = int(args.step) if args.step >= 1 else args.step
    rows = []
    tips = {}
    for strategy in (Strategy.RANDOM, Strategy.DEGREE_DRIVEN, Strategy.EIGENVECTOR_DRIVEN):
        plan = PercolationPlan(strategy, args.steps, step, args.repetitions, args.seed)
        trace = percolate(g, plan)
        for rep, pts in enumerate(trace.repetition_points):
            rows.extend(
                (strategy.value, rep, repr(f), repr(gs), repr(ss)) for f, gs, ss in pts
            )
        rows.extend(
            (strategy.value, "mean", repr(f), repr(gs), repr(ss)) for f, gs, ss in trace.points
        )
        tips[strategy.value] = tipping_point(trace)
    (out / "percolation.csv").write_bytes(
        _csv_bytes("strategy,repetition,removed_fraction,giant_share,second_share", rows)
    )
    hubs = hub_analysis(g, args.percentile)
    (out / "hubs.json").write_bytes(
        _json_bytes(
            {
                "percentile": hubs.percentile,
                "threshold_degree": hubs.threshold_degree,
                "hub_count": hubs.hub_count,
                "giant_share_before": hubs.giant_share_before,
                "giant_share_after": hubs.giant_share_after,
                "tipping_points": tips,
            }
        )
    )
    print(f"percolation traces -> {args.out_dir} (tipping points: {tips})")
    return 0


def cmd_build(args) -> int:
    cfg = RunConfig(
        corpus=args.corpus,
        out_dir=args.out_dir,
        year_min=args.year_min,
        year_max=args.year_max,
        networks=tuple(args.networks),
        run_metrics=False,
        run_distances=False,
        run_powerlaw=False,
        run_percolation=False,
    )
    run_pipeline(cfg)
    print(f"built {len(args.networks)} network(s) -> {args.out_dir}")
    return 0


def cmd_report(args) -> int:
    if args.config:
        cfg = RunConfig.load(args.config)
    else:
        cfg = RunConfig(
            corpus=args.corpus,
            graphml=args.graphml,
            out_dir=args.out_dir,
            year_min=args.year_min,
            year_max=args.year_max,
            seed=args.seed,
            sample_pairs=args.sample_pairs,
            bootstrap_count=args.bootstrap,
            workers=args.workers,
        )
    manifest = run_pipeline(cfg)
    print(f"pipeline complete: {len(manifest['artifacts'])} artifacts in {cfg.out_dir}")
    return 0


def cmd_compare(args) -> int:
    report_a = MetricReport.from_json(Path(args.report_a).read_text())
    report_b = MetricReport.from_json(Path(args.report_b).read_text())
    tolerances = None
    if args.tolerances:
        tolerances = json.loads(Path(args.tolerances).read_text())
    diff = compare_reports(report_a, report_b, tolerances)
    for entry in diff.entries:
        if entry.delta not in (None, 0) or not entry.within_tolerance:
            status = "ok" if entry.within_tolerance else "FAIL"
            print(f"{status}: {entry.field} {entry.value_a} vs {entry.value_b}")
    if diff.ok:
        print("reports match within tolerance")
        return 0
    print(f"{len(diff.failing())} field(s) out of tolerance", file=sys.stderr)
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="collabnet",
        description="Build co-authorship networks from bibliographic XML and "
        "compute their structural statistics.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log stage progress")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fixture", help="generate a synthetic corpus")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--authors", type=int, default=100)
    p.add_argument("--papers", type=int, default=200)
    p.add_argument("--mean-authors", type=float, default=2.5)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_fixture)

    p = sub.add_parser("ingest", help="parse a corpus and report summary counts")
    p.add_argument("corpus")
    p.add_argument("--year-min", type=int, default=1936)
    p.add_argument("--year-max", type=int, default=2008)
    p.add_argument("--summary", help="write summary JSON here instead of stdout")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("build", help="build and export collaboration networks")
    p.add_argument("corpus")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--year-min", type=int, default=1936)
    p.add_argument("--year-max", type=int, default=2008)
    p.add_argument(
        "--networks", nargs="+", default=["whole", "conference", "journal"],
        choices=["whole", "conference", "journal"],
    )
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("metrics", help="structural metrics of a GraphML network")
    p.add_argument("graphml")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("distances", help="geodesic statistics of a GraphML network")
    p.add_argument("graphml")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--exact", action="store_true", help="exact all-pairs BFS")
    p.add_argument("--force", action="store_true", help="allow exact runs on >1e5 nodes")
    p.add_argument("--sample-pairs", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_distances)

    p = sub.add_parser("powerlaw", help="power-law tail fit of the degree distribution")
    p.add_argument("graphml")
    p.add_argument("--out", required=True)
    p.add_argument("--ccdf", help="also write the CCDF curve CSV here")
    p.add_argument("--bootstrap", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=default_workers())
    p.set_defaults(func=cmd_powerlaw)

    p = sub.add_parser("percolate", help="percolation traces and hub analysis")
    p.add_argument("graphml")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--steps", type=int, default=20)
    p.add_argument(
        "--step", type=float, default=0.0075,
        help="fraction of nodes per step, or an integer node count",
    )
    p.add_argument("--repetitions", type=int, default=10)
    p.add_argument("--percentile", type=float, default=99.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_percolate)

    p = sub.add_parser("report", help="run the full pipeline")
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--corpus")
    p.add_argument("--graphml")
    p.add_argument("--out-dir", default="out")
    p.add_argument("--year-min", type=int, default=1936)
    p.add_argument("--year-max", type=int, default=2008)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sample-pairs", type=int, default=10000)
    p.add_argument("--bootstrap", type=int, default=1000)
    p.add_argument("--workers", type=int, default=default_workers())
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("compare", help="diff two metric reports under tolerances")
    p.add_argument("report_a")
    p.add_argument("report_b")
    p.add_argument("--tolerances", help="JSON: field -> {abs: x, rel: y}")
    p.set_defaults(func=cmd_compare)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(asctime)s %(name)s %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except PipelineError as exc:
        sys.stderr.write(json.dumps(exc.as_dict()) + "\n")
        return 1
    except ConfigError as exc:
        sys.stderr.write(json.dumps({"error": str(exc)}) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
