"""End-to-end orchestration: ingest, build, analyze, report, manifest."""
from __future__ import annotations

import hashlib
import io
import json
import logging
import os
import time
from pathlib import Path

from .bibliometrics import (
    collaboration_level_distribution,
    productivity_distribution,
    write_distribution_csv,
)
from .config import RunConfig
from .corpus import parse_corpus
from .distances import (
    distance_histogram,
    sampled_mean_distance,
    small_world_index,
    weighted_comparison,
)
from .graphml_io import export_graphml, import_graphml, write_edgelist_csv
from .metrics import concentration
from .networks import AffiliationNetwork, CollaborationNetwork, build_affiliation, project_collaboration
from .percolation import PercolationPlan, Strategy, hub_analysis, percolate, tipping_point
from .powerlaw import InsufficientTailError, UnboundedFitError, ccdf, fit_tail
from .records import ALL_CLASSES, CorpusFilter, PubClass
from .report import build_metric_report

log = logging.getLogger("collabnet")

NETWORK_CLASSES = {
    "whole": ALL_CLASSES,
    "conference": frozenset({PubClass.CONFERENCE}),
    "journal": frozenset({PubClass.JOURNAL}),
}


class PipelineError(Exception):
    """Failure attributed to one module/operation, for structured CLI errors."""

    def __init__(self, module: str, operation: str, message: str):
        super().__init__(f"[{module}.{operation}] {message}")
        self.module = module
        self.operation = operation
        self.message = message

    def as_dict(self) -> dict:
        return {"module": self.module, "operation": self.operation, "error": self.message}


def _json_bytes(payload) -> bytes:
    return (json.dumps(payload, indent=2, sort_keys=True) + "\n").encode("utf-8")


class ArtifactWriter:
    """Atomic artifact writes with content hashing for the manifest."""

    def __init__(self, out_dir: str | Path):
        self.out_dir = Path(out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.records: list[dict] = []

    def write(self, rel_path: str, data: bytes | str) -> Path:
        if isinstance(data, str):
            data = data.encode("utf-8")
        path = self.out_dir / rel_path
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_bytes(data)
        os.replace(tmp, path)
        self.records.append(
            {"path": rel_path, "sha256": hashlib.sha256(data).hexdigest(), "bytes": len(data)}
        )
        return path

    def write_json(self, rel_path: str, payload) -> Path:
        return self.write(rel_path, _json_bytes(payload))

    def manifest(self, config: RunConfig, seeds: dict[str, int]) -> dict:
        return {
            "schema_version": 1,
            "config": json.loads(config.to_json()),
            "seeds": seeds,
            "artifacts": sorted(self.records, key=lambda r: r["path"]),
        }


def _csv_bytes(header: str, rows) -> bytes:
    buf = io.StringIO()
    buf.write(header + "\n")
    for row in rows:
        buf.write(",".join(str(x) for x in row) + "\n")
    return buf.getvalue().encode("utf-8")


def _write_bibliometrics(aff: AffiliationNetwork, writer: ArtifactWriter) -> None:
    prod = productivity_distribution(aff)
    buf = io.StringIO()
    write_distribution_csv(prod, buf)
    writer.write("productivity.csv", buf.getvalue())

    level_means = {}
    zero_counts = {}
    for label, classes in NETWORK_CLASSES.items():
        dist = collaboration_level_distribution(aff, classes)
        buf = io.StringIO()
        write_distribution_csv(dist, buf)
        suffix = "" if label == "whole" else f"_{label}"
        writer.write(f"collaboration_level{suffix}.csv", buf.getvalue())
        level_means[label] = dist.mean
        zero_counts[label] = dist.excluded_zeros
    writer.write_json(
        "bibliometrics.json",
        {
            "papers_per_author_mean": prod.mean,
            "papers_per_author_top10": prod.table_rows(10),
            "authors_per_paper_mean": level_means,
            "zero_author_papers": zero_counts,
            "productivity_max": max(prod.counts) if prod.counts else 0,
        },
    )


def _write_network_analyses(
    g: CollaborationNetwork, label: str, cfg: RunConfig, writer: ArtifactWriter
) -> None:
    base = f"{label}/"
    buf = io.BytesIO()
    export_graphml(g, buf)
    writer.write(base + "network.graphml", buf.getvalue())
    sbuf = io.StringIO()
    write_edgelist_csv(g, sbuf)
    writer.write(base + "edges.csv", sbuf.getvalue())

    if g.n_nodes == 0:
        log.warning("network %s is empty; skipping analyses", label)
        writer.write_json(base + "metrics.json", {"empty": True})
        return

    report = None
    if cfg.run_metrics:
        t0 = time.perf_counter()
        report = build_metric_report(g)
        writer.write(base + "metrics.json", report.to_json())
        degree_hist = report.histograms["degree"]
        writer.write(
            base + "degree.csv",
            _csv_bytes("degree,count", sorted(degree_hist.items())),
        )
        conc = concentration(g.degrees())
        writer.write(
            base + "lorenz.csv",
            _csv_bytes("top_share,collaboration_share", [(repr(a), repr(b)) for a, b in conc.lorenz_points]),
        )
        writer.write(
            base + "component_sizes.csv",
            _csv_bytes("size,count", sorted(report.histograms["component_size"].items())),
        )
        log.info("%s: metrics done in %.1fs", label, time.perf_counter() - t0)

    mean_distance = None
    diameter = None
    if cfg.run_distances:
        t0 = time.perf_counter()
        exact = cfg.force_exact_distances or g.n_nodes <= cfg.exact_distance_limit
        if exact:
            hist = distance_histogram(g)
            shares = hist.shares()
            writer.write(
                base + "distances.csv",
                _csv_bytes(
                    "length,count,share",
                    [(l, c, repr(shares[l])) for l, c in sorted(hist.counts.items())],
                ),
            )
            sw = small_world_index(g.n_nodes, g.n_edges, hist.mean)
            mean_distance, diameter = hist.mean, hist.diameter
            writer.write_json(
                base + "distances.json",
                {
                    "mode": "exact",
                    "mean": hist.mean,
                    "diameter": hist.diameter,
                    "diameter_geodesic_count": hist.diameter_geodesic_count,
                    "diameter_pair_count": hist.diameter_pair_count,
                    "connected_pair_share": hist.connected_pair_share,
                    "saturated": hist.saturated,
                    "small_world": {
                        "k": sw.k,
                        "expected_d": sw.expected_d,
                        "is_small_world": sw.is_small_world,
                    },
                },
            )
        else:
            est = sampled_mean_distance(g, cfg.sample_pairs, cfg.seed)
            sw = small_world_index(g.n_nodes, g.n_edges, est.mean)
            mean_distance = est.mean
            writer.write_json(
                base + "distances.json",
                {
                    "mode": "sampled",
                    "mean": est.mean,
                    "ci95": list(est.ci95),
                    "sample_size": est.sample_size,
                    "seed": est.seed,
                    "small_world": {
                        "k": sw.k,
                        "expected_d": sw.expected_d,
                        "is_small_world": sw.is_small_world,
                    },
                },
            )
        wc = weighted_comparison(g, cfg.sample_pairs, cfg.seed)
        writer.write_json(
            base + "weighted_comparison.json",
            {
                "mean_weighted_distance": wc.mean_weighted_distance,
                "mean_hops_of_weighted_geodesic": wc.mean_hops_of_weighted_geodesic,
                "mean_unweighted_distance": wc.mean_unweighted_distance,
                "mean_weight_of_unweighted_geodesic": wc.mean_weight_of_unweighted_geodesic,
                "sample_size": wc.sample_size,
                "seed": wc.seed,
            },
        )
        log.info("%s: distances done in %.1fs", label, time.perf_counter() - t0)

    if cfg.run_powerlaw:
        t0 = time.perf_counter()
        degrees = g.degrees()
        curve = ccdf(degrees)
        writer.write(
            base + "ccdf.csv",
            _csv_bytes("degree,ccdf", [(d, repr(c)) for d, c in curve.points]),
        )
        try:
            fit = fit_tail(degrees, cfg.bootstrap_count, cfg.seed, workers=cfg.workers)
            payload = {
                "xmin": fit.xmin,
                "alpha": fit.alpha,
                "tail_size": fit.tail_size,
                "tail_share": fit.tail_share,
                "ks_statistic": fit.ks_statistic,
                "p_value": fit.p_value,
                "plausible": fit.plausible,
                "bootstrap_count": fit.bootstrap_count,
                "seed": fit.seed,
                "low_bootstrap_warning": fit.low_bootstrap_warning,
                "alternates": [
                    {
                        "xmin": c.xmin,
                        "alpha": c.alpha,
                        "ks_statistic": c.ks_statistic,
                        "tail_size": c.tail_size,
                    }
                    for c in fit.alternates
                ],
            }
        except (InsufficientTailError, UnboundedFitError) as exc:
            payload = {"error": str(exc)}
        writer.write_json(base + "powerlaw.json", payload)
        log.info("%s: power-law fit done in %.1fs", label, time.perf_counter() - t0)

    if cfg.run_percolation:
        t0 = time.perf_counter()
        rows = []
        tips = {}
        for strategy in (Strategy.RANDOM, Strategy.DEGREE_DRIVEN, Strategy.EIGENVECTOR_DRIVEN):
            plan = PercolationPlan(
                strategy=strategy,
                steps=cfg.percolation_steps,
                step_size=cfg.percolation_step,
                repetitions=cfg.percolation_repetitions,
                seed=cfg.seed,
            )
            trace = percolate(g, plan)
            for rep, pts in enumerate(trace.repetition_points):
                for fraction, giant, second in pts:
                    rows.append((strategy.value, rep, repr(fraction), repr(giant), repr(second)))
            for fraction, giant, second in trace.points:
                rows.append((strategy.value, "mean", repr(fraction), repr(giant), repr(second)))
            tip = tipping_point(trace)
            tips[strategy.value] = tip
        writer.write(
            base + "percolation.csv",
            _csv_bytes("strategy,repetition,removed_fraction,giant_share,second_share", rows),
        )
        hubs = hub_analysis(g)
        writer.write_json(
            base + "hubs.json",
            {
                "percentile": hubs.percentile,
                "threshold_degree": hubs.threshold_degree,
                "hub_count": hubs.hub_count,
                "giant_share_before": hubs.giant_share_before,
                "giant_share_after": hubs.giant_share_after,
                "tipping_points": tips,
            },
        )
        log.info("%s: percolation done in %.1fs", label, time.perf_counter() - t0)

    table1 = {
        "nodes": g.n_nodes,
        "edges": g.n_edges,
        "deg": g.mean_degree,
        "com": report.scalars["giant_share"] if report else None,
        "dis": mean_distance,
        "dia": diameter,
        "tra": report.scalars["transitivity"] if report else None,
        "clu": report.scalars["avg_clustering"] if report else None,
        "mix": report.scalars["assortativity_pearson"] if report else None,
    }
    writer.write_json(base + "table1.json", table1)


def run_pipeline(config: RunConfig) -> dict:
    """Run the configured pipeline; returns the manifest (also written to disk).

    Stage failures raise :class:`PipelineError` naming module and operation.
    """
    config.validate()
    writer = ArtifactWriter(config.out_dir)
    networks: dict[str, CollaborationNetwork] = {}

    if config.corpus is not None:
        try:
            stream = parse_corpus(
                config.corpus,
                CorpusFilter(year_min=config.year_min, year_max=config.year_max),
            )
            affiliation = build_affiliation(stream)
        except Exception as exc:
            raise PipelineError("corpus_ingest", "parse_corpus", str(exc)) from exc
        writer.write_json("summary.json", stream.summary.as_dict())
        log.info(
            "ingested %d records (%d authors, %d papers)",
            stream.summary.kept,
            affiliation.n_authors,
            affiliation.n_papers,
        )
        try:
            _write_bibliometrics(affiliation, writer)
        except Exception as exc:
            raise PipelineError("bibliometrics", "distributions", str(exc)) from exc
        for label in config.networks:
            try:
                networks[label] = project_collaboration(affiliation, NETWORK_CLASSES[label])
            except Exception as exc:
                raise PipelineError("network_build", "project_collaboration", str(exc)) from exc
    else:
        try:
            with open(config.graphml, "rb") as fh:
                networks["imported"] = import_graphml(fh)
        except Exception as exc:
            raise PipelineError("network_build", "import_graphml", str(exc)) from exc

    for label, g in networks.items():
        log.info("analyzing %s network: %d nodes, %d edges", label, g.n_nodes, g.n_edges)
        try:
            _write_network_analyses(g, label, config, writer)
        except PipelineError:
            raise
        except Exception as exc:
            raise PipelineError("analysis", label, str(exc)) from exc

    manifest = writer.manifest(config, seeds={"seed": config.seed})
    (Path(config.out_dir) / "manifest.json").write_bytes(_json_bytes(manifest))
    return manifest
