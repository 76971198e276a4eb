"""Structural metric reports: assembly, JSON round-trip, and tolerance diffs."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .components import biconnected_components, connected_components
from .metrics import (
    assortativity,
    avg_clustering,
    baseline_transitivity,
    clique_neighborhood_census,
    concentration,
    degree_stats,
    transitivity,
)
from .networks import CollaborationNetwork

SCHEMA_VERSION = 1


@dataclass
class MetricReport:
    """Named scalars and histograms for one collaboration network.

    Serializes losslessly to JSON; missing values (e.g. assortativity of a
    regular graph) stay None/null rather than being forced to 0.
    """

    scalars: dict[str, float | int | None] = field(default_factory=dict)
    histograms: dict[str, dict[int, int]] = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def to_json(self) -> str:
        payload = {
            "schema_version": self.schema_version,
            "scalars": self.scalars,
            "histograms": {
                name: {str(k): v for k, v in sorted(hist.items())}
                for name, hist in self.histograms.items()
            },
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "MetricReport":
        payload = json.loads(text)
        return cls(
            scalars=payload["scalars"],
            histograms={
                name: {int(k): v for k, v in hist.items()}
                for name, hist in payload["histograms"].items()
            },
            schema_version=payload["schema_version"],
        )


def build_metric_report(g: CollaborationNetwork) -> MetricReport:
    """Run the full structural battery over one network."""
    comp = connected_components(g)
    bicomp = biconnected_components(g)
    stats = degree_stats(g)
    conc = concentration(g.degrees())
    trans = transitivity(g)
    clust = avg_clustering(g)
    mix = assortativity(g) if g.n_edges >= 2 else None
    baselines = baseline_transitivity(g.n_nodes, g.n_edges, g.degrees())

    degree_hist: dict[int, int] = {}
    for d in g.degrees().tolist():
        degree_hist[d] = degree_hist.get(d, 0) + 1

    scalars: dict[str, float | int | None] = {
        "n_nodes": g.n_nodes,
        "n_edges": g.n_edges,
        "giant_share": comp.giant_share,
        "component_count": comp.count,
        "bicomponent_share": bicomp.largest_share(g.n_nodes),
        "articulation_points": int(len(bicomp.articulation_points)),
        "mean_degree": stats.mean,
        "median_degree": stats.median,
        "q3_degree": stats.q3,
        "max_degree": stats.max,
        "skewness": stats.skewness,
        "gini": conc.gini,
        "transitivity": trans.value,
        "n_triangles": trans.census.n_triangles,
        "n_connected_triples": trans.census.n_connected_triples,
        "transitivity_random_baseline": baselines.random,
        "transitivity_configuration_baseline": baselines.configuration,
        "avg_clustering": clust.average,
        "clustering_share_at_one": clust.share_at_one,
        "assortativity_pearson": mix.pearson if mix else None,
        "assortativity_log": mix.log_pearson if mix else None,
        "assortativity_spearman": mix.spearman if mix else None,
    }
    histograms = {
        "degree": degree_hist,
        "component_size": comp.size_distribution(),
        "clique_census": clique_neighborhood_census(g),
    }
    return MetricReport(scalars=scalars, histograms=histograms)


@dataclass(frozen=True)
class FieldDiff:
    field: str
    value_a: float | int | None
    value_b: float | int | None
    delta: float | None
    within_tolerance: bool


@dataclass
class ReportDiff:
    entries: list[FieldDiff]

    @property
    def ok(self) -> bool:
        return all(e.within_tolerance for e in self.entries)

    def failing(self) -> list[FieldDiff]:
        return [e for e in self.entries if not e.within_tolerance]


def compare_reports(
    report_a: MetricReport,
    report_b: MetricReport,
    tolerances: dict[str, dict[str, float]] | None = None,
    default_abs: float = 0.0,
    default_rel: float = 0.0,
) -> ReportDiff:
    """Field-by-field scalar comparison under per-field abs/rel tolerances.

    ``tolerances`` maps field name -> {"abs": x} and/or {"rel": y}; unlisted
    fields use the defaults.  Histograms must match exactly when present in
    both reports.
    """
    if report_a.schema_version != report_b.schema_version:
        raise ValueError(
            f"schema mismatch: {report_a.schema_version} vs {report_b.schema_version}"
        )
    tolerances = tolerances or {}
    entries: list[FieldDiff] = []
    for name in sorted(set(report_a.scalars) | set(report_b.scalars)):
        a = report_a.scalars.get(name)
        b = report_b.scalars.get(name)
        tol = tolerances.get(name, {})
        tol_abs = tol.get("abs", default_abs)
        tol_rel = tol.get("rel", default_rel)
        if a is None or b is None:
            ok = a is None and b is None
            entries.append(FieldDiff(name, a, b, None, ok))
            continue
        delta = abs(a - b)
        ok = delta <= tol_abs or (abs(a) > 0 and delta / abs(a) <= tol_rel)
        entries.append(FieldDiff(name, a, b, delta, ok))
    for name in sorted(set(report_a.histograms) | set(report_b.histograms)):
        same = report_a.histograms.get(name) == report_b.histograms.get(name)
        entries.append(FieldDiff(f"histogram:{name}", None, None, None, same))
    return ReportDiff(entries=entries)
