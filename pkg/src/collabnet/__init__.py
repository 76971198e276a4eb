"""Co-authorship network toolkit: corpus ingestion, bipartite projection, and
large-scale structural analysis of collaboration graphs."""

from .bibliometrics import (
    DiscreteDistribution,
    collaboration_level_distribution,
    productivity_distribution,
)
from .components import (
    BiconnectedDecomposition,
    ComponentDecomposition,
    biconnected_components,
    connected_components,
)
from .config import RunConfig
from .corpus import CorpusParseError, generate_fixture, parse_corpus
from .distances import (
    DistanceHistogram,
    SampledDistanceEstimate,
    WeightedComparison,
    distance_histogram,
    sampled_mean_distance,
    small_world_index,
    weighted_comparison,
)
from .graphml_io import GraphMLError, export_graphml, import_graphml, write_edgelist_csv
from .metrics import (
    assortativity,
    avg_clustering,
    baseline_transitivity,
    clique_neighborhood_census,
    concentration,
    degree_stats,
    transitivity,
)
from .networks import (
    AffiliationNetwork,
    CollaborationNetwork,
    DuplicateKeyError,
    GraphSummary,
    build_affiliation,
    network_from_edges,
    project_collaboration,
)
from .percolation import (
    HubAnalysis,
    PercolationPlan,
    PercolationTrace,
    Strategy,
    eigenvector_centrality,
    hub_analysis,
    percolate,
    removal_order,
    tipping_point,
)
from .pipeline import PipelineError, run_pipeline
from .powerlaw import (
    CcdfCurve,
    PowerLawFit,
    ccdf,
    fit_alpha,
    fit_tail,
    sample_power_law,
)
from .records import CorpusFilter, PubClass, PublicationRecord, classify_publication
from .report import MetricReport, build_metric_report, compare_reports

__version__ = "0.1.0"
