"""Pipeline run configuration: one JSON file, paper-default parameters."""
from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass, field

NETWORK_SELECTORS = ("whole", "conference", "journal")


class ConfigError(Exception):
    pass


def default_workers() -> int:
    return int(os.environ.get("COLLABNET_WORKERS", "1"))


@dataclass
class RunConfig:
    """Everything a reproducible pipeline run needs.

    Defaults mirror the reference experiment: years 1936-2008, 10,000-pair
    distance samples, 1000 bootstrap replicates, 20 percolation steps of
    0.75% each (15% total).  Exact all-pairs distances run automatically only
    below ``exact_distance_limit`` nodes; larger networks fall back to pair
    sampling unless ``force_exact_distances`` is set.
    """

    corpus: str | None = None
    graphml: str | None = None  # analyze an existing network, skipping ingestion
    out_dir: str = "out"
    year_min: int = 1936
    year_max: int = 2008
    networks: tuple[str, ...] = NETWORK_SELECTORS
    seed: int = 0
    sample_pairs: int = 10000
    bootstrap_count: int = 1000
    percolation_steps: int = 20
    percolation_step: float | int = 0.0075
    percolation_repetitions: int = 10
    exact_distance_limit: int = 5000
    force_exact_distances: bool = False
    run_metrics: bool = True
    run_distances: bool = True
    run_powerlaw: bool = True
    run_percolation: bool = True
    workers: int = field(default_factory=default_workers)

    def validate(self) -> None:
        if self.corpus is None and self.graphml is None:
            raise ConfigError("either 'corpus' or 'graphml' must be set")
        if self.corpus is not None and self.graphml is not None:
            raise ConfigError("'corpus' and 'graphml' are mutually exclusive")
        if self.year_min > self.year_max:
            raise ConfigError(f"year_min ({self.year_min}) > year_max ({self.year_max})")
        if self.graphml is None:
            unknown = set(self.networks) - set(NETWORK_SELECTORS)
            if unknown:
                raise ConfigError(f"unknown network selectors: {sorted(unknown)}")
        if not self.networks:
            raise ConfigError("at least one network selector required")
        if self.sample_pairs < 1:
            raise ConfigError("sample_pairs must be >= 1")
        if self.bootstrap_count < 0:
            raise ConfigError("bootstrap_count must be >= 0")
        if self.percolation_steps < 1 or self.percolation_repetitions < 1:
            raise ConfigError("percolation steps and repetitions must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    def to_json(self) -> str:
        payload = dataclasses.asdict(self)
        payload["networks"] = list(self.networks)
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        payload = json.loads(text)
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(payload) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "networks" in payload:
            payload["networks"] = tuple(payload["networks"])
        return cls(**payload)

    @classmethod
    def load(cls, path: str) -> "RunConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(fh.read())
