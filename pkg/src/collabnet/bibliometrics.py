"""Productivity and collaboration-level distributions from the affiliation network."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .networks import AffiliationNetwork
from .records import ALL_CLASSES, PubClass


@dataclass
class DiscreteDistribution:
    """Frequency table over non-negative integer values.

    ``excluded_zeros`` counts observations at value 0 that are kept out of the
    table and the mean (collaboration level starts at one author); they are
    reported, not folded in.
    """

    counts: dict[int, int]
    excluded_zeros: int = 0

    @property
    def n(self) -> int:
        return sum(self.counts.values())

    @property
    def mean(self) -> float:
        n = self.n
        return sum(v * c for v, c in self.counts.items()) / n if n else 0.0

    def relative_frequencies(self) -> dict[int, float]:
        n = self.n
        return {v: c / n for v, c in self.counts.items()}

    def table_rows(self, top: int = 10) -> list[tuple[int, float]]:
        """Leading (value, share) rows with shares rounded to 0.1%."""
        rel = self.relative_frequencies()
        return [(v, round(rel[v], 3)) for v in sorted(rel)[:top]]

    @property
    def total_mass(self) -> int:
        return sum(v * c for v, c in self.counts.items())


def _distribution(values: np.ndarray, drop_zeros: bool) -> DiscreteDistribution:
    uniq, freq = np.unique(values, return_counts=True)
    counts = {int(v): int(c) for v, c in zip(uniq, freq)}
    zeros = counts.pop(0, 0) if drop_zeros else 0
    return DiscreteDistribution(counts=counts, excluded_zeros=zeros)


def productivity_distribution(affiliation: AffiliationNetwork) -> DiscreteDistribution:
    """Papers per author (author-node degrees; never zero by construction)."""
    return _distribution(affiliation.author_degrees(), drop_zeros=False)


def collaboration_level_distribution(
    affiliation: AffiliationNetwork, classes: Iterable[PubClass] = ALL_CLASSES
) -> DiscreteDistribution:
    """Authors per paper, restricted to papers of the given classes.

    Zero-author records (proceedings volumes) are excluded from the table and
    mean but surface through ``excluded_zeros``.
    """
    classes = frozenset(classes)
    if not classes:
        raise ValueError("classes must be non-empty")
    keep = np.isin(affiliation.paper_class, affiliation.class_codes(classes))
    return _distribution(affiliation.paper_degrees()[keep], drop_zeros=True)


def write_distribution_csv(dist: DiscreteDistribution, sink) -> None:
    """value,count,relative_frequency rows in ascending value order."""
    own = isinstance(sink, (str, bytes))
    out = open(sink, "w", encoding="utf-8", newline="") if own else sink
    try:
        out.write("value,count,relative_frequency\n")
        rel = dist.relative_frequencies()
        for v in sorted(dist.counts):
            out.write(f"{v},{dist.counts[v]},{rel[v]!r}\n")
    finally:
        if own:
            out.close()
