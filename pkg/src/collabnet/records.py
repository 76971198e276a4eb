"""Publication records, class mapping, and corpus filters."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field


class PubClass(enum.Enum):
    CONFERENCE = "conference"
    JOURNAL = "journal"
    OTHER = "other"


ALL_CLASSES = frozenset(PubClass)

# Element-name -> class mapping for the DBLP dialect.  Anything not listed
# falls through to OTHER (books, theses, proceedings volumes, www entries).
DEFAULT_CLASS_MAP: dict[str, PubClass] = {
    "inproceedings": PubClass.CONFERENCE,
    "article": PubClass.JOURNAL,
}

YEAR_FLOOR = 1900
YEAR_CEIL = 2100


def classify_publication(element_name: str, class_map: dict[str, PubClass] | None = None) -> PubClass:
    """Map a publication element name to its class.

    Total function: unknown element names classify as OTHER.  The default
    mapping can be overridden by passing a custom ``class_map``.
    """
    if not element_name:
        raise ValueError("element_name must be non-empty")
    mapping = DEFAULT_CLASS_MAP if class_map is None else class_map
    return mapping.get(element_name, PubClass.OTHER)


@dataclass(frozen=True)
class PublicationRecord:
    """One parsed bibliographic entry.

    ``authors`` is ordered, duplicate-free, and may be empty (editor-less
    proceedings volumes exist and produce no affiliation edges).
    """

    key: str
    pub_class: PubClass
    year: int
    authors: tuple[str, ...]


@dataclass(frozen=True)
class CorpusFilter:
    """Year-range and class filter applied while streaming a corpus."""

    year_min: int = 1936
    year_max: int = 2008
    classes: frozenset[PubClass] = ALL_CLASSES

    def __post_init__(self):
        if self.year_min > self.year_max:
            raise ValueError(f"year_min ({self.year_min}) > year_max ({self.year_max})")
        if not self.classes:
            raise ValueError("filter must keep at least one publication class")

    def keeps_year(self, year: int) -> bool:
        return self.year_min <= year <= self.year_max

    def keeps_class(self, pub_class: PubClass) -> bool:
        return pub_class in self.classes


KEEP_ALL = CorpusFilter(year_min=YEAR_FLOOR, year_max=YEAR_CEIL)


@dataclass
class ParseSummary:
    """Counters accumulated while streaming a corpus; final once the stream ends."""

    seen: int = 0
    kept: int = 0
    skipped_year: int = 0
    skipped_class: int = 0
    malformed: int = 0
    complete: bool = field(default=False, compare=False)

    def as_dict(self) -> dict:
        return {
            "seen": self.seen,
            "kept": self.kept,
            "skipped_year": self.skipped_year,
            "skipped_class": self.skipped_class,
            "malformed": self.malformed,
        }
