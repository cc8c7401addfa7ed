"""Bundled reference data from the NIPS 1987-1999 corpus analyses.

The original corpus cannot be redistributed; what ships here are the
published yearly relation-frequency series for the nouns *learning* and
*training* (per 100,000 tokens) and the published peak-timing table for the
43 keyword nouns, used as reproduction targets and demo data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .stats import FrequencySeries

NIPS_LABELS = tuple(range(1987, 2000))
NIPS_LEMMAS = ("learning", "training")
NIPS_ROWS = ("N", "a_modified", "modifier", "n_modified", "object_of", "subject_of")


@lru_cache(maxsize=None)
def _load(name: str) -> dict:
    text = resources.files("gramvar.data").joinpath(name).read_text("utf-8")
    return json.loads(text)


def nips_series(lemma: str, row: str = "N") -> FrequencySeries:
    """Published per-100k series as a FrequencySeries (values are fractions).

    ``row`` is "N" for the noun itself or one of its relation names.
    """
    doc = _load("nips_learning_training.json")
    values = doc["series"][lemma][row]
    target = lemma if row == "N" else f"{lemma}@{row}"
    return FrequencySeries(
        labels=tuple(doc["labels"]),
        values=tuple(v / 1e5 for v in values),
        target=target,
    )


def nips_counts(lemma: str, row: str = "N") -> dict[int, int]:
    """The raw published per-100k integers, keyed by year."""
    doc = _load("nips_learning_training.json")
    return dict(zip(doc["labels"], doc["series"][lemma][row]))


def nips_published_summary(lemma: str, row: str = "N") -> dict[str, str]:
    """Published (mean per 100k, mean return %, volatility %) strings for one row."""
    return dict(_load("nips_learning_training.json")["published_summary"][lemma][row])


@dataclass(frozen=True)
class PublishedPeakCell:
    group: str
    relation: str
    timing: str
    raw: int
    published_weighted: str
    erratum: str | None = None


def nips_peak_timing():
    """Published peak-timing table: (cells, group_sizes, total_keywords).

    Cells carry the published raw count and weighted string; the one
    internally inconsistent cell has its ``erratum`` note set.
    """
    doc = _load("nips_peak_timing.json")
    errata = {
        (e["group"], e["relation"], e["timing"]): e["note"] for e in doc["errata"]
    }
    cells = [
        PublishedPeakCell(
            group=c["group"], relation=c["relation"], timing=c["timing"],
            raw=c["raw"], published_weighted=c["published_weighted"],
            erratum=errata.get((c["group"], c["relation"], c["timing"])),
        )
        for c in doc["cells"]
    ]
    return cells, dict(doc["group_sizes"]), doc["total_keywords"]


def nips_published_ratios() -> dict[str, str]:
    return dict(_load("nips_peak_timing.json")["published_ratios"])
