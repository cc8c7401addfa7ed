"""Trend grouping and peak-precedence analysis.

Keywords are grouped by the sign of their mean return (positive / steady /
negative around +-0.5 percentage points by default).  For each keyword and
relation, the slice where the relation's frequency peaks is compared with
the peak of the word's overall frequency (earliest slice wins ties), giving
a preceded / simultaneous / proceeded classification.  Counts per
(trend group, relation, timing) are weighted by group share:
weighted = raw * group_size / total_keywords.
"""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

from .corpus import Corpus, lemma_totals
from .errors import CorrelationUndefinedError, RatioUndefinedError, SeriesError
from .grammar import RelationFrequencyTable
from .stats import (FrequencySeries, SummaryStats,
                    frequency_series_from_counts, pearson)

TIMINGS = ("preceded", "simultaneous", "proceeded")
TREND_GROUPS = ("positive", "steady", "negative")

# +-0.5 percentage points of mean return (base-10 convention)
DEFAULT_TREND_UPPER = 0.005
DEFAULT_TREND_LOWER = -0.005


@dataclass(frozen=True)
class TrendClass:
    value: str  # "positive" | "steady" | "negative"
    upper: float
    lower: float


@dataclass(frozen=True)
class PeakTiming:
    word_peak_label: int
    relation_peak_label: int
    classification: str

    @classmethod
    def of(cls, word_peak_label: int, relation_peak_label: int) -> "PeakTiming":
        if relation_peak_label < word_peak_label:
            timing = "preceded"
        elif relation_peak_label == word_peak_label:
            timing = "simultaneous"
        else:
            timing = "proceeded"
        return cls(word_peak_label, relation_peak_label, timing)


def classify_trend(stats: SummaryStats | float,
                   upper: float = DEFAULT_TREND_UPPER,
                   lower: float = DEFAULT_TREND_LOWER) -> TrendClass:
    """Group by mean return; both boundaries are inclusive for their group."""
    if upper < lower:
        raise ValueError("upper threshold below lower threshold")
    rbar = stats.mean_return if isinstance(stats, SummaryStats) else float(stats)
    if rbar >= upper:
        value = "positive"
    elif rbar <= lower:
        value = "negative"
    else:
        value = "steady"
    return TrendClass(value=value, upper=upper, lower=lower)


def peak_slice(series: FrequencySeries) -> int:
    """Label of the maximum value; earliest label wins ties."""
    best_label = series.labels[0]
    best = series.values[0]
    for label, value in zip(series.labels[1:], series.values[1:]):
        if value > best:
            best = value
            best_label = label
    return best_label


def peak_timing(word_series: FrequencySeries,
                relation_series: FrequencySeries) -> PeakTiming:
    if word_series.labels != relation_series.labels:
        raise SeriesError("word and relation series cover different slices")
    return PeakTiming.of(peak_slice(word_series), peak_slice(relation_series))


@dataclass
class WeightedPeakTable:
    """Raw and group-weighted peak-timing counts per (group, relation, timing).

    ``missing`` counts the keywords per (group, relation) that never show
    the relation and are therefore excluded from that row; with those added
    back, each row's raw counts sum to the group size.
    """

    raw_counts: dict[tuple[str, str, str], int]
    group_sizes: dict[str, int]
    total_keywords: int
    relations: tuple[str, ...]
    missing: dict[tuple[str, str], int]

    def raw(self, group: str, relation: str, timing: str) -> int:
        return self.raw_counts.get((group, relation, timing), 0)

    def weighted(self, group: str, relation: str, timing: str) -> float:
        if self.total_keywords == 0:
            return 0.0
        return self.raw(group, relation, timing) * self.group_sizes.get(group, 0) \
            / self.total_keywords

    @classmethod
    def from_raw_counts(cls, raw_counts: Mapping[tuple[str, str, str], int],
                        group_sizes: Mapping[str, int],
                        total_keywords: int) -> "WeightedPeakTable":
        relations = tuple(dict.fromkeys(rel for _, rel, _ in raw_counts))
        return cls(
            raw_counts=dict(raw_counts),
            group_sizes=dict(group_sizes),
            total_keywords=total_keywords,
            relations=relations,
            missing={},
        )

    def to_csv(self, precision: int = 4) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["group", "relation", "timing", "weighted", "raw"])
        for group in ("positive", "negative"):
            if group not in self.group_sizes:
                continue
            for relation in self.relations:
                for timing in TIMINGS:
                    writer.writerow([
                        group, relation, timing,
                        f"{self.weighted(group, relation, timing):.{precision}f}",
                        self.raw(group, relation, timing),
                    ])
        return buf.getvalue()


def weighted_peak_table(trends: Mapping[str, TrendClass],
                        timings: Mapping[tuple[str, str], PeakTiming],
                        relations: Sequence[str]) -> WeightedPeakTable:
    """Aggregate per-keyword peak timings into the weighted table.

    ``trends`` maps every keyword to its TrendClass; ``timings`` maps
    (keyword, relation) to a PeakTiming and simply omits pairs where the
    keyword never shows the relation.  Steady keywords count toward
    total_keywords but get no rows, mirroring the positive/negative layout.
    """
    group_of = {lemma: t.value for lemma, t in trends.items()}
    group_sizes = Counter(group_of.values())
    raw: dict[tuple[str, str, str], int] = {}
    missing: dict[tuple[str, str], int] = {}
    for lemma, group in group_of.items():
        if group == "steady":
            continue
        for relation in relations:
            timing = timings.get((lemma, relation))
            if timing is None:
                key = (group, relation)
                missing[key] = missing.get(key, 0) + 1
                continue
            key3 = (group, relation, timing.classification)
            raw[key3] = raw.get(key3, 0) + 1
    return WeightedPeakTable(
        raw_counts=raw,
        group_sizes=dict(group_sizes),
        total_keywords=len(trends),
        relations=tuple(relations),
        missing=missing,
    )


def timing_likelihood_ratio(table: WeightedPeakTable,
                            relation: str | Sequence[str], timing: str,
                            numerator: str = "negative",
                            denominator: str = "positive") -> float:
    """Ratio of two groups' weighted counts for a relation (or a combination
    of relations, summed) at one timing."""
    if timing not in TIMINGS:
        raise ValueError(f"timing must be one of {TIMINGS}")
    relations = [relation] if isinstance(relation, str) else list(relation)
    num = sum(table.weighted(numerator, rel, timing) for rel in relations)
    den = sum(table.weighted(denominator, rel, timing) for rel in relations)
    if den == 0.0:
        raise RatioUndefinedError(
            f"zero weighted count for {denominator}/{'+'.join(relations)}/{timing}"
        )
    return num / den


@dataclass(frozen=True)
class RelationCorrelationSummary:
    relation: str
    mean_r: float
    sd_r: float
    n: int
    skipped: int  # keyword series dropped for zero variance or missing data


def correlations_from_series(
        word_series: Mapping[str, FrequencySeries],
        relation_series: Mapping[str, Mapping[str, FrequencySeries]],
        relations: Sequence[str]) -> dict[str, RelationCorrelationSummary]:
    """Per relation: mean and SD over keywords of Pearson r between the
    keyword's relation series and its overall series."""
    out = {}
    for relation in relations:
        rs: list[float] = []
        skipped = 0
        for lemma, overall in word_series.items():
            rel = relation_series.get(lemma, {}).get(relation)
            if rel is None:
                skipped += 1
                continue
            try:
                rs.append(pearson(rel, overall).r)
            except (CorrelationUndefinedError, SeriesError):
                skipped += 1
        if rs:
            mean_r = sum(rs) / len(rs)
            sd_r = (math.sqrt(sum((x - mean_r) ** 2 for x in rs) / (len(rs) - 1))
                    if len(rs) > 1 else 0.0)
        else:
            mean_r = sd_r = 0.0
        out[relation] = RelationCorrelationSummary(
            relation=relation, mean_r=mean_r, sd_r=sd_r, n=len(rs), skipped=skipped
        )
    return out


def relation_word_correlations(keywords: Sequence[str],
                               relation_table: RelationFrequencyTable,
                               corpus: Corpus) -> dict[str, RelationCorrelationSummary]:
    """Correlate each keyword's per-relation series with its overall
    (all-forms) series and aggregate per relation across keywords."""
    totals = corpus.token_totals()
    all_forms = lemma_totals(corpus)
    word_series = {}
    rel_series: dict[str, dict[str, FrequencySeries]] = {}
    for lemma in keywords:
        counts = {label: all_forms[label].get(lemma, 0) for label in corpus.labels}
        word_series[lemma] = frequency_series_from_counts(counts, totals, target=lemma)
        rel_series[lemma] = {}
        for relation in relation_table.relations:
            series_counts = relation_table.series_counts(lemma, relation)
            if any(series_counts.values()):
                rel_series[lemma][relation] = frequency_series_from_counts(
                    series_counts, totals, target=f"{lemma}@{relation}"
                )
    return correlations_from_series(word_series, rel_series, relation_table.relations)
