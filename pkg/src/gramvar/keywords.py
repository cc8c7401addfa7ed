"""Keyword isolation against a reference corpus profile.

Lemmas are ranked by a simple-maths keyness ratio (per-million rates with
add-k smoothing; a signed log-likelihood score is available as an
alternative), truncated to the top N, and then filtered: a keyword must
clear a minimum per-100k frequency and a minimum number of distinct
grammatical relations in every slice, and must not belong to an excluded
tag class (proper nouns by default).
"""

from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .corpus import Corpus, lemma_totals, pos_counts
from .errors import GramvarError
from .grammar import RelationFrequencyTable

KEYNESS_METHODS = ("ratio", "loglik")


@dataclass(frozen=True)
class FrequencyProfile:
    """Lemma counts plus the token total they were drawn from."""

    table: Mapping[str, int]
    token_total: int
    tag_class: str | None = None  # restriction applied when building, if any

    def __post_init__(self):
        if self.token_total < 0:
            raise GramvarError("token_total must be >= 0")
        for lemma, count in self.table.items():
            if count < 0:
                raise GramvarError(f"negative count for {lemma!r}")
            if count > self.token_total:
                raise GramvarError(
                    f"count for {lemma!r} ({count}) exceeds token total {self.token_total}"
                )

    def per_million(self, lemma: str) -> float:
        if self.token_total == 0:
            return 0.0
        return self.table.get(lemma, 0) * 1e6 / self.token_total


@dataclass(frozen=True)
class KeynessScore:
    lemma: str
    focus_rel_freq: float  # per million
    reference_rel_freq: float  # per million
    score: float


@dataclass(frozen=True)
class FilterConfig:
    min_per_100k_per_slice: float = 10.0
    min_distinct_relations_per_slice: int = 2
    exclude_tag_classes: frozenset[str] = frozenset({"PROPER"})
    top_n: int = 200

    def __post_init__(self):
        if (self.min_per_100k_per_slice < 0 or self.min_distinct_relations_per_slice < 0
                or self.top_n < 0):
            raise GramvarError("filter thresholds must be >= 0")


def profile_from_corpus(corpus: Corpus, tag_class: str | None = None) -> FrequencyProfile:
    """Aggregate lemma counts over all slices, optionally restricted to one
    tag class; the token total always covers the whole corpus."""
    total = sum(s.token_total for s in corpus.slices)
    table: Counter = Counter()
    if tag_class is None:
        for per_slice in lemma_totals(corpus).values():
            table.update(per_slice)
    else:
        for per_slice in pos_counts(corpus).values():
            for (lemma, cls), n in per_slice.items():
                if cls == tag_class:
                    table[lemma] += n
    return FrequencyProfile(table=dict(table), token_total=total, tag_class=tag_class)


def load_profile_csv(path) -> FrequencyProfile:
    """Read a precomputed profile: a ``#total_tokens=N`` header line followed
    by ``lemma,count`` rows (a ``lemma,count`` header row is allowed)."""
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith("#total_tokens="):
        raise GramvarError(f"{path}: first line must be '#total_tokens=<N>'")
    try:
        total = int(lines[0].split("=", 1)[1])
    except ValueError:
        raise GramvarError(f"{path}: bad token total in header")
    table: dict[str, int] = {}
    for row in csv.reader(lines[1:]):
        if not row:
            continue
        if row[0] == "lemma":
            continue
        if len(row) != 2:
            raise GramvarError(f"{path}: expected 'lemma,count' rows")
        try:
            table[row[0]] = table.get(row[0], 0) + int(row[1])
        except ValueError:
            raise GramvarError(f"{path}: bad count {row[1]!r} for {row[0]!r}")
    return FrequencyProfile(table=table, token_total=total)


def keyness_scores(focus: FrequencyProfile, reference: FrequencyProfile,
                   k: float = 1.0, method: str = "ratio") -> list[KeynessScore]:
    """Score every lemma in the focus profile against the reference.

    ``ratio`` (default): (focus_per_million + k) / (reference_per_million + k).
    ``loglik``: signed Dunning log-likelihood G2 of the two counts.
    Descending by score; ties broken by focus count, then lemma.
    """
    if method not in KEYNESS_METHODS:
        raise ValueError(f"method must be one of {KEYNESS_METHODS}")
    if not focus.table:
        raise GramvarError("empty focus profile")
    scores = []
    for lemma in focus.table:
        f_pm = focus.per_million(lemma)
        r_pm = reference.per_million(lemma)
        if method == "ratio":
            score = (f_pm + k) / (r_pm + k)
        else:
            score = _loglik(focus.table.get(lemma, 0), focus.token_total,
                            reference.table.get(lemma, 0), reference.token_total)
        scores.append(KeynessScore(lemma, f_pm, r_pm, score))
    scores.sort(key=lambda s: (-s.score, -focus.table.get(s.lemma, 0), s.lemma))
    return scores


def _loglik(a: int, c: int, b: int, d: int) -> float:
    # Dunning G2 with the 0*log(0)=0 convention, signed by enrichment.
    if c == 0 or d == 0 or a + b == 0:
        return 0.0
    e1 = c * (a + b) / (c + d)
    e2 = d * (a + b) / (c + d)
    g2 = 0.0
    if a > 0:
        g2 += a * math.log(a / e1)
    if b > 0:
        g2 += b * math.log(b / e2)
    g2 *= 2.0
    return -g2 if a / c < b / d else g2


@dataclass(frozen=True)
class CountsView:
    """The per-slice counts filter_keywords needs, however they were obtained."""

    labels: tuple[int, ...]
    token_totals: Mapping[int, int]
    lemma_slice_counts: Mapping[int, Mapping[str, int]]
    majority_class: Mapping[str, str]

    @classmethod
    def from_corpus(cls, corpus: Corpus) -> "CountsView":
        class_order = {name: i for i, name in enumerate(corpus.manifest.tagset_map)}
        class_order[""] = len(class_order)
        per_lemma_class: dict[str, Counter] = {}
        for per_slice in pos_counts(corpus).values():
            for (lemma, tag_cls), n in per_slice.items():
                per_lemma_class.setdefault(lemma, Counter())[tag_cls] += n
        majority = {
            lemma: min(classes.items(), key=lambda kv: (-kv[1], class_order.get(kv[0], 99)))[0]
            for lemma, classes in per_lemma_class.items()
        }
        return cls(
            labels=corpus.labels,
            token_totals=corpus.token_totals(),
            lemma_slice_counts=lemma_totals(corpus),
            majority_class=majority,
        )


def filter_keywords(ranked: Sequence[KeynessScore], corpus_or_view,
                    relations: RelationFrequencyTable,
                    config: FilterConfig = FilterConfig()) -> list[KeynessScore]:
    """Truncate the ranking to top_n, then keep lemmas that clear every
    per-slice criterion in every slice.

    A lemma is dropped when its majority tag class is excluded, when its
    relative frequency dips below min_per_100k_per_slice in any slice, or
    when it shows fewer than min_distinct_relations_per_slice distinct
    relations in any slice.  Truncation happens before filtering, so the
    result can be shorter than top_n.
    """
    view = (CountsView.from_corpus(corpus_or_view)
            if isinstance(corpus_or_view, Corpus) else corpus_or_view)
    kept = []
    for entry in ranked[:config.top_n]:
        lemma = entry.lemma
        if view.majority_class.get(lemma, "") in config.exclude_tag_classes:
            continue
        ok = True
        for label in view.labels:
            total = view.token_totals[label]
            count = view.lemma_slice_counts.get(label, {}).get(lemma, 0)
            if total <= 0 or count * 1e5 / total < config.min_per_100k_per_slice:
                ok = False
                break
            if (relations.distinct_relation_count(lemma, label)
                    < config.min_distinct_relations_per_slice):
                ok = False
                break
        if ok:
            kept.append(entry)
    return kept
