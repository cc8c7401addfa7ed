"""On-disk corpus index.

Ingestion writes per-slice count tables so analyses never re-run relation
extraction: ``pos/<label>.csv`` (lemma,tag_class,count), ``rel/<label>.csv``
(lemma,relation,count) and ``metadata.json`` (token totals, tagset, grammar
hash, tool version).  Output is deterministic: rows are sorted and numbers
plain, so re-ingesting unchanged inputs is byte-identical.  The index is
built in a scratch directory and moved into place only on success.
"""

from __future__ import annotations

import csv
import io
import json
import shutil
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .corpus import Corpus, pos_counts
from .errors import GramvarError
from .grammar import Grammar, RelationFrequencyTable
from .keywords import CountsView, FrequencyProfile


def _csv_bytes(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def write_index(path, corpus: Corpus, grammar: Grammar,
                table: RelationFrequencyTable) -> Path:
    """Persist counts for a built corpus; replaces ``path`` atomically."""
    path = Path(path)
    scratch = path.with_name(path.name + ".partial")
    if scratch.exists():
        shutil.rmtree(scratch)
    try:
        (scratch / "pos").mkdir(parents=True)
        (scratch / "rel").mkdir()
        pos = pos_counts(corpus)
        for sl in corpus.slices:
            rows = sorted(
                (lemma, cls, n) for (lemma, cls), n in pos[sl.label].items()
            )
            (scratch / "pos" / f"{sl.label}.csv").write_text(
                _csv_bytes(["lemma", "tag_class", "count"], rows), encoding="utf-8"
            )
            rel_rows = sorted(
                (lemma, relation, n)
                for (lemma, relation, label), n in table.counts.items()
                if label == sl.label
            )
            (scratch / "rel" / f"{sl.label}.csv").write_text(
                _csv_bytes(["lemma", "relation", "count"], rel_rows), encoding="utf-8"
            )
        metadata = {
            "version": __version__,
            "grammar_hash": grammar.source_hash,
            "tagger": corpus.tagger,
            "tagset": dict(corpus.manifest.tagset_map),
            "relations": list(grammar.relation_names),
            "slices": [
                {"label": sl.label, "token_total": sl.token_total}
                for sl in corpus.slices
            ],
        }
        (scratch / "metadata.json").write_text(
            json.dumps(metadata, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    except BaseException:
        shutil.rmtree(scratch, ignore_errors=True)
        raise
    if path.exists():
        shutil.rmtree(path)
    scratch.rename(path)
    return path


@dataclass
class CorpusIndex:
    """Loaded index: everything the analysis commands need."""

    path: Path
    metadata: dict
    labels: tuple[int, ...]
    token_totals: dict[int, int]
    pos: dict[int, dict[tuple[str, str], int]]
    rel: dict[int, dict[tuple[str, str], int]]

    @property
    def tag_classes(self) -> tuple[str, ...]:
        return tuple(self.metadata["tagset"])

    @property
    def relations(self) -> tuple[str, ...]:
        return tuple(self.metadata["relations"])

    def lemma_counts(self, lemma: str, tag_class: str | None = None) -> dict[int, int]:
        """Per-slice counts for a lemma, optionally restricted to one class."""
        out = {}
        for label in self.labels:
            if tag_class is None:
                out[label] = sum(
                    n for (lem, _), n in self.pos[label].items() if lem == lemma
                )
            else:
                out[label] = self.pos[label].get((lemma, tag_class), 0)
        return out

    def relation_counts(self, lemma: str, relation: str) -> dict[int, int]:
        return {
            label: self.rel[label].get((lemma, relation), 0) for label in self.labels
        }

    def relation_table(self) -> RelationFrequencyTable:
        return RelationFrequencyTable.from_slice_counts(self.rel, self.relations)

    def profile(self, tag_class: str | None = None) -> FrequencyProfile:
        table: Counter = Counter()
        for label in self.labels:
            for (lemma, cls), n in self.pos[label].items():
                if tag_class is None or cls == tag_class:
                    table[lemma] += n
        return FrequencyProfile(
            table=dict(table),
            token_total=sum(self.token_totals.values()),
            tag_class=tag_class,
        )

    def counts_view(self) -> CountsView:
        class_order = {name: i for i, name in enumerate(self.tag_classes)}
        class_order[""] = len(class_order)
        per_lemma_class: dict[str, Counter] = {}
        lemma_slice: dict[int, dict[str, int]] = {}
        for label in self.labels:
            slice_counts: dict[str, int] = {}
            for (lemma, cls), n in self.pos[label].items():
                per_lemma_class.setdefault(lemma, Counter())[cls] += n
                slice_counts[lemma] = slice_counts.get(lemma, 0) + n
            lemma_slice[label] = slice_counts
        majority = {
            lemma: min(classes.items(), key=lambda kv: (-kv[1], class_order.get(kv[0], 99)))[0]
            for lemma, classes in per_lemma_class.items()
        }
        return CountsView(
            labels=self.labels,
            token_totals=self.token_totals,
            lemma_slice_counts=lemma_slice,
            majority_class=majority,
        )


def load_index(path) -> CorpusIndex:
    path = Path(path)
    meta_path = path / "metadata.json"
    if not meta_path.is_file():
        raise GramvarError(f"{path}: not an index (metadata.json missing)")
    metadata = json.loads(meta_path.read_text(encoding="utf-8"))
    labels = tuple(entry["label"] for entry in metadata["slices"])
    totals = {entry["label"]: entry["token_total"] for entry in metadata["slices"]}
    pos: dict[int, dict[tuple[str, str], int]] = {}
    rel: dict[int, dict[tuple[str, str], int]] = {}
    for label in labels:
        pos[label] = _read_counts(path / "pos" / f"{label}.csv")
        rel[label] = _read_counts(path / "rel" / f"{label}.csv")
    return CorpusIndex(path=path, metadata=metadata, labels=labels,
                       token_totals=totals, pos=pos, rel=rel)


def _read_counts(csv_path: Path) -> dict[tuple[str, str], int]:
    out: dict[tuple[str, str], int] = {}
    with open(csv_path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or len(header) != 3:
            raise GramvarError(f"{csv_path}: malformed count table")
        for row in reader:
            if len(row) != 3:
                raise GramvarError(f"{csv_path}: malformed row {row!r}")
            out[(row[0], row[1])] = int(row[2])
    return out
