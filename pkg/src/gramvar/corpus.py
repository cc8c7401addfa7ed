"""Time-sliced corpus model and vertical-file ingestion.

A corpus is an ordered sequence of slices (e.g. publication years), each a
bag of POS-tagged sentences.  The primary input format is "vertical" text:
one token per line as ``form<TAB>lemma<TAB>tag``, with sentences delimited
by blank lines or ``<s>``/``</s>`` marker lines.  Any other line starting
with ``<`` is structural markup and is skipped (and not counted).

Slices are described by a JSON manifest::

    {
      "slices": [{"label": 1987, "files": ["y1987.vert"]}, ...],
      "tagset": {"NOUN": "^NN", "PROPER": "^NP", ...}
    }

Slice labels must be strictly increasing integers.  The ``tagset`` object
maps tag-class names (used by grammar files) to regular expressions matched
against raw tags with ``re.search``; anchor with ``^`` for prefix semantics.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple

from .errors import ManifestError, VerticalParseError

# Tag classes for a Penn-style tagset (TreeTagger-compatible prefixes).
DEFAULT_TAGSET = {
    "NOUN": "^NN",
    "PROPER": "^NP",
    "ADJ": "^JJ",
    "VERB": "^VB",
    "ADV": "^RB",
    "DET": "^DT",
    "CONJ": "^CC",
}


class Token(NamedTuple):
    form: str
    lemma: str  # lower-cased base form, no whitespace
    tag: str


class Sentence(NamedTuple):
    tokens: tuple[Token, ...]

    def __len__(self):
        return len(self.tokens)


@dataclass(frozen=True)
class Slice:
    label: int
    sentences: tuple[Sentence, ...]
    token_total: int


@dataclass(frozen=True)
class CorpusManifest:
    """Ordered slice labels with their source files plus the tagset map."""

    slices: tuple[tuple[int, tuple[Path, ...]], ...]
    tagset_map: Mapping[str, str]

    def validate(self):
        labels = [label for label, _ in self.slices]
        if not labels:
            raise ManifestError("manifest defines no slices")
        for label in labels:
            if not isinstance(label, int) or isinstance(label, bool):
                raise ManifestError(f"slice label {label!r} is not an integer")
        for a, b in zip(labels, labels[1:]):
            if b <= a:
                raise ManifestError(
                    f"slice labels must be strictly increasing: {a} followed by {b}"
                )
        if not self.tagset_map:
            raise ManifestError("manifest defines no tagset classes")
        for name, pattern in self.tagset_map.items():
            try:
                re.compile(pattern)
            except re.error as exc:
                raise ManifestError(f"tag class {name}: bad pattern {pattern!r}: {exc}")
        return self


@dataclass(frozen=True)
class Corpus:
    """Immutable; safe to share across threads once built."""

    slices: tuple[Slice, ...]
    manifest: CorpusManifest
    tagger: str = "vertical"  # "vertical", "fallback" or "mixed"

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple(s.label for s in self.slices)

    def token_totals(self, exclude_tag_pattern: str | None = None) -> dict[int, int]:
        """Per-slice token totals.

        By default every non-markup token counts, punctuation included.
        ``exclude_tag_pattern`` (a regex searched against raw tags) removes
        matching tokens from the totals, for per-100k normalization that
        ignores e.g. punctuation tags.
        """
        if exclude_tag_pattern is None:
            return {s.label: s.token_total for s in self.slices}
        drop = re.compile(exclude_tag_pattern)
        out = {}
        for s in self.slices:
            dropped = sum(
                1 for sent in s.sentences for tok in sent.tokens if drop.search(tok.tag)
            )
            out[s.label] = s.token_total - dropped
        return out


_SENT_OPEN = re.compile(r"<s(\s|>)")


def parse_vertical_file(stream: str | Iterable[str], path=None):
    """Parse vertical text into sentences.

    ``stream`` is either the whole text or an iterable of lines.  Returns
    ``(sentences, token_count)``; markup lines are not counted.  Lemmas are
    lower-cased on read.  Raises VerticalParseError (with the 1-based line
    number) on lines that do not have exactly three tab-separated non-empty
    fields or whose lemma contains whitespace.
    """
    if isinstance(stream, str):
        lines = stream.split("\n")
    else:
        lines = stream
    sentences: list[Sentence] = []
    current: list[Token] = []
    total = 0

    def flush():
        nonlocal current
        if current:
            sentences.append(Sentence(tuple(current)))
            current = []

    for lineno, raw in enumerate(lines, 1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            flush()
            continue
        if line.startswith("<"):
            stripped = line.strip()
            if stripped == "</s>" or stripped == "<s>" or _SENT_OPEN.match(stripped):
                flush()
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise VerticalParseError(
                f"expected 3 tab-separated fields, got {len(parts)}", lineno, path
            )
        form, lemma, tag = parts
        lemma = lemma.lower()
        if not form or not lemma or not tag:
            raise VerticalParseError("empty form, lemma or tag field", lineno, path)
        if any(ch.isspace() for ch in lemma):
            raise VerticalParseError(f"lemma {lemma!r} contains whitespace", lineno, path)
        current.append(Token(form, lemma, tag))
        total += 1
    flush()
    return sentences, total


def write_vertical(sentences: Iterable[Sentence]) -> str:
    """Serialize sentences back to vertical format (``<s>``-delimited).

    Inverse of parse_vertical_file for any corpus it produced.  Forms that
    start with ``<`` cannot round-trip (they would re-read as markup).
    """
    out = []
    for sent in sentences:
        out.append("<s>")
        for tok in sent.tokens:
            out.append(f"{tok.form}\t{tok.lemma}\t{tok.tag}")
        out.append("</s>")
    out.append("")
    return "\n".join(out)


def load_manifest(path) -> CorpusManifest:
    """Read and validate a JSON manifest; file paths resolve against its directory."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{path}: not valid JSON: {exc}")
    if not isinstance(doc, dict):
        raise ManifestError(f"{path}: manifest must be a JSON object")
    if "slices" not in doc or "tagset" not in doc:
        raise ManifestError(f"{path}: manifest needs 'slices' and 'tagset'")
    base = path.parent
    slices = []
    for entry in doc["slices"]:
        if not isinstance(entry, dict) or "label" not in entry or "files" not in entry:
            raise ManifestError(f"{path}: each slice needs 'label' and 'files'")
        files = tuple((base / f).resolve() for f in entry["files"])
        for f in files:
            if not f.is_file():
                raise FileNotFoundError(f"manifest {path}: missing corpus file {f}")
        slices.append((entry["label"], files))
    tagset = doc["tagset"]
    if not isinstance(tagset, dict):
        raise ManifestError(f"{path}: 'tagset' must be an object")
    manifest = CorpusManifest(slices=tuple(slices), tagset_map=dict(tagset))
    manifest.validate()
    return manifest


def build_corpus(manifest: CorpusManifest) -> Corpus:
    """Build an in-memory corpus from a validated manifest.

    Files ending in ``.txt`` go through the naive fallback tagger; anything
    else is read as vertical format.  Files are merged in manifest order, so
    the result does not depend on processing order.
    """
    manifest.validate()
    from .tagger import fallback_tag  # local import, tagger depends on this module

    taggers_used = set()
    slices = []
    for label, files in manifest.slices:
        sentences: list[Sentence] = []
        total = 0
        for fpath in files:
            fpath = Path(fpath)
            if fpath.suffix == ".txt":
                tagged = fallback_tag(fpath.read_text(encoding="utf-8"))
                sentences.extend(tagged)
                total += sum(len(s) for s in tagged)
                taggers_used.add("fallback")
            else:
                try:
                    parsed, count = parse_vertical_file(
                        fpath.read_text(encoding="utf-8"), path=str(fpath)
                    )
                except VerticalParseError as exc:
                    raise VerticalParseError(
                        f"slice {label}: {exc.args[0]}", exc.line_number, exc.path
                    ) from exc
                sentences.extend(parsed)
                total += count
                taggers_used.add("vertical")
        slices.append(Slice(label=label, sentences=tuple(sentences), token_total=total))
    tagger = "mixed" if len(taggers_used) > 1 else (taggers_used or {"vertical"}).pop()
    return Corpus(slices=tuple(slices), manifest=manifest, tagger=tagger)


class TagClassifier:
    """Map raw tags to the first matching tag class, in tagset order.

    Tags matching no class map to "" so per-lemma totals stay exact.
    """

    def __init__(self, tagset_map: Mapping[str, str]):
        self._patterns = [(name, re.compile(pat)) for name, pat in tagset_map.items()]
        self._memo: dict[str, str] = {}

    def classify(self, tag: str) -> str:
        cls = self._memo.get(tag)
        if cls is None:
            cls = ""
            for name, pat in self._patterns:
                if pat.search(tag):
                    cls = name
                    break
            self._memo[tag] = cls
        return cls


def pos_counts(corpus: Corpus) -> dict[int, Counter]:
    """Per-slice Counter of (lemma, tag_class); each token counted once."""
    classifier = TagClassifier(corpus.manifest.tagset_map)
    out: dict[int, Counter] = {}
    for s in corpus.slices:
        counts: Counter = Counter()
        for sent in s.sentences:
            for tok in sent.tokens:
                counts[(tok.lemma, classifier.classify(tok.tag))] += 1
        out[s.label] = counts
    return out


def lemma_totals(corpus: Corpus) -> dict[int, Counter]:
    """Per-slice Counter of lemma occurrences, all tags pooled."""
    out: dict[int, Counter] = {}
    for s in corpus.slices:
        counts: Counter = Counter()
        for sent in s.sentences:
            for tok in sent.tokens:
                counts[tok.lemma] += 1
        out[s.label] = counts
    return out
