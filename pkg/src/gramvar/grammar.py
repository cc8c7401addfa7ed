"""Tag-pattern grammar: a small DSL for extracting grammatical relations.

Grammar files hold one rule per stanza::

    # noun-noun modification
    RELATION modifier n_modified
    PATTERN 1:NOUN 2:NOUN

``RELATION`` names what each of the two slots emits (``-`` disables a
slot).  ``PATTERN`` is a flat sequence of elements
``[slot:]CLASS[{lemma|lemma}][*]`` where CLASS is a tag class from the
corpus manifest, the optional ``{...}`` restricts the token's lemma, and
``*`` means zero-or-more.  Exactly one element carries slot 1 and one
carries slot 2; slotted elements cannot repeat.

Matching is leftmost-longest and non-overlapping within one rule; distinct
rules match independently and may overlap.  Each match emits up to two
RelationRecords: the slot-1 token under the rule's first name with the
slot-2 token as collocate, and vice versa.

The scan over encoded sentences runs in a compiled kernel when the
extension built from _scan.pyx is available, otherwise in the pure-Python
twin; ``MATCHER_KERNEL`` says which one is active.  Set GRAMVAR_NO_EXT=1
before import to force the fallback.
"""

from __future__ import annotations

import csv
import hashlib
import io
import os
import re
from array import array
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Mapping

from .corpus import Corpus, Sentence
from .errors import GrammarError

if os.environ.get("GRAMVAR_NO_EXT"):
    from . import _scan_py as _kernel
else:
    try:
        from . import _scan as _kernel  # type: ignore[no-redef]
    except ImportError:
        from . import _scan_py as _kernel

MATCHER_KERNEL = _kernel.KERNEL


@dataclass(frozen=True)
class TokenMatcher:
    tag_class: str
    lemma_constraint: frozenset[str] | None = None
    slot: int | None = None


@dataclass(frozen=True)
class Pattern:
    # repetition is "one" or "star"
    elements: tuple[tuple[TokenMatcher, str], ...]


@dataclass(frozen=True)
class RelationRule:
    name_for_slot1: str  # "" when disabled with "-"
    name_for_slot2: str
    pattern: Pattern


@dataclass(frozen=True)
class RelationRecord:
    slice_label: int | None
    lemma: str
    relation: str
    collocate: str
    sentence_index: int
    token_index: int


_ELEM_RE = re.compile(
    r"^(?:(?P<slot>[12]):)?(?P<cls>[A-Za-z_][A-Za-z0-9_]*)"
    r"(?:\{(?P<lemmas>[^{}]*)\})?(?P<star>\*)?$"
)


class Grammar:
    """Compiled rule set bound to one tagset map."""

    def __init__(self, rules: tuple[RelationRule, ...], tagset_map: Mapping[str, str],
                 source_hash: str):
        self.rules = rules
        self.tagset_map = dict(tagset_map)
        self.source_hash = source_hash
        self._compile()

    @property
    def relation_names(self) -> tuple[str, ...]:
        names = []
        for rule in self.rules:
            for name in (rule.name_for_slot1, rule.name_for_slot2):
                if name and name not in names:
                    names.append(name)
        return tuple(names)

    def _compile(self):
        classes = list(self.tagset_map)
        if len(classes) > 64:
            raise GrammarError("more than 64 tag classes are not supported")
        class_bit = {name: 1 << i for i, name in enumerate(classes)}
        self._class_regexes = [re.compile(self.tagset_map[name]) for name in classes]

        lemma_sets: list[frozenset[str]] = []
        meta = array("l")
        e_class = array("Q")
        e_lemma = array("Q")
        e_star = array("b")
        for rule in self.rules:
            base = len(e_class)
            slot_elem = {1: -1, 2: -1}
            for idx, (matcher, repetition) in enumerate(rule.pattern.elements):
                if matcher.tag_class not in class_bit:
                    raise GrammarError(f"unknown tag class {matcher.tag_class!r}")
                e_class.append(class_bit[matcher.tag_class])
                if matcher.lemma_constraint:
                    if matcher.lemma_constraint in lemma_sets:
                        set_idx = lemma_sets.index(matcher.lemma_constraint)
                    else:
                        set_idx = len(lemma_sets)
                        lemma_sets.append(matcher.lemma_constraint)
                    e_lemma.append(1 << set_idx)
                else:
                    e_lemma.append(0)
                e_star.append(1 if repetition == "star" else 0)
                if matcher.slot is not None:
                    slot_elem[matcher.slot] = idx
            meta.extend([base, len(rule.pattern.elements), slot_elem[1], slot_elem[2]])
        if len(lemma_sets) > 64:
            raise GrammarError("more than 64 distinct lemma constraints are not supported")
        self._lemma_sets = lemma_sets
        self._meta = meta
        self._e_class = e_class
        self._e_lemma = e_lemma
        self._e_star = e_star
        self._tag_memo: dict[str, int] = {}
        self._lemma_memo: dict[str, int] = {}

    def _tag_mask(self, tag: str) -> int:
        mask = self._tag_memo.get(tag)
        if mask is None:
            mask = 0
            for i, pat in enumerate(self._class_regexes):
                if pat.search(tag):
                    mask |= 1 << i
            self._tag_memo[tag] = mask
        return mask

    def _lemma_mask(self, lemma: str) -> int:
        mask = self._lemma_memo.get(lemma)
        if mask is None:
            mask = 0
            for i, lemmas in enumerate(self._lemma_sets):
                if lemma in lemmas:
                    mask |= 1 << i
            self._lemma_memo[lemma] = mask
        return mask

    def encode_sentence(self, sentence: Sentence):
        tmask = self._tag_mask
        lmask = self._lemma_mask
        masks = array("Q", [tmask(tok.tag) for tok in sentence.tokens])
        lmasks = array("Q", [lmask(tok.lemma) for tok in sentence.tokens])
        return masks, lmasks

    def scan(self, sentence: Sentence) -> list[tuple[int, int, int]]:
        """Raw kernel output: (rule_index, slot1_pos, slot2_pos) per match."""
        masks, lmasks = self.encode_sentence(sentence)
        return _kernel.scan(masks, lmasks, self._meta,
                            self._e_class, self._e_lemma, self._e_star)


def parse_grammar(stream: str | Iterable[str], tagset_map: Mapping[str, str]) -> Grammar:
    """Parse and compile grammar text against a tagset map.

    Raises GrammarError (with line number) for syntax problems, unknown tag
    classes, missing/duplicated slots, starred slotted elements, rules where
    both names are "-", or relation names reused across rules.
    """
    if isinstance(stream, str):
        text = stream
    else:
        text = "".join(stream)
    source_hash = hashlib.sha256(text.encode("utf-8")).hexdigest()

    rules: list[RelationRule] = []
    pending: tuple[int, str, str] | None = None  # (lineno, name1, name2)
    seen_names: dict[str, int] = {}
    for lineno, raw in enumerate(text.split("\n"), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        keyword = fields[0].upper()
        if keyword == "RELATION":
            if pending is not None:
                raise GrammarError("RELATION without a following PATTERN", pending[0])
            if len(fields) != 3:
                raise GrammarError("RELATION needs exactly two names", lineno)
            name1 = "" if fields[1] == "-" else fields[1]
            name2 = "" if fields[2] == "-" else fields[2]
            if not name1 and not name2:
                raise GrammarError("at least one relation name must not be '-'", lineno)
            pending = (lineno, name1, name2)
        elif keyword == "PATTERN":
            if pending is None:
                raise GrammarError("PATTERN without a preceding RELATION", lineno)
            elements = _parse_elements(fields[1:], tagset_map, lineno)
            _, name1, name2 = pending
            for name in (name1, name2):
                if name and name in seen_names and seen_names[name] != pending[0]:
                    raise GrammarError(
                        f"relation name {name!r} already used by another rule", lineno
                    )
                if name:
                    seen_names[name] = pending[0]
            rules.append(RelationRule(name1, name2, Pattern(tuple(elements))))
            pending = None
        else:
            raise GrammarError(f"unexpected line {line!r}", lineno)
    if pending is not None:
        raise GrammarError("RELATION without a following PATTERN", pending[0])
    if not rules:
        raise GrammarError("grammar defines no rules")
    return Grammar(tuple(rules), tagset_map, source_hash)


def _parse_elements(raw_elems, tagset_map, lineno):
    if not raw_elems:
        raise GrammarError("PATTERN needs at least one element", lineno)
    elements = []
    slots_seen = set()
    for raw in raw_elems:
        m = _ELEM_RE.match(raw)
        if m is None:
            raise GrammarError(f"bad pattern element {raw!r}", lineno)
        slot = int(m.group("slot")) if m.group("slot") else None
        cls = m.group("cls")
        if cls not in tagset_map:
            raise GrammarError(f"unknown tag class {cls!r}", lineno)
        star = m.group("star") is not None
        if slot is not None:
            if star:
                raise GrammarError("slotted elements cannot repeat ('*')", lineno)
            if slot in slots_seen:
                raise GrammarError(f"slot {slot} appears twice", lineno)
            slots_seen.add(slot)
        lemmas = None
        if m.group("lemmas") is not None:
            lemmas = frozenset(
                l.strip().lower() for l in m.group("lemmas").split("|") if l.strip()
            )
            if not lemmas:
                raise GrammarError(f"empty lemma constraint in {raw!r}", lineno)
        elements.append((TokenMatcher(cls, lemmas, slot), "star" if star else "one"))
    if slots_seen != {1, 2}:
        raise GrammarError("pattern must carry slot 1 and slot 2 exactly once", lineno)
    return elements


def load_default_grammar(tagset_map: Mapping[str, str]) -> Grammar:
    """Compile the bundled default grammar (noun modification, subject/object
    adjacency windows, binary and/or coordination)."""
    text = resources.files("gramvar.data").joinpath("default.grammar").read_text("utf-8")
    return parse_grammar(text, tagset_map)


def match_sentence(grammar: Grammar, sentence: Sentence,
                   slice_label: int | None = None,
                   sentence_index: int = 0) -> list[RelationRecord]:
    """All relation records in one sentence, ordered by token index then rule.

    Pure function of (grammar, sentence); the provenance arguments only fill
    the corresponding record fields.
    """
    keyed = []
    for rule_idx, s1, s2 in grammar.scan(sentence):
        rule = grammar.rules[rule_idx]
        tok1 = sentence.tokens[s1]
        tok2 = sentence.tokens[s2]
        if rule.name_for_slot1:
            keyed.append((s1, rule_idx, RelationRecord(
                slice_label, tok1.lemma, rule.name_for_slot1, tok2.lemma,
                sentence_index, s1)))
        if rule.name_for_slot2:
            keyed.append((s2, rule_idx, RelationRecord(
                slice_label, tok2.lemma, rule.name_for_slot2, tok1.lemma,
                sentence_index, s2)))
    keyed.sort(key=lambda item: (item[0], item[1]))
    return [record for _, _, record in keyed]


@dataclass
class RelationFrequencyTable:
    """Counts of (lemma, relation) per slice with per-lemma marginals."""

    counts: dict[tuple[str, str, int], int]
    lemma_slice_totals: dict[tuple[str, int], int]
    lemma_slice_relations: dict[tuple[str, int], frozenset[str]]
    labels: tuple[int, ...]
    relations: tuple[str, ...] = ()

    def count(self, lemma: str, relation: str, label: int) -> int:
        return self.counts.get((lemma, relation, label), 0)

    def total(self, lemma: str, label: int) -> int:
        return self.lemma_slice_totals.get((lemma, label), 0)

    def distinct_relation_count(self, lemma: str, label: int) -> int:
        return len(self.lemma_slice_relations.get((lemma, label), ()))

    def series_counts(self, lemma: str, relation: str) -> dict[int, int]:
        return {label: self.count(lemma, relation, label) for label in self.labels}

    def lemmas(self) -> tuple[str, ...]:
        return tuple(sorted({lemma for lemma, _ in self.lemma_slice_totals}))

    @classmethod
    def from_slice_counts(cls, per_slice: Mapping[int, Mapping[tuple[str, str], int]],
                          relations: tuple[str, ...] = ()) -> "RelationFrequencyTable":
        counts: dict[tuple[str, str, int], int] = {}
        totals: dict[tuple[str, int], int] = {}
        rels: dict[tuple[str, int], set[str]] = {}
        for label in sorted(per_slice):
            for (lemma, relation), n in per_slice[label].items():
                if n == 0:
                    continue
                counts[(lemma, relation, label)] = counts.get((lemma, relation, label), 0) + n
                totals[(lemma, label)] = totals.get((lemma, label), 0) + n
                rels.setdefault((lemma, label), set()).add(relation)
        return cls(
            counts=counts,
            lemma_slice_totals=totals,
            lemma_slice_relations={k: frozenset(v) for k, v in rels.items()},
            labels=tuple(sorted(per_slice)),
            relations=relations,
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["lemma", "relation", "slice", "count"])
        for (lemma, relation, label) in sorted(self.counts):
            writer.writerow([lemma, relation, label, self.counts[(lemma, relation, label)]])
        return buf.getvalue()


def extract_relation_counts(corpus: Corpus, grammar: Grammar) -> RelationFrequencyTable:
    """Run the grammar over every sentence and aggregate relation counts.

    Equals the per-sentence sum of match_sentence record counts grouped by
    (lemma, relation, slice); sentences are independent, so any evaluation
    order gives the same table.
    """
    per_slice: dict[int, Counter] = {}
    for sl in corpus.slices:
        counts: Counter = Counter()
        scan = grammar.scan
        rules = grammar.rules
        for sentence in sl.sentences:
            for rule_idx, s1, s2 in scan(sentence):
                rule = rules[rule_idx]
                if rule.name_for_slot1:
                    counts[(sentence.tokens[s1].lemma, rule.name_for_slot1)] += 1
                if rule.name_for_slot2:
                    counts[(sentence.tokens[s2].lemma, rule.name_for_slot2)] += 1
        per_slice[sl.label] = counts
    return RelationFrequencyTable.from_slice_counts(per_slice, grammar.relation_names)
