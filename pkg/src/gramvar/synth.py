"""Synthetic tagged-corpus generator.

Writes a time-sliced vertical corpus with known ground truth: planted
lemmas get exact per-slice occurrence counts (split between an
adjective-modified context, a subject context and bare mentions) on top of
random background sentences, and every slice is padded to an exact token
total so relative frequencies of planted lemmas are fully controlled.
Also emits a matching manifest and a reference keyness profile in which
the planted lemmas are absent (so they rank on top).

Usage:
    python -m gramvar.synth out_dir --tokens-per-slice 100000 --seed 7
"""

from __future__ import annotations

import argparse
import json
import random
from dataclasses import dataclass
from pathlib import Path

from .corpus import DEFAULT_TAGSET

_NOUNS = [
    "model", "system", "function", "method", "data", "result", "approach",
    "error", "input", "output", "unit", "layer", "weight", "vector", "state",
    "problem", "solution", "value", "signal", "image", "feature", "sample",
    "distribution", "parameter", "estimate", "node", "graph", "matrix",
    "kernel", "space", "bound", "rate", "step", "measure", "term", "case",
    "task", "test", "process", "structure", "pattern", "field", "point",
    "level", "form", "time", "number", "order", "part", "set",
]
_VERBS = [
    ("shows", "show"), ("gives", "give"), ("uses", "use"), ("yields", "yield"),
    ("computes", "compute"), ("produces", "produce"), ("contains", "contain"),
    ("requires", "require"), ("provides", "provide"), ("defines", "define"),
    ("improves", "improve"), ("follows", "follow"), ("describes", "describe"),
]
_ADJS = [
    "early", "simple", "large", "small", "linear", "complex", "general",
    "local", "global", "optimal", "standard", "common", "stable", "sparse",
]
_ADVS = ["quickly", "often", "clearly", "slightly", "rarely"]


@dataclass(frozen=True)
class PlantedLemma:
    """Exact per-slice occurrence plan for one noun.

    ``counts`` is the total number of occurrences per slice;
    ``a_modified`` of them appear adjective-modified, ``subject_of`` as
    subjects, the rest as bare mentions.
    """

    lemma: str
    counts: tuple[int, ...]
    a_modified: tuple[int, ...]
    subject_of: tuple[int, ...]

    def validate(self, n_slices: int):
        if not (len(self.counts) == len(self.a_modified)
                == len(self.subject_of) == n_slices):
            raise ValueError(f"{self.lemma}: plan length != {n_slices}")
        for i, (c, a, s) in enumerate(zip(self.counts, self.a_modified, self.subject_of)):
            if a + s > c:
                raise ValueError(f"{self.lemma}: slice {i}: relations exceed count")
        return self


def demo_plants(n_slices: int = 13) -> list[PlantedLemma]:
    """Three ground-truth lemmas: geometric 8x growth with exact endpoints,
    a negative-trend word whose adjective modification peaks two slices
    before the word itself, and a perfectly constant word."""
    growth = [round(100 * 8 ** (t / (n_slices - 1))) for t in range(n_slices)]
    growth[0], growth[-1] = 100, 800
    peak_idx = n_slices - 5
    overall = [200 - 5 * t for t in range(n_slices)]
    overall[peak_idx] = 300
    a_mod = [15] * n_slices
    a_mod[peak_idx - 2] = 40
    return [
        PlantedLemma("riseterm", tuple(growth),
                     (10,) * n_slices, (8,) * n_slices).validate(n_slices),
        PlantedLemma("peakterm", tuple(overall),
                     tuple(a_mod), (12,) * n_slices).validate(n_slices),
        PlantedLemma("flatterm", (50,) * n_slices,
                     (10,) * n_slices, (10,) * n_slices).validate(n_slices),
    ]


def _planted_sentences(plant: PlantedLemma, slice_idx: int) -> list[list[tuple[str, str, str]]]:
    lemma = plant.lemma
    noun = (lemma, lemma, "NN")
    dot = (".", ".", "SENT")
    a_sent = [("the", "the", "DT"), ("early", "early", "JJ"), noun, dot]
    s_sent = [("the", "the", "DT"), noun, ("improves", "improve", "VBZ"), dot]
    b_sent = [("the", "the", "DT"), noun, dot]
    a = plant.a_modified[slice_idx]
    s = plant.subject_of[slice_idx]
    bare = plant.counts[slice_idx] - a - s
    return [a_sent] * a + [s_sent] * s + [b_sent] * bare


def _background_sentence(rng: random.Random) -> list[tuple[str, str, str]]:
    kind = rng.randrange(4)
    dot = (".", ".", "SENT")
    if kind == 0:  # a_modified + subject_of + object_of
        verb = rng.choice(_VERBS)
        return [("the", "the", "DT"), (rng.choice(_ADJS),) * 2 + ("JJ",),
                (rng.choice(_NOUNS),) * 2 + ("NN",), (verb[0], verb[1], "VBZ"),
                ("the", "the", "DT"), (rng.choice(_NOUNS),) * 2 + ("NN",), dot]
    if kind == 1:  # and/or coordination
        conj = rng.choice(["and", "or"])
        return [("the", "the", "DT"), (rng.choice(_NOUNS),) * 2 + ("NN",),
                (conj, conj, "CC"), (rng.choice(_NOUNS),) * 2 + ("NN",), dot]
    if kind == 2:  # noun-noun modifier + subject_of
        verb = rng.choice(_VERBS)
        return [("the", "the", "DT"), (rng.choice(_NOUNS),) * 2 + ("NN",),
                (rng.choice(_NOUNS),) * 2 + ("NN",), (verb[0], verb[1], "VBZ"), dot]
    adv = rng.choice(_ADVS)
    return [("it", "it", "PP"), ("is", "be", "VBZ"), (adv, adv, "RB"),
            (rng.choice(_ADJS),) * 2 + ("JJ",), dot]


def generate_corpus(out_dir, tokens_per_slice: int = 100_000,
                    labels=tuple(range(1987, 2000)),
                    plants: list[PlantedLemma] | None = None,
                    seed: int = 0) -> dict:
    """Write slice files, manifest.json and reference.csv; returns their paths.

    Every slice holds exactly ``tokens_per_slice`` tokens (filler
    single-token sentences make up any remainder), so planted per-slice
    counts are also exact per-100k rates when tokens_per_slice is 100000.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    labels = tuple(labels)
    if plants is None:
        plants = demo_plants(len(labels))
    for plant in plants:
        plant.validate(len(labels))
    rng = random.Random(seed)

    slice_entries = []
    for i, label in enumerate(labels):
        lines: list[str] = []
        used = 0

        def emit(sentence):
            nonlocal used
            lines.append("<s>")
            for form, lemma, tag in sentence:
                lines.append(f"{form}\t{lemma}\t{tag}")
            lines.append("</s>")
            used += len(sentence)

        for plant in plants:
            for sentence in _planted_sentences(plant, i):
                emit(sentence)
        if used > tokens_per_slice:
            raise ValueError(f"slice {label}: planted tokens exceed tokens_per_slice")
        while used + 7 <= tokens_per_slice:
            emit(_background_sentence(rng))
        while used < tokens_per_slice:
            emit([("of", "of", "IN")])

        fname = f"slice_{label}.vert"
        (out_dir / fname).write_text("\n".join(lines) + "\n", encoding="utf-8")
        slice_entries.append({"label": label, "files": [fname]})

    manifest_path = out_dir / "manifest.json"
    manifest_path.write_text(
        json.dumps({"slices": slice_entries, "tagset": DEFAULT_TAGSET}, indent=2) + "\n",
        encoding="utf-8",
    )

    # Background nouns get generous reference counts; planted lemmas are
    # absent, so their keyness ratio dwarfs everything else.
    reference_path = out_dir / "reference.csv"
    ref_lines = ["#total_tokens=1000000", "lemma,count"]
    ref_lines += [f"{noun},10000" for noun in sorted(_NOUNS)]
    reference_path.write_text("\n".join(ref_lines) + "\n", encoding="utf-8")

    return {
        "out_dir": out_dir,
        "manifest": manifest_path,
        "reference": reference_path,
        "labels": labels,
        "plants": plants,
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description="Generate a synthetic time-sliced vertical corpus with "
                    "planted ground-truth trends."
    )
    parser.add_argument("out_dir")
    parser.add_argument("--tokens-per-slice", type=int, default=100_000)
    parser.add_argument("--slices", type=int, default=13)
    parser.add_argument("--first-label", type=int, default=1987)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    labels = tuple(range(args.first_label, args.first_label + args.slices))
    paths = generate_corpus(args.out_dir, tokens_per_slice=args.tokens_per_slice,
                            labels=labels, seed=args.seed)
    print(f"wrote {len(labels)} slices under {paths['out_dir']}")
    print(f"manifest: {paths['manifest']}")
    print(f"reference profile: {paths['reference']}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
