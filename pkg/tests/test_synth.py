"""The generator is the oracle: planted counts must come back exactly."""

import pytest

from gramvar.corpus import build_corpus, load_manifest, pos_counts
from gramvar.grammar import extract_relation_counts, load_default_grammar
from gramvar.stats import frequency_series_from_counts
from gramvar.synth import PlantedLemma, demo_plants, generate_corpus

TOKENS = 2000
N = 13


@pytest.fixture(scope="module")
def built(tmp_path_factory):
    out = tmp_path_factory.mktemp("synth") / "corpus"
    paths = generate_corpus(out, tokens_per_slice=TOKENS, seed=9)
    manifest = load_manifest(paths["manifest"])
    corpus = build_corpus(manifest)
    grammar = load_default_grammar(manifest.tagset_map)
    return paths, corpus, extract_relation_counts(corpus, grammar)


def test_every_slice_has_exact_token_total(built):
    _, corpus, _ = built
    assert corpus.token_totals() == {label: TOKENS for label in corpus.labels}


def test_planted_lemma_counts_exact(built):
    paths, corpus, _ = built
    counts = pos_counts(corpus)
    for plant in paths["plants"]:
        for label, expected in zip(corpus.labels, plant.counts):
            assert counts[label][(plant.lemma, "NOUN")] == expected


def test_planted_relation_series_per_100k_matches_plan(built):
    """Engineered relation proportions come back as exact per-100k values."""
    paths, corpus, table = built
    scale = 1e5 / TOKENS
    for plant in paths["plants"]:
        for relation, plan in (("a_modified", plant.a_modified),
                               ("subject_of", plant.subject_of)):
            series = frequency_series_from_counts(
                table.series_counts(plant.lemma, relation),
                corpus.token_totals(), target=f"{plant.lemma}@{relation}")
            assert series.per_100k == tuple(v * scale for v in plan)


def test_planted_lemmas_only_planted_relations(built):
    paths, _, table = built
    for plant in paths["plants"]:
        for label in table.labels:
            total = table.total(plant.lemma, label)
            expected = plant.a_modified[table.labels.index(label)] \
                + plant.subject_of[table.labels.index(label)]
            assert total == expected


def test_generator_deterministic(tmp_path):
    a = generate_corpus(tmp_path / "a", tokens_per_slice=500, seed=4,
                        labels=(1, 2, 3))
    b = generate_corpus(tmp_path / "b", tokens_per_slice=500, seed=4,
                        labels=(1, 2, 3))
    for label in (1, 2, 3):
        name = f"slice_{label}.vert"
        assert (a["out_dir"] / name).read_bytes() == (b["out_dir"] / name).read_bytes()


def test_demo_plants_shape():
    plants = {p.lemma: p for p in demo_plants(N)}
    rise = plants["riseterm"]
    assert rise.counts[0] == 100 and rise.counts[-1] == 800
    peak = plants["peakterm"]
    word_peak = peak.counts.index(max(peak.counts))
    rel_peak = peak.a_modified.index(max(peak.a_modified))
    assert word_peak - rel_peak == 2
    flat = plants["flatterm"]
    assert len(set(flat.counts)) == 1


def test_over_budget_plan_rejected(tmp_path):
    plant = PlantedLemma("huge", (1000,), (1,), (1,))
    with pytest.raises(ValueError):
        generate_corpus(tmp_path / "x", tokens_per_slice=100, labels=(1,),
                        plants=[plant])


def test_relation_plan_exceeding_count_rejected():
    with pytest.raises(ValueError):
        PlantedLemma("bad", (5,), (3,), (3,)).validate(1)
