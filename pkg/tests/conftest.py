import pytest

from gramvar.corpus import (Corpus, CorpusManifest, DEFAULT_TAGSET, Sentence,
                            Slice, Token)


def make_sentence(spec: str) -> Sentence:
    """Build a sentence from 'form/lemma/TAG form/lemma/TAG ...'."""
    tokens = []
    for part in spec.split():
        form, lemma, tag = part.split("/")
        tokens.append(Token(form, lemma, tag))
    return Sentence(tuple(tokens))


def make_corpus(slices: dict[int, list[str]], tagset=DEFAULT_TAGSET) -> Corpus:
    """In-memory corpus from {label: [sentence_spec, ...]}."""
    built = []
    for label in sorted(slices):
        sentences = tuple(make_sentence(spec) for spec in slices[label])
        built.append(Slice(
            label=label,
            sentences=sentences,
            token_total=sum(len(s) for s in sentences),
        ))
    manifest = CorpusManifest(
        slices=tuple((label, ()) for label in sorted(slices)),
        tagset_map=dict(tagset),
    ).validate()
    return Corpus(slices=tuple(built), manifest=manifest)


@pytest.fixture
def default_grammar():
    from gramvar.grammar import load_default_grammar
    return load_default_grammar(DEFAULT_TAGSET)
