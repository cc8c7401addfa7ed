from hypothesis import given, strategies as st

from gramvar.tagger import fallback_tag


def flat(sentences):
    return [(t.form, t.lemma, t.tag) for s in sentences for t in s.tokens]


def test_golden_cascade():
    # pinned from walking the rule cascade by hand
    assert flat(fallback_tag("The networks converge.")) == [
        ("The", "the", "DT"),
        ("networks", "network", "NN"),
        ("converge", "converge", "VB"),
        (".", ".", "SENT"),
    ]


def test_empty_input():
    assert fallback_tag("") == []


def test_capitalized_mid_sentence_is_proper():
    tagged = flat(fallback_tag("we saw Smith and Jones arrive"))
    assert ("Smith", "smith", "NP") in tagged
    assert ("and", "and", "CC") in tagged
    assert ("Jones", "jones", "NP") in tagged


def test_sentence_initial_capital_not_proper():
    tagged = flat(fallback_tag("Networks converge."))
    assert tagged[0] == ("Networks", "network", "NN")


def test_suffix_rules():
    tagged = dict((form, (lemma, tag)) for form, lemma, tag in
                  flat(fallback_tag("we quickly derived a useful converging bound")))
    assert tagged["quickly"] == ("quickly", "RB")
    assert tagged["derived"] == ("derive", "VBN")  # lexicon-verb stem
    assert tagged["useful"] == ("useful", "NN")  # no -ful rule: default noun
    assert tagged["converging"] == ("converge", "VBG")
    assert tagged["bound"] == ("bound", "NN")


def test_adjective_suffixes():
    tagged = dict((form, tag) for form, _, tag in
                  flat(fallback_tag("a general optimal adaptive stable scheme")))
    assert tagged["general"] == "JJ"
    assert tagged["optimal"] == "JJ"
    assert tagged["adaptive"] == "JJ"


def test_lemma_exceptions_kept():
    tagged = dict((form, lemma) for form, lemma, _ in
                  flat(fallback_tag("the training and learning results")))
    assert tagged["training"] == "training"
    assert tagged["learning"] == "learning"
    assert tagged["results"] == "result"


def test_sentence_split_on_terminators():
    sentences = fallback_tag("It works. It converges! Does it fail? No.")
    assert len(sentences) == 4


@given(st.text(max_size=200))
def test_total_every_token_tagged_once(text):
    import re
    expected = re.findall(r"\w+(?:[-']\w+)*|[^\w\s]", text)
    got = [t.form for s in fallback_tag(text) for t in s.tokens]
    assert got == expected
    for s in fallback_tag(text):
        for t in s.tokens:
            assert t.tag
            assert t.lemma
