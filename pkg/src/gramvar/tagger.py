"""Naive rule-based fallback tagger for plain text.

Exists so the pipeline can run on raw ``.txt`` input when no tagged corpus
is available.  The cascade is deliberately simple: a small closed-class
lexicon, a capitalization heuristic for unknown mid-sentence words, a few
suffix rules, and noun by default.  Corpora built through it are flagged
``fallback`` in index metadata; for real analyses bring a properly tagged
vertical corpus instead.
"""

from __future__ import annotations

import re

from .corpus import Sentence, Token

# word -> (lemma, tag); lookup is case-insensitive
_LEXICON: dict[str, tuple[str, str]] = {}


def _add(tag, *entries):
    for entry in entries:
        if isinstance(entry, tuple):
            word, lemma = entry
        else:
            word = lemma = entry
        _LEXICON[word] = (lemma, tag)


_add("DT", "the", "a", "an", "this", "these", ("those", "that"), "that",
     "each", "every", "some", "any", "no", "all", "both", "either", "neither")
_add("CC", "and", "or", "but", "nor")
_add("IN", "of", "in", "on", "at", "by", "for", "with", "from", "to", "into",
     "over", "under", "during", "between", "through", "after", "before",
     "above", "below", "without", "within", "as", "than", "if", "because",
     "while", "since", "against", "about")
_add("PP", "i", "you", "he", "she", "it", "we", "they", "them", "him", "her",
     "us", "me", "one")
_add("PP$", "my", "your", "his", "its", "our", "their")
_add("RB", "not", "also", "very", "only", "always", "often", "rarely",
     "never", "however", "then", "thus", "here", "there", "more", "most",
     "less", "well")
_add("MD", "can", "could", "will", "would", "shall", "should", "may",
     "might", "must")
_add("WDT", "which", "what", "whose")
_add("WP", "who", "whom")
_add("WRB", "when", "where", "why", "how")

# Common verbs: base form plus inflections, all lemmatized to the base.
_VERBS = [
    "be", "have", "do", "use", "show", "give", "make", "take", "get", "see",
    "find", "train", "learn", "converge", "compute", "derive", "apply",
    "present", "propose", "describe", "define", "require", "provide",
    "obtain", "perform", "increase", "decrease", "improve", "achieve",
    "consider", "compare", "follow", "yield", "contain", "produce", "allow",
    "become", "remain", "include", "suggest", "run", "work", "test",
]
_IRREGULAR = {
    "be": [("is", "VBZ"), ("are", "VBP"), ("am", "VBP"), ("was", "VBD"),
           ("were", "VBD"), ("been", "VBN"), ("being", "VBG")],
    "have": [("has", "VBZ"), ("had", "VBD"), ("having", "VBG")],
    "do": [("does", "VBZ"), ("did", "VBD"), ("done", "VBN"), ("doing", "VBG")],
    "give": [("gave", "VBD"), ("given", "VBN")],
    "make": [("made", "VBD")],
    "take": [("took", "VBD"), ("taken", "VBN")],
    "get": [("got", "VBD"), ("getting", "VBG")],
    "see": [("saw", "VBD"), ("seen", "VBN")],
    "find": [("found", "VBD")],
    "run": [("ran", "VBD"), ("running", "VBG")],
    "become": [("became", "VBD")],
    "yield": [],
}
# Only base forms and irregular inflections live in the lexicon; regular
# -ing/-ed forms are derived by the suffix rules against these stems.
for base in _VERBS:
    _add("VB", base)
    for word, tag in _IRREGULAR.get(base, []):
        _add(tag, (word, base))

# Words whose suffix must not be stripped when lemmatizing.
_LEMMA_EXCEPTIONS = {
    "training", "learning", "nothing", "something", "anything", "everything",
    "thing", "string", "morning", "evening", "building", "meaning", "setting",
    "bias", "basis", "analysis", "series", "process", "class", "this", "thus",
    "gas", "lens", "its",
}

_TOKEN_RE = re.compile(r"\w+(?:[-']\w+)*|[^\w\s]")
_SENT_SPLIT_RE = re.compile(r"(?<=[.!?])\s+")
_SENT_END = {".", "!", "?"}


def _naive_lemma(word: str) -> str:
    low = word.lower()
    if low in _LEMMA_EXCEPTIONS:
        return low
    if low.endswith("ing") and len(low) > 5:
        return low[:-3]
    if low.endswith("ed") and len(low) > 4:
        return low[:-2]
    if low.endswith("s") and not low.endswith("ss") and len(low) > 3:
        return low[:-1]
    return low


def _tag_word(word: str, sentence_initial: bool) -> tuple[str, str]:
    """Run the rule cascade; returns (lemma, tag)."""
    low = word.lower()
    hit = _LEXICON.get(low)
    if hit is not None:
        return hit
    if word[0].isupper() and not sentence_initial:
        return low, "NP"
    if low.endswith("ly"):
        return low, "RB"
    # lexicalized -ing/-ed nouns in the exception list skip verb derivation
    if low not in _LEMMA_EXCEPTIONS:
        if low.endswith("ing") and len(low) > 4:
            stem = _LEXICON.get(low[:-3]) or _LEXICON.get(low[:-3] + "e")
            if stem is not None and stem[1].startswith("VB"):
                return stem[0], "VBG"
        if low.endswith("ed") and len(low) > 3:
            stem = _LEXICON.get(low[:-2]) or _LEXICON.get(low[:-1])
            if stem is not None and stem[1].startswith("VB"):
                return stem[0], "VBN"
    if low.endswith(("ous", "al", "ive", "able")):
        return low, "JJ"
    return _naive_lemma(word), "NN"


def fallback_tag(text: str) -> list[Sentence]:
    """Tokenize, sentence-split, tag and lemmatize plain text.

    Total: every token appears exactly once in the output with a non-empty
    tag.  Punctuation becomes its own token (``.!?`` tagged SENT, any other
    mark tagged as itself).
    """
    sentences = []
    for chunk in _SENT_SPLIT_RE.split(text):
        words = _TOKEN_RE.findall(chunk)
        if not words:
            continue
        tokens = []
        seen_word = False
        for word in words:
            if word[0].isalnum() or word[0] == "_":
                lemma, tag = _tag_word(word, sentence_initial=not seen_word)
                seen_word = True
            else:
                lemma, tag = word, ("SENT" if word in _SENT_END else word)
            tokens.append(Token(word, lemma, tag))
        sentences.append(Sentence(tuple(tokens)))
    return sentences
