import json

import pytest
from hypothesis import given, strategies as st

from gramvar.corpus import (DEFAULT_TAGSET, Sentence, Token,
                            build_corpus, lemma_totals, load_manifest,
                            parse_vertical_file, pos_counts, write_vertical)
from gramvar.errors import ManifestError, VerticalParseError

VERT = "training\ttraining\tNN\npattern\tpattern\tNN\n"


class TestParseVertical:
    def test_empty_input(self):
        assert parse_vertical_file("") == ([], 0)

    def test_minimal_two_tokens(self):
        sentences, count = parse_vertical_file(VERT)
        assert count == 2
        assert len(sentences) == 1
        assert sentences[0].tokens == (
            Token("training", "training", "NN"),
            Token("pattern", "pattern", "NN"),
        )

    def test_bad_middle_line_reports_line_number(self):
        text = "a\ta\tDT\nbadline\nb\tb\tNN\n"
        with pytest.raises(VerticalParseError) as exc:
            parse_vertical_file(text)
        assert exc.value.line_number == 2

    def test_blank_line_splits_sentences(self):
        sentences, count = parse_vertical_file(VERT + "\n" + VERT)
        assert len(sentences) == 2
        assert count == 4

    def test_s_markers_split_sentences(self):
        text = "<s>\na\ta\tDT\n</s>\n<s>\nb\tb\tNN\n</s>\n"
        sentences, count = parse_vertical_file(text)
        assert [len(s) for s in sentences] == [1, 1]
        assert count == 2

    def test_markup_skipped_and_not_counted(self):
        text = '<doc id="1">\n<p>\n' + VERT + "</doc>\n"
        sentences, count = parse_vertical_file(text)
        assert count == 2
        assert len(sentences) == 1

    def test_lemma_lowercased(self):
        sentences, _ = parse_vertical_file("Smith\tSmith\tNP\n")
        assert sentences[0].tokens[0].lemma == "smith"

    def test_empty_field_rejected(self):
        with pytest.raises(VerticalParseError):
            parse_vertical_file("x\t\tNN\n")

    def test_lemma_whitespace_rejected(self):
        with pytest.raises(VerticalParseError):
            parse_vertical_file("x\ta b\tNN\n")

    def test_empty_sentences_dropped(self):
        text = "<s>\n</s>\n<s>\na\ta\tDT\n</s>\n"
        sentences, _ = parse_vertical_file(text)
        assert len(sentences) == 1


class TestManifest:
    def _write(self, tmp_path, labels, tagset=None, make_files=True):
        files = {}
        for label in labels:
            name = f"y{label}.vert"
            if make_files:
                (tmp_path / name).write_text(VERT)
            files[label] = name
        doc = {
            "slices": [{"label": l, "files": [files[l]]} for l in labels],
            "tagset": tagset or DEFAULT_TAGSET,
        }
        path = tmp_path / "manifest.json"
        path.write_text(json.dumps(doc))
        return path

    def test_increasing_labels_ok(self, tmp_path):
        manifest = load_manifest(self._write(tmp_path, [1987, 1988]))
        assert [l for l, _ in manifest.slices] == [1987, 1988]

    def test_non_monotonic_labels_rejected(self, tmp_path):
        with pytest.raises(ManifestError):
            load_manifest(self._write(tmp_path, [1988, 1987]))

    def test_tagset_map_loaded(self, tmp_path):
        manifest = load_manifest(self._write(tmp_path, [1987], tagset={"NOUN": "^NN"}))
        assert manifest.tagset_map == {"NOUN": "^NN"}

    def test_missing_file_is_io_error(self, tmp_path):
        with pytest.raises(FileNotFoundError) as exc:
            load_manifest(self._write(tmp_path, [1987], make_files=False))
        assert "y1987.vert" in str(exc.value)

    def test_bad_tag_pattern_rejected(self, tmp_path):
        with pytest.raises(ManifestError):
            load_manifest(self._write(tmp_path, [1987], tagset={"NOUN": "[unclosed"}))


class TestBuildCorpus:
    def _manifest(self, tmp_path, slice_files):
        entries = []
        for label, texts in slice_files.items():
            names = []
            for i, text in enumerate(texts):
                name = f"{label}_{i}.vert"
                (tmp_path / name).write_text(text)
                names.append(name)
            entries.append({"label": label, "files": names})
        path = tmp_path / "manifest.json"
        path.write_text(json.dumps({"slices": entries, "tagset": DEFAULT_TAGSET}))
        return load_manifest(path)

    def test_two_slices_with_totals(self, tmp_path):
        corpus = build_corpus(self._manifest(tmp_path, {1987: [VERT], 1988: [VERT * 2]}))
        assert corpus.labels == (1987, 1988)
        assert corpus.token_totals() == {1987: 2, 1988: 4}

    def test_multi_file_slices_are_additive(self, tmp_path):
        three = "a\ta\tDT\nb\tb\tNN\nc\tc\tNN\n"
        four = three + "d\td\tNN\n"
        corpus = build_corpus(self._manifest(tmp_path, {1987: [three, four]}))
        assert corpus.slices[0].token_total == 7

    def test_parse_error_names_slice_and_file(self, tmp_path):
        with pytest.raises(VerticalParseError) as exc:
            build_corpus(self._manifest(tmp_path, {1990: [VERT + "bad\n"]}))
        assert "slice 1990" in str(exc.value)
        assert "1990_0.vert" in str(exc.value)

    def test_token_total_matches_sentence_lengths(self, tmp_path):
        corpus = build_corpus(self._manifest(tmp_path, {1987: [VERT, VERT]}))
        for sl in corpus.slices:
            assert sl.token_total == sum(len(s) for s in sl.sentences)

    def test_deterministic_rebuild(self, tmp_path):
        manifest = self._manifest(tmp_path, {1987: [VERT], 1988: [VERT]})
        one = build_corpus(manifest)
        two = build_corpus(manifest)
        assert write_vertical(
            s for sl in one.slices for s in sl.sentences
        ) == write_vertical(s for sl in two.slices for s in sl.sentences)

    def test_exclude_tag_pattern_shrinks_totals(self, tmp_path):
        text = VERT + ".\t.\tSENT\n"
        corpus = build_corpus(self._manifest(tmp_path, {1987: [text]}))
        assert corpus.token_totals() == {1987: 3}
        assert corpus.token_totals(exclude_tag_pattern="^SENT$") == {1987: 2}


class TestCounts:
    def test_pos_counts_first_matching_class_wins(self, tmp_path):
        text = "run\trun\tNN\nrun\trun\tVB\nRun\trun\tNP\n"
        (tmp_path / "f.vert").write_text(text)
        path = tmp_path / "m.json"
        path.write_text(json.dumps(
            {"slices": [{"label": 1, "files": ["f.vert"]}], "tagset": DEFAULT_TAGSET}
        ))
        corpus = build_corpus(load_manifest(path))
        counts = pos_counts(corpus)[1]
        assert counts[("run", "NOUN")] == 1
        assert counts[("run", "VERB")] == 1
        assert counts[("run", "PROPER")] == 1
        assert lemma_totals(corpus)[1]["run"] == 3


_form = st.text(
    st.characters(min_codepoint=33, max_codepoint=126, blacklist_characters="<\t"),
    min_size=1, max_size=8,
)
_lemma = st.text(st.characters(whitelist_categories=("Ll",), max_codepoint=400),
                 min_size=1, max_size=8)
_tag = st.sampled_from(["NN", "NNS", "NP", "VB", "VBZ", "JJ", "RB", "DT", "CC", "SENT"])
_token = st.builds(Token, form=_form, lemma=_lemma, tag=_tag)
_sentence = st.builds(lambda toks: Sentence(tuple(toks)),
                      st.lists(_token, min_size=1, max_size=6))


@given(st.lists(_sentence, max_size=8))
def test_vertical_round_trip(sentences):
    text = write_vertical(sentences)
    parsed, count = parse_vertical_file(text)
    assert parsed == sentences
    assert count == sum(len(s) for s in sentences)
