import csv
import json
import math

import pytest

from gramvar.cli import main
from gramvar.corpus import DEFAULT_TAGSET
from gramvar.synth import generate_corpus

VERT = ("<s>\nbig\tbig\tJJ\nnet\tnet\tNN\nruns\trun\tVBZ\n</s>\n"
        "<s>\nnet\tnet\tNN\ndata\tdata\tNN\n</s>\n")


def write_manifest(tmp_path, slices, tagset=None):
    entries = []
    for label, text in slices.items():
        name = f"y{label}.vert"
        (tmp_path / name).write_text(text)
        entries.append({"label": label, "files": [name]})
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps({"slices": entries, "tagset": tagset or DEFAULT_TAGSET}))
    return path


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


@pytest.fixture
def toy_index(tmp_path):
    manifest = write_manifest(tmp_path, {1987: VERT, 1988: VERT * 2})
    index_dir = tmp_path / "idx"
    assert main(["ingest", "--manifest", str(manifest), "--out", str(index_dir)]) == 0
    return index_dir


class TestIngest:
    def test_toy_corpus_builds_index(self, toy_index):
        metadata = json.loads((toy_index / "metadata.json").read_text())
        assert [s["label"] for s in metadata["slices"]] == [1987, 1988]
        assert [s["token_total"] for s in metadata["slices"]] == [5, 10]
        assert (toy_index / "pos" / "1987.csv").is_file()
        assert (toy_index / "rel" / "1988.csv").is_file()
        assert metadata["tagger"] == "vertical"
        assert len(metadata["grammar_hash"]) == 64

    def test_rerun_is_byte_identical(self, toy_index, tmp_path):
        before = {
            p.relative_to(toy_index): p.read_bytes()
            for p in sorted(toy_index.rglob("*")) if p.is_file()
        }
        manifest = tmp_path / "manifest.json"
        assert main(["ingest", "--manifest", str(manifest),
                     "--out", str(toy_index)]) == 0
        after = {
            p.relative_to(toy_index): p.read_bytes()
            for p in sorted(toy_index.rglob("*")) if p.is_file()
        }
        assert before == after

    def test_corrupt_file_no_partial_index(self, tmp_path):
        manifest = write_manifest(tmp_path, {1987: VERT + "badline\n"})
        index_dir = tmp_path / "idx"
        assert main(["ingest", "--manifest", str(manifest),
                     "--out", str(index_dir)]) == 2
        assert not index_dir.exists()
        assert not index_dir.with_name(index_dir.name + ".partial").exists()

    def test_missing_manifest_is_usage_error(self, tmp_path):
        assert main(["ingest", "--out", str(tmp_path / "idx")]) == 1

    def test_custom_grammar_via_config(self, tmp_path):
        manifest = write_manifest(tmp_path, {1987: VERT})
        grammar = tmp_path / "g.grammar"
        grammar.write_text("RELATION pair pair\nPATTERN 1:NOUN 2:NOUN\n")
        config = tmp_path / "cfg.json"
        config.write_text(json.dumps({"manifest": "manifest.json",
                                      "grammar": "g.grammar"}))
        index_dir = tmp_path / "idx"
        assert main(["ingest", "--config", str(config), "--out", str(index_dir)]) == 0
        metadata = json.loads((index_dir / "metadata.json").read_text())
        assert metadata["relations"] == ["pair"]

    def test_unknown_config_key_rejected(self, tmp_path):
        config = tmp_path / "cfg.json"
        config.write_text(json.dumps({"manifest": "m.json", "bogus": 1}))
        assert main(["ingest", "--config", str(config), "--out", "x"]) == 1


class TestSeries:
    def test_series_csv(self, toy_index, capsys):
        capsys.readouterr()
        assert main(["series", "--index", str(toy_index), "net"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "slice,rel_freq_per_100k,return"
        first = lines[1].split(",")
        assert first[0] == "1987"
        assert float(first[1]) == pytest.approx(2 / 5 * 1e5)
        assert first[2] == ""  # no return for the first slice
        second = lines[2].split(",")
        assert float(second[2]) == pytest.approx(0.0, abs=1e-9)  # same rel freq

    def test_unknown_lemma_header_only_exit_zero(self, toy_index, capsys):
        capsys.readouterr()
        assert main(["series", "--index", str(toy_index), "zzz"]) == 0
        out = capsys.readouterr()
        assert out.out.strip() == "slice,rel_freq_per_100k,return"
        assert "warning" in out.err

    def test_base_e_scales_returns(self, tmp_path, capsys):
        text_1988 = VERT + "<s>\nnet\tnet\tNN\n</s>\n"
        manifest = write_manifest(tmp_path, {1987: VERT, 1988: text_1988})
        index_dir = tmp_path / "idx"
        main(["ingest", "--manifest", str(manifest), "--out", str(index_dir)])
        capsys.readouterr()
        main(["series", "--index", str(index_dir), "net", "--precision", "9"])
        base10 = capsys.readouterr().out.strip().splitlines()
        main(["series", "--index", str(index_dir), "net", "--precision", "9",
              "--base", "e"])
        base_e = capsys.readouterr().out.strip().splitlines()
        r10 = float(base10[2].split(",")[2])
        re_ = float(base_e[2].split(",")[2])
        assert re_ == pytest.approx(r10 * math.log(10), rel=1e-6)

    def test_relation_target(self, toy_index, capsys):
        capsys.readouterr()
        assert main(["series", "--index", str(toy_index), "net@modifier"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 3

    def test_json_output(self, toy_index, capsys):
        capsys.readouterr()
        assert main(["series", "--index", str(toy_index), "net", "--json"]) == 0
        records = json.loads(capsys.readouterr().out)
        assert records[0]["slice"] == 1987
        assert records[0]["return"] is None

    def test_zero_frequency_strict_is_data_error(self, tmp_path, capsys):
        only_1988 = "<s>\nrare\trare\tNN\n</s>\n"
        manifest = write_manifest(tmp_path, {1987: VERT, 1988: VERT + only_1988})
        index_dir = tmp_path / "idx"
        main(["ingest", "--manifest", str(manifest), "--out", str(index_dir)])
        assert main(["series", "--index", str(index_dir), "rare"]) == 2


class TestSummary:
    @pytest.fixture
    def five_series_index(self, tmp_path):
        """Counts realizing the published five-keyword volatility ordering."""
        from gramvar.fixtures import nips_counts
        rows = {
            "training": list(nips_counts("training").values()),
            "neuron": [122, 160, 120, 155, 118, 150, 115, 145, 112, 140, 110, 135, 100],
            "algorithm": [165, 130, 165, 135, 170, 140, 175, 145, 180, 150, 190, 160, 200],
            "learning": list(nips_counts("learning").values()),
            "network": [405, 430, 390, 420, 380, 410, 370, 400, 360, 390, 350, 380, 340],
        }
        slices = {}
        for i, label in enumerate(range(1987, 2000)):
            lines = []
            total = 0
            for lemma, counts in rows.items():
                for _ in range(counts[i]):
                    lines.append(f"<s>\n{lemma}\t{lemma}\tNN\n</s>")
                    total += 1
            while total < 2000:
                lines.append("<s>\nof\tof\tIN\n</s>")
                total += 1
            slices[label] = "\n".join(lines) + "\n"
        manifest = write_manifest(tmp_path, slices)
        index_dir = tmp_path / "idx5"
        assert main(["ingest", "--manifest", str(manifest),
                     "--out", str(index_dir)]) == 0
        return index_dir

    def test_ordered_by_volatility(self, five_series_index, capsys):
        capsys.readouterr()
        assert main(["summary", "--index", str(five_series_index),
                     "learning", "network", "training", "algorithm", "neuron"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "target,mean_freq_per_100k,freq_sd_pct,mean_return_pct,volatility_pct"
        order = [line.split(",")[0] for line in lines[1:]]
        assert order == ["training", "neuron", "algorithm", "learning", "network"]

    def test_learning_row_values(self, five_series_index, capsys):
        capsys.readouterr()
        assert main(["summary", "--index", str(five_series_index), "learning"]) == 0
        row = capsys.readouterr().out.strip().splitlines()[1].split(",")
        # counts of 164..270 per 2000-token slice: scale factor 50 vs fixture
        assert float(row[1]) == pytest.approx(198.0769 * 50, rel=1e-4)
        assert float(row[2]) == pytest.approx(13.2012, rel=1e-3)
        assert float(row[3]) == pytest.approx(0.13, abs=5e-3)
        assert float(row[4]) == pytest.approx(6.1899, rel=1e-3)

    @pytest.fixture
    def three_slice_index(self, tmp_path):
        # identical composition per slice: every lemma's frequency is constant
        manifest = write_manifest(tmp_path, {1987: VERT, 1988: VERT * 2,
                                             1989: VERT * 4})
        index_dir = tmp_path / "idx3"
        assert main(["ingest", "--manifest", str(manifest),
                     "--out", str(index_dir)]) == 0
        return index_dir

    def test_single_target(self, three_slice_index, capsys):
        capsys.readouterr()
        assert main(["summary", "--index", str(three_slice_index), "net"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 2

    def test_volatility_tie_keeps_input_order(self, three_slice_index, capsys):
        capsys.readouterr()
        assert main(["summary", "--index", str(three_slice_index),
                     "data", "net", "big"]) == 0
        order = [line.split(",")[0]
                 for line in capsys.readouterr().out.strip().splitlines()[1:]]
        assert order == ["data", "net", "big"]

    def test_eq2_mode_changes_volatility(self, five_series_index, capsys):
        capsys.readouterr()
        main(["summary", "--index", str(five_series_index), "learning",
              "--precision", "8"])
        sd_row = capsys.readouterr().out.strip().splitlines()[1].split(",")
        main(["summary", "--index", str(five_series_index), "learning",
              "--precision", "8", "--vol-mode", "eq2"])
        eq2_row = capsys.readouterr().out.strip().splitlines()[1].split(",")
        sd = float(sd_row[4]) / 100
        eq2 = float(eq2_row[4]) / 100
        assert eq2 == pytest.approx(sd * sd / 12, rel=1e-4)


class TestScatter:
    @pytest.fixture
    def scatter_index(self, tmp_path):
        # relation at exactly 10/slice (boundary: shown) via 10 adj-noun pairs,
        # and one at 9/slice (suppressed)
        def slice_text(n_pairs, n_bare):
            parts = ["<s>\nbig\tbig\tJJ\nnet\tnet\tNN\n</s>"] * n_pairs
            parts += ["<s>\nnet\tnet\tNN\ndata\tdata\tNN\n</s>"] * 9
            parts += ["<s>\nnet\tnet\tNN\n</s>"] * n_bare
            return "\n".join(parts) + "\n"

        manifest = write_manifest(tmp_path, {1: slice_text(10, 3),
                                             2: slice_text(10, 2),
                                             3: slice_text(10, 4)})
        index_dir = tmp_path / "idx"
        assert main(["ingest", "--manifest", str(manifest),
                     "--out", str(index_dir)]) == 0
        return index_dir

    def test_boundary_relation_included_belows_suppressed(self, scatter_index, capsys):
        capsys.readouterr()
        assert main(["scatter", "--index", str(scatter_index), "net"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        targets = [line.split(",")[0] for line in lines[1:]]
        assert "net@a_modified" in targets  # mean 10/slice: boundary included
        assert "net@modifier" not in targets  # mean 9/slice: suppressed
        assert "net:NOUN" in targets

    def test_agrees_with_library(self, scatter_index, capsys):
        capsys.readouterr()
        from gramvar.index import load_index
        from gramvar.stats import frequency_series_from_counts, summary_stats
        assert main(["scatter", "--index", str(scatter_index), "net",
                     "--precision", "8"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        row = {line.split(",")[0]: line.split(",") for line in lines[1:]}["net:NOUN"]
        index = load_index(scatter_index)
        series = frequency_series_from_counts(index.lemma_counts("net", "NOUN"),
                                              index.token_totals)
        stats = summary_stats(series)
        assert float(row[2]) == pytest.approx(stats.mean_freq * 1e5, rel=1e-6)
        assert float(row[3]) == pytest.approx(stats.mean_return * 100, abs=1e-6)
        assert float(row[4]) == pytest.approx(stats.volatility * 100, abs=1e-6)


@pytest.fixture(scope="module")
def synth_run(tmp_path_factory):
    root = tmp_path_factory.mktemp("synth")
    paths = generate_corpus(root / "corpus", tokens_per_slice=4000, seed=5)
    index_dir = root / "idx"
    assert main(["ingest", "--manifest", str(paths["manifest"]),
                 "--out", str(index_dir)]) == 0
    out_dir = root / "trends"
    assert main(["trends", "--index", str(index_dir),
                 "--reference", str(paths["reference"]),
                 "--out-dir", str(out_dir)]) == 0
    return out_dir


class TestTrendsCommand:
    def test_planted_keywords_recovered_in_groups(self, synth_run):
        rows = read_csv(synth_run / "keywords.csv")
        by_lemma = {row[0]: row for row in rows[1:]}
        assert by_lemma["riseterm"][2] == "positive"
        assert by_lemma["peakterm"][2] == "negative"
        assert by_lemma["flatterm"][2] == "steady"

    def test_planted_timing_preceded(self, synth_run):
        rows = read_csv(synth_run / "timings.csv")
        timing = {(row[0], row[1]): row[4] for row in rows[1:]}
        assert timing[("peakterm", "a_modified")] == "preceded"

    def test_peak_table_layout(self, synth_run):
        rows = read_csv(synth_run / "peak_table.csv")
        assert rows[0] == ["group", "relation", "timing", "weighted", "raw"]
        groups = {row[0] for row in rows[1:]}
        assert groups == {"positive", "negative"}

    def test_ratio_report_written(self, synth_run):
        rows = read_csv(synth_run / "ratios.csv")
        assert rows[0][:4] == ["relation", "timing", "positive_weighted",
                               "negative_weighted"]
        names = {row[0] for row in rows[1:]}
        assert "a_modified+n_modified" in names

    def test_empty_keywords_exit_zero(self, tmp_path, capsys):
        manifest = write_manifest(tmp_path, {1987: VERT, 1988: VERT})
        index_dir = tmp_path / "idx"
        main(["ingest", "--manifest", str(manifest), "--out", str(index_dir)])
        out_dir = tmp_path / "tr"
        # thresholds nothing can pass
        config = tmp_path / "cfg.json"
        config.write_text(json.dumps(
            {"filter": {"min_per_100k_per_slice": 99999999}}))
        assert main(["trends", "--index", str(index_dir), "--config", str(config),
                     "--out-dir", str(out_dir)]) == 0
        assert "warning" in capsys.readouterr().err
        rows = read_csv(out_dir / "keywords.csv")
        assert rows == [["lemma", "score", "trend", "mean_return", "volatility",
                         "word_peak"]]


class TestUsageErrors:
    def test_bad_subcommand(self):
        assert main(["frobnicate"]) == 1

    def test_bad_target_syntax(self, toy_index):
        assert main(["series", "--index", str(toy_index), "net:NOUN@modifier"]) == 1

    def test_unknown_tag_class_in_target(self, toy_index):
        assert main(["series", "--index", str(toy_index), "net:BOGUS"]) == 1

    def test_missing_index_is_data_error(self, tmp_path):
        assert main(["series", "--index", str(tmp_path / "nope"), "net"]) == 2
