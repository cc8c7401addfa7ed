"""Command-line interface.

Subcommands:
  ingest    parse a manifest'd corpus, extract relations, write an index
  series    per-slice frequency + return series for one target
  summary   mean frequency, frequency CV, mean return, volatility per target
  scatter   per-POS-form and per-relation (frequency, return, volatility)
  trends    keyword isolation, trend groups, peak-timing table and ratios

Targets are ``lemma``, ``lemma:CLASS`` (one tag class) or ``lemma@relation``.
Common flags: --config PATH, --base {10,e}, --vol-mode {sd,eq2},
--precision N, --json.  Exit codes: 0 success (warnings included), 1 usage
error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .config import ProjectConfig, check_vol_mode, load_config
from .corpus import build_corpus, load_manifest
from .errors import ConfigError, GramvarError
from .grammar import load_default_grammar, parse_grammar, extract_relation_counts
from .index import CorpusIndex, load_index, write_index
from .keywords import filter_keywords, keyness_scores, load_profile_csv
from .stats import frequency_series_from_counts, log_returns, summary_stats
from .trends import (TIMINGS, classify_trend, peak_slice, peak_timing,
                     weighted_peak_table)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


def _fmt(x: float, precision: int) -> str:
    s = f"{x:.{precision}f}"
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


def _warn(message: str):
    print(f"warning: {message}", file=sys.stderr)


def _write_rows(header, rows, out_path, as_json: bool, precision: int):
    """Emit rows as CSV (default) or JSON; floats formatted, None -> empty."""
    if as_json:
        records = []
        for row in rows:
            records.append({key: value for key, value in zip(header, row)})
        text = json.dumps(records, indent=2) + "\n"
    else:
        lines = [",".join(header)]
        for row in rows:
            cells = []
            for value in row:
                if value is None:
                    cells.append("")
                elif isinstance(value, float):
                    cells.append(_fmt(value, precision))
                else:
                    cells.append(str(value))
            lines.append(",".join(cells))
        text = "\n".join(lines) + "\n"
    if out_path is None:
        sys.stdout.write(text)
    else:
        Path(out_path).write_text(text, encoding="utf-8")


def _parse_target(spec: str):
    """lemma / lemma:CLASS / lemma@relation -> (lemma, tag_class, relation)."""
    if "@" in spec:
        lemma, _, relation = spec.partition("@")
        if ":" in lemma:
            raise ConfigError(f"target {spec!r}: use either :CLASS or @relation, not both")
        if not lemma or not relation:
            raise ConfigError(f"bad target {spec!r}")
        return lemma, None, relation
    if ":" in spec:
        lemma, _, cls = spec.partition(":")
        if not lemma or not cls:
            raise ConfigError(f"bad target {spec!r}")
        return lemma, cls, None
    if not spec:
        raise ConfigError("empty target")
    return spec, None, None


def _effective_config(args) -> ProjectConfig:
    cfg = load_config(args.config) if args.config else ProjectConfig()
    if args.base is not None:
        cfg.log_base = 10 if args.base == "10" else "e"
    if args.vol_mode is not None:
        cfg.volatility_mode = check_vol_mode(args.vol_mode)
    return cfg


def _target_counts(index: CorpusIndex, lemma, tag_class, relation):
    if relation is not None:
        if relation not in index.relations:
            _warn(f"relation {relation!r} not in grammar relations {index.relations}")
        return index.relation_counts(lemma, relation)
    if tag_class is not None and tag_class not in index.tag_classes:
        raise ConfigError(f"unknown tag class {tag_class!r}; "
                          f"index defines {index.tag_classes}")
    return index.lemma_counts(lemma, tag_class)


# ---------------------------------------------------------------- commands


def cmd_ingest(args) -> int:
    cfg = _effective_config(args)
    manifest_path = Path(args.manifest) if args.manifest else cfg.manifest
    if manifest_path is None:
        raise ConfigError("ingest needs a manifest (--manifest or config)")
    manifest = load_manifest(manifest_path)
    if cfg.grammar is not None:
        grammar = parse_grammar(Path(cfg.grammar).read_text(encoding="utf-8"),
                                manifest.tagset_map)
    else:
        grammar = load_default_grammar(manifest.tagset_map)
    corpus = build_corpus(manifest)
    table = extract_relation_counts(corpus, grammar)
    out = write_index(args.out, corpus, grammar, table)
    print(f"index written to {out} ({len(corpus.slices)} slices, "
          f"{sum(s.token_total for s in corpus.slices)} tokens)")
    return 0


def cmd_series(args) -> int:
    cfg = _effective_config(args)
    index = load_index(args.index)
    lemma, tag_class, relation = _parse_target(args.target)
    counts = _target_counts(index, lemma, tag_class, relation)
    header = ["slice", "rel_freq_per_100k", "return"]
    if not any(counts.values()):
        _warn(f"target {args.target!r} has no occurrences; writing empty series")
        _write_rows(header, [], args.out, args.json, args.precision)
        return 0
    series = frequency_series_from_counts(counts, index.token_totals, target=args.target)
    returns = log_returns(series, log_base=cfg.log_base, zero_policy=cfg.zero_policy)
    by_label = dict(zip(returns.labels, returns.values))
    rows = []
    for label, value in zip(series.labels, series.per_100k):
        rows.append([label, value, by_label.get(label)])
    _write_rows(header, rows, args.out, args.json, args.precision)
    return 0


def _summary_row(index, cfg, spec):
    lemma, tag_class, relation = _parse_target(spec)
    counts = _target_counts(index, lemma, tag_class, relation)
    if not any(counts.values()):
        _warn(f"target {spec!r} has no occurrences; skipping")
        return None
    series = frequency_series_from_counts(counts, index.token_totals, target=spec)
    return summary_stats(series, log_base=cfg.log_base,
                         volatility_mode=cfg.volatility_mode,
                         zero_policy=cfg.zero_policy)


def cmd_summary(args) -> int:
    cfg = _effective_config(args)
    index = load_index(args.index)
    stats = [s for s in (_summary_row(index, cfg, spec) for spec in args.targets)
             if s is not None]
    stats.sort(key=lambda s: -s.volatility)  # stable: ties keep input order
    header = ["target", "mean_freq_per_100k", "freq_sd_pct",
              "mean_return_pct", "volatility_pct"]
    rows = [
        [s.target, s.mean_freq * 1e5, s.freq_sd * 100, s.mean_return * 100,
         s.volatility * 100]
        for s in stats
    ]
    _write_rows(header, rows, args.out, args.json, args.precision)
    return 0


def cmd_scatter(args) -> int:
    cfg = _effective_config(args)
    index = load_index(args.index)
    lemma = args.lemma
    n_slices = len(index.labels)
    rows = []
    for cls in index.tag_classes:
        counts = index.lemma_counts(lemma, cls)
        if not any(counts.values()):
            continue
        series = frequency_series_from_counts(counts, index.token_totals,
                                              target=f"{lemma}:{cls}")
        s = summary_stats(series, log_base=cfg.log_base,
                          volatility_mode=cfg.volatility_mode,
                          zero_policy=cfg.zero_policy)
        rows.append([s.target, "pos", s.mean_freq * 1e5, s.mean_return * 100,
                     s.volatility * 100])
    for relation in index.relations:
        counts = index.relation_counts(lemma, relation)
        if not any(counts.values()):
            continue
        if sum(counts.values()) / n_slices < cfg.min_relation_display_per_slice:
            continue  # below the display threshold
        series = frequency_series_from_counts(counts, index.token_totals,
                                              target=f"{lemma}@{relation}")
        s = summary_stats(series, log_base=cfg.log_base,
                          volatility_mode=cfg.volatility_mode,
                          zero_policy=cfg.zero_policy)
        rows.append([s.target, "relation", s.mean_freq * 1e5, s.mean_return * 100,
                     s.volatility * 100])
    if not rows:
        _warn(f"lemma {lemma!r} has no occurrences")
    header = ["target", "kind", "mean_freq_per_100k", "mean_return_pct",
              "volatility_pct"]
    _write_rows(header, rows, args.out, args.json, args.precision)
    return 0


def cmd_trends(args) -> int:
    cfg = _effective_config(args)
    index = load_index(args.index)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    ext = "json" if args.json else "csv"

    focus = index.profile(args.keyword_class)
    ref_path = Path(args.reference) if args.reference else cfg.reference_profile
    if ref_path is not None:
        reference = load_profile_csv(ref_path)
    else:
        _warn("no reference profile; ranking keywords by focus frequency alone")
        reference = focus
    if not focus.table:
        _warn(f"no lemmas in tag class {args.keyword_class!r}; writing empty outputs")
        keywords = []
    else:
        ranked = keyness_scores(focus, reference)
        keywords = filter_keywords(ranked, index.counts_view(),
                                   index.relation_table(), cfg.filter)
    if not keywords:
        _warn("keyword set is empty")

    trends_by_lemma = {}
    timings = {}
    keyword_rows = []
    timing_rows = []
    for entry in keywords:
        lemma = entry.lemma
        class_series = frequency_series_from_counts(
            index.lemma_counts(lemma, args.keyword_class), index.token_totals,
            target=f"{lemma}:{args.keyword_class}")
        stats = summary_stats(class_series, log_base=cfg.log_base,
                              volatility_mode=cfg.volatility_mode,
                              zero_policy=cfg.zero_policy)
        trend = classify_trend(stats, upper=cfg.trend_upper, lower=cfg.trend_lower)
        trends_by_lemma[lemma] = trend
        overall_series = frequency_series_from_counts(
            index.lemma_counts(lemma), index.token_totals, target=lemma)
        word_peak = peak_slice(overall_series)
        keyword_rows.append({
            "lemma": lemma, "score": entry.score, "trend": trend.value,
            "mean_return": stats.mean_return, "volatility": stats.volatility,
            "word_peak": word_peak,
        })
        for relation in index.relations:
            counts = index.relation_counts(lemma, relation)
            if not any(counts.values()):
                continue
            rel_series = frequency_series_from_counts(
                counts, index.token_totals, target=f"{lemma}@{relation}")
            timing = peak_timing(overall_series, rel_series)
            timings[(lemma, relation)] = timing
            timing_rows.append({
                "lemma": lemma, "relation": relation,
                "relation_peak": timing.relation_peak_label,
                "word_peak": timing.word_peak_label,
                "timing": timing.classification,
            })

    table = weighted_peak_table(trends_by_lemma, timings, index.relations)

    _write_rows(
        ["lemma", "score", "trend", "mean_return", "volatility", "word_peak"],
        [[r["lemma"], r["score"], r["trend"], r["mean_return"], r["volatility"],
          r["word_peak"]] for r in keyword_rows],
        out_dir / f"keywords.{ext}", args.json, args.precision)
    _write_rows(
        ["lemma", "relation", "relation_peak", "word_peak", "timing"],
        [[r["lemma"], r["relation"], r["relation_peak"], r["word_peak"],
          r["timing"]] for r in timing_rows],
        out_dir / f"timings.{ext}", args.json, args.precision)
    _write_rows(
        ["group", "relation", "timing", "weighted", "raw"],
        [[group, relation, timing, table.weighted(group, relation, timing),
          table.raw(group, relation, timing)]
         for group in ("positive", "negative")
         for relation in index.relations
         for timing in TIMINGS],
        out_dir / f"peak_table.{ext}", args.json, args.precision)

    ratio_rows = []
    combos = [(relation,) for relation in index.relations]
    if "a_modified" in index.relations and "n_modified" in index.relations:
        combos.append(("a_modified", "n_modified"))
    for combo in combos:
        name = "+".join(combo)
        for timing in TIMINGS:
            pos_w = sum(table.weighted("positive", rel, timing) for rel in combo)
            neg_w = sum(table.weighted("negative", rel, timing) for rel in combo)
            ratio_rows.append([
                name, timing, pos_w, neg_w,
                (neg_w / pos_w) if pos_w > 0 else None,
                (pos_w / neg_w) if neg_w > 0 else None,
            ])
    _write_rows(
        ["relation", "timing", "positive_weighted", "negative_weighted",
         "negative_over_positive", "positive_over_negative"],
        ratio_rows, out_dir / f"ratios.{ext}", args.json, args.precision)

    print(f"trend outputs written to {out_dir} ({len(keyword_rows)} keywords)")
    return 0


# ----------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="project config JSON")
    common.add_argument("--base", choices=["10", "e"], default=None,
                        help="log base for returns (default 10)")
    common.add_argument("--vol-mode", choices=["sd", "eq2"], default=None,
                        help="volatility: sample SD of returns (sd, default) "
                             "or the literal normalized sum of squares (eq2)")
    common.add_argument("--precision", type=int, default=4,
                        help="decimal places in CSV output (default 4)")
    common.add_argument("--json", action="store_true",
                        help="emit JSON instead of CSV")

    parser = _Parser(prog="gramvar",
                     description="Diachronic token / POS / grammatical-relation "
                                 "variation analysis")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", parents=[common],
                       help="build the on-disk count index from a corpus manifest")
    p.add_argument("--manifest", help="corpus manifest (overrides config)")
    p.add_argument("--out", default="gramvar_index", help="index directory")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("series", parents=[common],
                       help="frequency and return series for one target")
    p.add_argument("--index", required=True)
    p.add_argument("target", help="lemma, lemma:CLASS or lemma@relation")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("summary", parents=[common],
                       help="summary statistics per target, ordered by volatility")
    p.add_argument("--index", required=True)
    p.add_argument("targets", nargs="+", help="lemma, lemma:CLASS or lemma@relation")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_summary)

    p = sub.add_parser("scatter", parents=[common],
                       help="per-POS-form and per-relation return/volatility triples")
    p.add_argument("--index", required=True)
    p.add_argument("lemma")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_scatter)

    p = sub.add_parser("trends", parents=[common],
                       help="keyword isolation, trend groups and peak-timing tables")
    p.add_argument("--index", required=True)
    p.add_argument("--reference", help="reference profile CSV (overrides config)")
    p.add_argument("--keyword-class", default="NOUN",
                   help="tag class for keyword candidates (default NOUN)")
    p.add_argument("--out-dir", default="trends_out")
    p.set_defaults(func=cmd_trends)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (GramvarError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
