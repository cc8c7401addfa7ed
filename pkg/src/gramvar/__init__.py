"""Diachronic variation analysis for time-sliced, POS-tagged corpora.

Quantifies change at three levels: token frequency, part of speech and
grammatical relation.  Frequencies become per-slice series; their
log-returns, volatility and autocorrelation describe how usage moves;
keywords isolated against a reference corpus are grouped by trend and
compared on when each grammatical relation peaks relative to the word.
"""

__version__ = "0.1.0"

from .corpus import (Corpus, CorpusManifest, DEFAULT_TAGSET, Sentence, Slice,
                     Token, build_corpus, load_manifest, parse_vertical_file,
                     write_vertical)
from .errors import (ConfigError, CorrelationUndefinedError, GramvarError,
                     GrammarError, ManifestError, RatioUndefinedError,
                     SeriesError, VerticalParseError, ZeroFrequencyError)
from .grammar import (Grammar, MATCHER_KERNEL, RelationFrequencyTable,
                      RelationRecord, extract_relation_counts,
                      load_default_grammar, match_sentence, parse_grammar)
from .keywords import (FilterConfig, FrequencyProfile, KeynessScore,
                       filter_keywords, keyness_scores, load_profile_csv,
                       profile_from_corpus)
from .stats import (CorrelationResult, FrequencySeries, ReturnSeries,
                    SummaryStats, autocorrelation, frequency_series_from_counts,
                    lag1_autocorrelation, log_returns, mean_return, pearson,
                    relative_frequency_series, summary_stats, volatility)
from .tagger import fallback_tag
from .trends import (PeakTiming, TrendClass, WeightedPeakTable, classify_trend,
                     peak_slice, peak_timing, relation_word_correlations,
                     timing_likelihood_ratio, weighted_peak_table)

__all__ = [name for name in dir() if not name.startswith("_")]
