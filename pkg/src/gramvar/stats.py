"""Frequency series and their second-order statistics.

The core quantities, for a per-slice relative-frequency series f(t):

* return r(t) = log(f(t) / f(t-1)), base 10 by default (base e selectable;
  base-e returns are the base-10 ones times ln 10)
* mean return: arithmetic mean of the N-1 returns, which telescopes to
  log(f(N)/f(1)) / (N-1)
* volatility: by default the sample standard deviation of the returns
  ("operational_sd", divisor N-1 over the number of returns N); the
  "literal_eq2" mode sums squared deviations over N(N-1) instead and is
  related exactly by literal = sd**2 / N
* correlation: product-moment r with a one-tailed p-value from a Student-t
  reference with n-2 degrees of freedom

All functions are pure over immutable inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy import stats as _scipy_stats

from .corpus import Corpus
from .errors import CorrelationUndefinedError, SeriesError, ZeroFrequencyError

VOLATILITY_MODES = ("operational_sd", "literal_eq2")
ZERO_POLICIES = ("strict", "skip")


def _log_fn(log_base):
    if log_base in (10, 10.0, "10"):
        return math.log10
    if log_base in ("e", math.e):
        return math.log
    raise ValueError(f"log_base must be 10 or 'e', got {log_base!r}")


@dataclass(frozen=True)
class FrequencySeries:
    """Per-slice relative frequencies (dimensionless fractions of slice tokens)."""

    labels: tuple[int, ...]
    values: tuple[float, ...]
    target: str = ""

    def __post_init__(self):
        if len(self.labels) != len(self.values):
            raise SeriesError(
                f"{self.target or 'series'}: {len(self.labels)} labels "
                f"vs {len(self.values)} values"
            )
        if not self.labels:
            raise SeriesError("empty series")
        for a, b in zip(self.labels, self.labels[1:]):
            if b <= a:
                raise SeriesError(f"labels not strictly increasing: {a}, {b}")
        for label, v in zip(self.labels, self.values):
            if v < 0:
                raise SeriesError(f"negative frequency {v} in slice {label}")

    def __len__(self):
        return len(self.values)

    def scaled(self, factor: float) -> tuple[float, ...]:
        return tuple(v * factor for v in self.values)

    @property
    def per_100k(self) -> tuple[float, ...]:
        return self.scaled(1e5)

    def to_csv(self, precision: int | None = None) -> str:
        lines = ["label,value"]
        for label, value in zip(self.labels, self.values):
            text = repr(value) if precision is None else f"{value:.{precision}g}"
            lines.append(f"{label},{text}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        import json
        return json.dumps({"target": self.target, "labels": list(self.labels),
                           "values": list(self.values)}, indent=2) + "\n"


@dataclass(frozen=True)
class ReturnSeries:
    """Log-returns between consecutive slices.

    ``labels`` are the arrival slices of the surviving transitions; under
    the strict zero policy the length is exactly len(source) - 1, under
    ``skip`` the zero-crossing transitions are dropped and listed in
    ``skipped``.
    """

    values: tuple[float, ...]
    log_base: float
    labels: tuple[int, ...] = ()
    skipped: tuple[int, ...] = ()

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class SummaryStats:
    target: str
    mean_freq: float
    freq_sd: float  # coefficient of variation, sd(f) / mean(f)
    mean_return: float
    volatility: float
    n_slices: int

    def as_dict(self) -> dict:
        return {"target": self.target, "mean_freq": self.mean_freq,
                "freq_sd": self.freq_sd, "mean_return": self.mean_return,
                "volatility": self.volatility, "n_slices": self.n_slices}


@dataclass(frozen=True)
class CorrelationResult:
    r: float
    p_one_tailed: float
    n: int


def frequency_series_from_counts(counts: Mapping[int, int], totals: Mapping[int, int],
                                 target: str = "") -> FrequencySeries:
    """Counts over slice totals; slices missing from ``counts`` get 0."""
    labels = tuple(sorted(totals))
    values = []
    for label in labels:
        total = totals[label]
        if total <= 0:
            raise SeriesError(f"slice {label} has token total {total}")
        values.append(counts.get(label, 0) / total)
    return FrequencySeries(labels=labels, values=tuple(values), target=target)


def relative_frequency_series(counts: Mapping[int, int], corpus: Corpus,
                              target: str = "",
                              exclude_tag_pattern: str | None = None) -> FrequencySeries:
    """Per-slice relative frequencies against the corpus token totals.

    ``exclude_tag_pattern`` removes matching tokens (e.g. punctuation tags)
    from the denominators only.
    """
    return frequency_series_from_counts(
        counts, corpus.token_totals(exclude_tag_pattern), target=target
    )


def log_returns(series: FrequencySeries, log_base=10,
                zero_policy: str = "strict") -> ReturnSeries:
    if zero_policy not in ZERO_POLICIES:
        raise ValueError(f"zero_policy must be one of {ZERO_POLICIES}")
    if len(series) < 2:
        raise SeriesError(f"{series.target or 'series'}: need at least 2 points for returns")
    log = _log_fn(log_base)
    values = []
    labels = []
    skipped = []
    for prev_label, label, prev, cur in zip(
            series.labels, series.labels[1:], series.values, series.values[1:]):
        if prev <= 0 or cur <= 0:
            if zero_policy == "skip":
                skipped.append(label)
                continue
            raise ZeroFrequencyError(label if cur <= 0 else prev_label, series.target)
        values.append(log(cur / prev))
        labels.append(label)
    return ReturnSeries(
        values=tuple(values),
        log_base=math.e if log_base in ("e", math.e) else 10.0,
        labels=tuple(labels),
        skipped=tuple(skipped),
    )


def mean_return(returns: ReturnSeries) -> float:
    if not returns.values:
        raise SeriesError("cannot average an empty return series")
    return sum(returns.values) / len(returns.values)


def volatility(returns: ReturnSeries, mode: str = "operational_sd") -> float:
    if mode not in VOLATILITY_MODES:
        raise ValueError(f"volatility mode must be one of {VOLATILITY_MODES}")
    n = len(returns.values)
    if n < 2:
        raise SeriesError(f"need at least 2 returns for volatility, got {n}")
    rbar = sum(returns.values) / n
    ss = sum((r - rbar) ** 2 for r in returns.values)
    if mode == "operational_sd":
        return math.sqrt(ss / (n - 1))
    return ss / (n * (n - 1))


def pearson(a: Sequence[float], b: Sequence[float]) -> CorrelationResult:
    """Product-moment correlation with a one-tailed Student-t p-value.

    Each series is centered on its own mean.  The p-value is one-tailed in
    the direction of the observed r (t = r*sqrt(n-2)/sqrt(1-r^2), df = n-2).
    """
    av = getattr(a, "values", a)
    bv = getattr(b, "values", b)
    if len(av) != len(bv):
        raise SeriesError(f"length mismatch: {len(av)} vs {len(bv)}")
    n = len(av)
    if n < 3:
        raise SeriesError(f"need at least 3 paired points, got {n}")
    x = np.asarray(av, dtype=float)
    y = np.asarray(bv, dtype=float)
    xd = x - x.mean()
    yd = y - y.mean()
    sxx = float(xd @ xd)
    syy = float(yd @ yd)
    if sxx == 0.0 or syy == 0.0:
        raise CorrelationUndefinedError("zero variance in an input series")
    r = float(xd @ yd) / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        p = 0.0
    else:
        t = abs(r) * math.sqrt(n - 2) / math.sqrt(1.0 - r * r)
        p = float(_scipy_stats.t.sf(t, n - 2))
    return CorrelationResult(r=r, p_one_tailed=p, n=n)


def autocorrelation(series: FrequencySeries, lag: int = 1) -> CorrelationResult:
    """Pearson correlation between the series and itself shifted by ``lag``."""
    if lag < 1:
        raise ValueError("lag must be >= 1")
    if len(series) < lag + 3:
        raise SeriesError(
            f"need at least {lag + 3} points for lag-{lag} autocorrelation, got {len(series)}"
        )
    return pearson(series.values[:-lag], series.values[lag:])


def lag1_autocorrelation(series: FrequencySeries) -> CorrelationResult:
    return autocorrelation(series, lag=1)


def summary_stats(series: FrequencySeries, log_base=10,
                  volatility_mode: str = "operational_sd",
                  zero_policy: str = "strict") -> SummaryStats:
    """Mean frequency, frequency CV, mean return and volatility for one series."""
    if len(series) < 2:
        raise SeriesError(f"{series.target or 'series'}: need at least 2 points")
    values = np.asarray(series.values, dtype=float)
    mean_f = float(values.mean())
    if mean_f == 0.0:
        raise SeriesError(f"{series.target or 'series'}: all-zero series")
    if len(values) > 1:
        cv = float(values.std(ddof=1)) / mean_f
    else:
        cv = 0.0
    returns = log_returns(series, log_base=log_base, zero_policy=zero_policy)
    return SummaryStats(
        target=series.target,
        mean_freq=mean_f,
        freq_sd=cv,
        mean_return=mean_return(returns),
        volatility=volatility(returns, mode=volatility_mode),
        n_slices=len(series),
    )
