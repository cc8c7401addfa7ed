"""Project configuration.

A config file is a JSON object; unknown keys anywhere are rejected::

    {
      "manifest": "corpus/manifest.json",
      "grammar": null,
      "reference_profile": "reference.csv",
      "log_base": 10,
      "volatility_mode": "sd",
      "zero_policy": "strict",
      "filter": {"min_per_100k_per_slice": 10,
                 "min_distinct_relations_per_slice": 2,
                 "exclude_tag_classes": ["PROPER"],
                 "top_n": 200},
      "trend_thresholds": {"positive": 0.5, "negative": -0.5},
      "min_relation_display_per_slice": 10
    }

Trend thresholds are given in percentage points of mean return (0.5 means
+0.5pp).  ``grammar: null`` selects the bundled default grammar.  Relative
paths resolve against the config file's directory.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .keywords import FilterConfig
from .stats import ZERO_POLICIES
from .trends import DEFAULT_TREND_LOWER, DEFAULT_TREND_UPPER

_VOL_ALIASES = {"sd": "operational_sd", "eq2": "literal_eq2",
                "operational_sd": "operational_sd", "literal_eq2": "literal_eq2"}


@dataclass
class ProjectConfig:
    manifest: Path | None = None
    grammar: Path | None = None
    reference_profile: Path | None = None
    log_base: float | str = 10
    volatility_mode: str = "operational_sd"
    zero_policy: str = "strict"
    filter: FilterConfig = field(default_factory=FilterConfig)
    trend_upper: float = DEFAULT_TREND_UPPER
    trend_lower: float = DEFAULT_TREND_LOWER
    min_relation_display_per_slice: float = 10.0


_TOP_KEYS = {"manifest", "grammar", "reference_profile", "log_base",
             "volatility_mode", "zero_policy", "filter", "trend_thresholds",
             "min_relation_display_per_slice"}
_FILTER_KEYS = {"min_per_100k_per_slice", "min_distinct_relations_per_slice",
                "exclude_tag_classes", "top_n"}
_TREND_KEYS = {"positive", "negative"}


def load_config(path) -> ProjectConfig:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON: {exc}")
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"{path}: unknown config keys: {sorted(unknown)}")
    cfg = ProjectConfig()
    base = path.parent

    def resolve(key):
        value = doc.get(key)
        return (base / value).resolve() if value else None

    cfg.manifest = resolve("manifest")
    cfg.grammar = resolve("grammar")
    cfg.reference_profile = resolve("reference_profile")
    if "log_base" in doc:
        cfg.log_base = _check_base(doc["log_base"], path)
    if "volatility_mode" in doc:
        cfg.volatility_mode = _check_vol_mode(doc["volatility_mode"], path)
    if "zero_policy" in doc:
        if doc["zero_policy"] not in ZERO_POLICIES:
            raise ConfigError(f"{path}: zero_policy must be one of {ZERO_POLICIES}")
        cfg.zero_policy = doc["zero_policy"]
    if "filter" in doc:
        fdoc = doc["filter"]
        if not isinstance(fdoc, dict):
            raise ConfigError(f"{path}: 'filter' must be an object")
        unknown = set(fdoc) - _FILTER_KEYS
        if unknown:
            raise ConfigError(f"{path}: unknown filter keys: {sorted(unknown)}")
        defaults = FilterConfig()
        cfg.filter = FilterConfig(
            min_per_100k_per_slice=fdoc.get(
                "min_per_100k_per_slice", defaults.min_per_100k_per_slice),
            min_distinct_relations_per_slice=fdoc.get(
                "min_distinct_relations_per_slice",
                defaults.min_distinct_relations_per_slice),
            exclude_tag_classes=frozenset(
                fdoc.get("exclude_tag_classes", defaults.exclude_tag_classes)),
            top_n=fdoc.get("top_n", defaults.top_n),
        )
    if "trend_thresholds" in doc:
        tdoc = doc["trend_thresholds"]
        if not isinstance(tdoc, dict) or set(tdoc) - _TREND_KEYS:
            raise ConfigError(
                f"{path}: trend_thresholds must be an object with keys "
                f"{sorted(_TREND_KEYS)}"
            )
        # config values are percentage points
        if "positive" in tdoc:
            cfg.trend_upper = float(tdoc["positive"]) / 100.0
        if "negative" in tdoc:
            cfg.trend_lower = float(tdoc["negative"]) / 100.0
        if cfg.trend_lower > cfg.trend_upper:
            raise ConfigError(f"{path}: negative threshold above positive threshold")
    if "min_relation_display_per_slice" in doc:
        value = doc["min_relation_display_per_slice"]
        if not isinstance(value, (int, float)) or value < 0:
            raise ConfigError(f"{path}: min_relation_display_per_slice must be >= 0")
        cfg.min_relation_display_per_slice = float(value)
    return cfg


def _check_base(value, path):
    if value in (10, 10.0, "10"):
        return 10
    if value == "e":
        return "e"
    raise ConfigError(f"{path}: log_base must be 10 or \"e\"")


def _check_vol_mode(value, path):
    try:
        return _VOL_ALIASES[value]
    except KeyError:
        raise ConfigError(
            f"{path}: volatility_mode must be one of {sorted(_VOL_ALIASES)}"
        )


def check_vol_mode(value) -> str:
    """Normalize a CLI/interactive volatility mode spelling."""
    if value in _VOL_ALIASES:
        return _VOL_ALIASES[value]
    raise ConfigError(f"volatility mode must be one of {sorted(_VOL_ALIASES)}")
