"""Exception types shared across the toolkit."""


class GramvarError(Exception):
    """Base class for all toolkit errors."""


class VerticalParseError(GramvarError):
    """Malformed vertical token file; carries the 1-based line number."""

    def __init__(self, message, line_number, path=None):
        where = f"{path}:{line_number}" if path else f"line {line_number}"
        super().__init__(f"{where}: {message}")
        self.line_number = line_number
        self.path = path


class ManifestError(GramvarError):
    """Invalid corpus manifest."""


class GrammarError(GramvarError):
    """Grammar file failed to parse or compile."""

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class SeriesError(GramvarError):
    """A series is unusable for the requested statistic (too short, bad label set, ...)."""


class ZeroFrequencyError(SeriesError):
    """A zero frequency was hit under the strict zero policy."""

    def __init__(self, slice_label, target=""):
        what = f" for {target!r}" if target else ""
        super().__init__(
            f"zero frequency in slice {slice_label}{what}; "
            "returns are undefined (zero_policy='skip' drops the transition)"
        )
        self.slice_label = slice_label


class CorrelationUndefinedError(GramvarError):
    """Correlation undefined: zero variance in an input series."""


class RatioUndefinedError(GramvarError):
    """Likelihood ratio undefined: zero weighted count in the denominator."""


class ConfigError(GramvarError):
    """Invalid project configuration."""
