class SpectraceError(Exception):
    """Base class for every error raised by this package."""


class TraceParseError(SpectraceError):
    """An event-shaped log line violates the event grammar."""


class EmptyDocumentError(SpectraceError):
    """A trace produced no parseable events."""


class VocabularyError(SpectraceError):
    """Vocabulary fitting failed or was configured inconsistently."""


class FeatureRankingError(SpectraceError):
    """Significance ranking over a labeled holdout failed."""


class ChannelMapError(SpectraceError):
    """Channel map construction or validation failed."""


class CodecError(SpectraceError):
    """Encoding or decoding a behavior image failed."""


class ManifestError(SpectraceError):
    """A codec-model manifest is missing, malformed, or inconsistent."""
