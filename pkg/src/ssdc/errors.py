"""Exception hierarchy for the ssdc package."""


class SsdcError(Exception):
    """Base class for all ssdc errors."""


class ConfigError(SsdcError, ValueError):
    """Invalid configuration parameter (bits per token, threshold, ...)."""


class CapacityError(SsdcError):
    """Dictionary has no free token IDs left."""


class EntryLengthError(SsdcError, ValueError):
    """Entry or packed word exceeds its permitted byte length."""


class OutOfRangeError(SsdcError, IndexError):
    """Token ID or string index outside the valid range."""


class FormatError(SsdcError, ValueError):
    """Malformed serialized dictionary or column (bad magic, truncation,
    or an invariant violation detected on load)."""


class BucketFullError(SsdcError):
    """A long-pattern bucket is at its capacity limit; the insert was
    rejected and the matcher is unchanged."""


class PerfectHashError(SsdcError):
    """Perfect hash construction failed after the bounded number of
    seed retries."""


class VerificationError(SsdcError):
    """A benchmark correctness pass found a decode that does not match
    the raw corpus."""
