"""Exception types shared across the toolkit."""


class NevlabError(Exception):
    """Base class for all toolkit errors."""


class UsageError(NevlabError):
    """Malformed input or violated precondition (caller's fault)."""


class NumericError(NevlabError):
    """A numeric routine failed to converge or produced unusable output."""


class SizeError(NevlabError):
    """A configured size cap was exceeded; the message carries a sizing hint."""


class HypothesisFailure(NevlabError):
    """A theorem hypothesis could not be verified; harnesses catch this and
    downgrade to report-only mode instead of letting it propagate."""
