"""Exception types raised by the engine."""


class RefinedTRError(Exception):
    """Base class for engine errors."""


class InvariantViolation(RefinedTRError):
    """A structural identity that must hold exactly did not."""


class PoleAtEndpoint(RefinedTRError):
    """A limit was requested at a genuine pole."""


class UnexpectedLogPart(RefinedTRError):
    """A primitive acquired a logarithm where the integrand must be residue-free."""


class NonvanishingResidue(RefinedTRError):
    """A WKB coefficient has a residue where none is allowed."""


class UnstableRequest(RefinedTRError):
    """An unstable (g, n) was requested from a routine that handles only stable ones."""


class ConfigError(RefinedTRError):
    """Invalid configuration or command-line usage."""
