"""Exception hierarchy shared across the package."""


class OtearleyError(Exception):
    """Base class for all errors raised by this package."""


class GrammarError(OtearleyError):
    """A grammar is structurally ill-formed or violates the normal form."""


class AutomatonError(OtearleyError):
    """An automaton is structurally ill-formed."""


class FormatError(OtearleyError):
    """A text file (grammar, automaton, tier table) could not be parsed,
    or a value cannot be represented in the text format."""


class TierTableError(OtearleyError):
    """A tier table is ragged, uses symbols outside the alphabet, or does
    not have the layout an operation requires."""


class ResourceLimitError(OtearleyError):
    """An enumeration or expansion exceeded its configured bound."""


class RecoveryLimitError(ResourceLimitError):
    """Grammar recovery multiplied out more alternatives than allowed."""


class EmptyCandidateSetError(OtearleyError):
    """A constraint-evaluation step eliminated every candidate."""
