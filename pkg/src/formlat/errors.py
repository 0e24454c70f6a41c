"""Domain error types.

Every error carries a stable ``code`` string so the CLI can serialize
failures as ``{"error": code, "detail": ...}`` without inspecting types.
"""


class FormlatError(ValueError):
    code = "Error"


class DegenerateForm(FormlatError):
    """Form with zero discriminant."""
    code = "DegenerateForm"


class SquareDiscriminant(FormlatError):
    """Positive square discriminant: cycle reduction does not apply."""
    code = "SquareDiscriminant"


class InvalidDiscriminant(FormlatError):
    """Integer that is not a discriminant (not 0 or 1 mod 4, or zero)."""
    code = "InvalidDiscriminant"


class NotSameDiscriminant(FormlatError):
    code = "NotSameDiscriminant"


class SearchExhausted(FormlatError):
    """Representation scan hit its box bound without finding a value."""
    code = "SearchExhausted"


class NotConcordant(FormlatError):
    code = "NotConcordant"


class MixedDiscriminants(FormlatError):
    code = "MixedDiscriminants"


class NotPrimitive(FormlatError):
    code = "NotPrimitive"


class ImproperClass(FormlatError):
    """Composition is only defined on proper (SL) classes."""
    code = "ImproperClass"


class NotUnimodular(FormlatError):
    code = "NotUnimodular"


class InvalidRescale(FormlatError):
    """Requested scale does not keep the Gram matrix even integral."""
    code = "InvalidRescale"


class GroupTooLarge(FormlatError):
    code = "GroupTooLarge"


class NotIsometry(FormlatError):
    code = "NotIsometry"


class DegenerateRestriction(FormlatError):
    code = "DegenerateRestriction"


class DegenerateInput(FormlatError):
    code = "DegenerateInput"


class IndefiniteUnsupported(FormlatError):
    code = "IndefiniteUnsupported"
