"""Error taxonomy shared across the engine.

Every error carries a short ``rule`` identifier naming the violated
constraint.  Reports and the service layer surface that identifier
verbatim, so callers can match on behavior instead of parsing prose.
"""


class EngineError(Exception):
    """Base class for all domain errors raised by this package."""

    rule = "engine"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class SpecInvalid(EngineError):
    """An algebra description violates a structural precondition."""

    rule = "spec-invalid"


class NonPositiveRatio(SpecInvalid):
    rule = "positive-ratio-required"


class FactorBoundExceeded(SpecInvalid):
    """A rational could not be factored with the configured prime bound."""

    rule = "prime-bound"


class Dim22Rejected(SpecInvalid):
    """Both inputs are two dimensional, the one excluded pairing."""

    rule = "pair-dimension-restriction"


class NotScalarSummand(SpecInvalid):
    """Strip reduction targets something other than a proper scalar summand."""

    rule = "scalar-summand-required"


class TrivialGamma(SpecInvalid):
    """Both states are tracial, so the ratio group is trivial."""

    rule = "nontrivial-ratio-group-required"


class RatioOutsideGroup(SpecInvalid):
    rule = "ratio-group-membership"


class SubgroupNotContained(SpecInvalid):
    rule = "ratio-subgroup-containment"


class DisconnectedIndex(SpecInvalid):
    """The overlap relation does not connect every index to the base point."""

    rule = "connectivity-layering"


class InvalidScenario(SpecInvalid):
    """Compression scenario data violates its trace inequalities."""

    rule = "compression-scenario"


class UnsupportedStructure(EngineError):
    """The configuration is recognized but outside the implemented calculus."""

    rule = "unsupported-structure"


class HypothesesNotRecognized(EngineError):
    """No structure theorem implemented here covers the given pair."""

    rule = "hypotheses-not-recognized"


#: Errors that signal "understood but out of scope" rather than bad input.
OUT_OF_SCOPE = (UnsupportedStructure, HypothesesNotRecognized)
