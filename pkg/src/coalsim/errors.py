"""Exception types shared across the package."""


class CoalsimError(Exception):
    """Base class for every error this package raises deliberately."""


class ValidationError(CoalsimError):
    """A model, relation, map, or configuration violates its invariants."""

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class KindMismatchError(CoalsimError):
    """An operation mixed values, models, or modalities of different functor kinds."""


class ParseError(CoalsimError):
    """Formula text rejected; carries the offending position."""

    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} (at position {position})")


class UnknownModalityError(ParseError):
    def __init__(self, token, position):
        self.token = token
        super().__init__(f"unknown modality {token!r}", position)


class BudgetError(CoalsimError):
    """An exhaustive enumeration bound was exceeded."""


class InfiniteWeightError(CoalsimError):
    """Coupling search does not accept multiset values with infinite weights."""


class NotSeparatingError(CoalsimError):
    """The requested decision needs a signature that separates values of the models."""


class QuotientUndefined(CoalsimError):
    """The joint quotient has no well-defined transition structure.

    Carries the offending block and two members whose relabeled transition
    values disagree; this certifies that the relation does not witness
    behavioural equivalence.
    """

    def __init__(self, block, member_a, value_a, member_b, value_b):
        self.block = block
        self.member_a = member_a
        self.value_a = value_a
        self.member_b = member_b
        self.value_b = value_b
        super().__init__(
            f"quotient transition ill-defined on block {sorted(map(repr, block))}: "
            f"{member_a!r} maps to {value_a!r} but {member_b!r} maps to {value_b!r}"
        )


class InternalCheckError(CoalsimError):
    """A redundant internal cross-check failed; this signals a bug, not a property of the input."""
