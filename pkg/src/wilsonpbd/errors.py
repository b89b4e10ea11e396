"""Exception types shared across the package."""


class DesignError(Exception):
    """Base class for all errors raised by this library."""


class BadParams(DesignError):
    pass


class UnsupportedField(DesignError):
    pass


class BlockTooSmall(DesignError):
    pass


class DegenerateCase(DesignError):
    pass


class PairUncovered(DesignError):
    def __init__(self, p, q):
        super().__init__(f"pair ({p},{q}) lies in no block")
        self.pair = (p, q)


class PairDoubleCovered(DesignError):
    def __init__(self, p, q):
        super().__init__(f"pair ({p},{q}) lies in more than one block")
        self.pair = (p, q)


class SizeMismatch(DesignError):
    pass


class ResultNotPBD(DesignError):
    pass


class NotUniform(DesignError):
    pass


class GDDAxiomViolation(DesignError):
    pass


class NotSimpleRank3Matroid(DesignError):
    pass


class NotCircuitHyperplane(DesignError):
    pass


class NotAMorphism(DesignError):
    pass


class NonUniformFibers(DesignError):
    pass


class EmptyImage(DesignError):
    pass


class EmptyFiber(DesignError):
    pass


class DomainNotOpen(DesignError):
    pass


class NotInMonoid(DesignError):
    pass


class TooLarge(DesignError):
    pass


class TrivialPBD(DesignError):
    pass


class NotReduced(DesignError):
    pass


class NotRegularClass(DesignError):
    pass


class NotAnIdeal(DesignError):
    pass


class NoZero(DesignError):
    pass


class ParseError(DesignError):
    pass


class TheoremViolation(DesignError):
    """A structural fact that should hold for every valid input failed; carries the witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
