"""Exception hierarchy shared by every ppcalc module."""


class PpCalcError(Exception):
    """Base class; the CLI maps subclasses to exit codes."""

    exit_code = 2


class AxiomViolation(PpCalcError):
    def __init__(self, axiom, witness=()):
        self.axiom = axiom
        self.witness = tuple(witness)
        super().__init__(f"axiom '{axiom}' fails at {self.witness}")


class NotAHom(PpCalcError):
    def __init__(self, reason, witness=()):
        self.reason = reason
        self.witness = tuple(witness)
        super().__init__(f"not a homomorphism: {reason} at {self.witness}")


class CapExceeded(PpCalcError):
    exit_code = 3

    def __init__(self, what, size, cap):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"{what}: size {size} exceeds cap {cap}")


class PpSyntaxError(PpCalcError):
    def __init__(self, message, position=None):
        self.position = position
        where = "" if position is None else f" at position {position}"
        super().__init__(f"{message}{where}")


class UnknownScalar(PpSyntaxError):
    pass


class ArityMismatch(PpCalcError):
    pass


class SideMismatch(PpCalcError):
    pass


class RingMismatch(PpCalcError):
    pass


class PartitionMismatch(PpCalcError):
    pass


class NotInjective(PpCalcError):
    pass


class SpecError(PpCalcError):
    """Malformed JSON spec for a ring, module, hom or subcategory."""
