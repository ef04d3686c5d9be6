"""Exception hierarchy shared by every module."""


class ResistKitError(Exception):
    """Base class; the CLI maps every subclass to exit code 3."""


class ParseError(ResistKitError):
    def __init__(self, message: str, text: str = "", position: int | None = None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} at position {position} in {text!r}"
        super().__init__(message)


class UnknownGenerator(ParseError):
    pass


class ZeroElement(ResistKitError):
    pass


class FieldMismatch(ResistKitError):
    pass


class ReducibleModulus(ResistKitError):
    pass


class AlphabetMismatch(ResistKitError):
    pass


class ContextMismatch(ResistKitError):
    pass


class BudgetExceeded(ResistKitError):
    pass


class CapExceeded(BudgetExceeded):
    pass


class IdentityInput(ResistKitError):
    pass


class MissingAssignment(ResistKitError):
    pass


class NonUnit(ResistKitError):
    pass


class NotBinomial(ResistKitError):
    pass


class RelationFalse(ResistKitError):
    pass


class BadParameters(ResistKitError):
    pass


class OrderViolation(ResistKitError):
    pass


class NotCommuting(ResistKitError):
    pass


class TrivialF(ResistKitError):
    pass


class Commuting(ResistKitError):
    pass


class NotLastTerm(ResistKitError):
    pass


class PreconditionFailed(ResistKitError):
    pass


class AboveCap(ResistKitError):
    pass


class InfiniteFieldRejected(ResistKitError):
    pass


class InvalidCertificate(ResistKitError):
    """A constructor produced sandwiches that do not expand to 1."""
