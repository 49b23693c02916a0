"""Exception hierarchy.

The CLI maps these onto exit codes: :class:`MalformedInputError` and
:class:`BracketSyntaxError` are usage/parse failures (exit 1), the
:class:`PreconditionError` family are mathematical precondition failures
(exit 2), and :class:`InvariantViolation` signals an internal consistency
failure (exit 3).
"""


class PolycobarError(Exception):
    pass


class MalformedInputError(PolycobarError, ValueError):
    """Input data that does not describe a valid object (duplicate ids, bad JSON schema...)."""


class BracketSyntaxError(MalformedInputError):
    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class PreconditionError(PolycobarError, ValueError):
    """Well-formed input for which the requested construction is not defined."""


class UnsupportedInputError(PreconditionError):
    pass


class MixedDegreeError(PreconditionError):
    pass


class ForeignGeneratorError(PreconditionError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class TruncationError(PreconditionError):
    """The degree bound of an algebra is too small for the requested degree."""


class NotACycleError(PreconditionError):
    pass


class NotDefinedError(PreconditionError):
    """A Whitehead product whose boundary complex is not contained in K."""

    def __init__(self, message, missing=None):
        super().__init__(message)
        self.missing = missing


class InvariantViolation(PolycobarError, AssertionError):
    pass
