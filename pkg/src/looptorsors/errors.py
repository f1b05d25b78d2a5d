"""Exception hierarchy.

Every domain failure raised by the library derives from :class:`DomainError`;
the CLI reports the class name of the error it caught.
"""


class DomainError(ValueError):
    pass


class ZeroScalar(DomainError):
    pass


class SingularForm(DomainError):
    pass


class FieldMismatch(DomainError):
    pass


class IndexOutOfRange(DomainError):
    pass


class ZeroElement(DomainError):
    pass


class NonMonomialEntry(DomainError):
    pass


class UnsupportedField(DomainError):
    pass


class InvalidDescriptor(DomainError):
    pass


class SizeMismatch(DomainError):
    pass


class NotUnimodular(DomainError):
    pass


class DegreeIncompatible(DomainError):
    pass


class ParseError(DomainError):
    """Malformed textual input (monomials, field names, fractions)."""
