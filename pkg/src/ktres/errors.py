"""Exception hierarchy shared by all modules."""


class KtresError(Exception):
    """Base class for engine errors."""


class StructuralError(KtresError, ValueError):
    """Operands live in incompatible rings, algebras or jet spaces."""


class ContractViolation(KtresError, ValueError):
    """A documented precondition of an operation does not hold."""


class InconsistentInput(KtresError, ValueError):
    """Input data contradicts itself (e.g. a relation that is not a relation)."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CapExceeded(KtresError):
    """A combinatorial guard (slice dimension, weight, tier count) was hit."""


class JetTruncationError(KtresError):
    """An operation would produce a jet coordinate beyond the truncation order."""


class ParseError(KtresError, ValueError):
    """Malformed textual input, with 1-based line/column when known."""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
