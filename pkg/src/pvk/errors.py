"""Exception hierarchy shared by the kernel, reducer, theories and services.

Every error carries a stable machine-readable ``code`` so the HTTP service
and the CLI can report failures uniformly.
"""


class PvkError(Exception):
    code = "Error"

    def __init__(self, message="", **details):
        super().__init__(message)
        self.details = details


# --- expression construction ------------------------------------------------

class KindViolation(PvkError):
    """A structural rule of a primitive kind was violated (Curry guard etc.)."""
    code = "KindViolation"


class MalformedParts(PvkError):
    code = "MalformedParts"


# --- style layer -------------------------------------------------------------

class UnknownStyleOption(PvkError):
    code = "UnknownStyleOption"


class BadPath(PvkError):
    code = "BadPath"


# --- reduction engine ---------------------------------------------------------

class FuelExhausted(PvkError):
    """Chained beta reduction exceeded its step budget."""
    code = "FuelExhausted"


class LengthMismatch(PvkError):
    code = "LengthMismatch"


class RelabelForbidden(PvkError):
    code = "RelabelForbidden"


class RangeBodyForbidden(PvkError):
    """An operator-replacement Lambda may not have an ExprRange body."""
    code = "RangeBodyForbidden"


class IndexMismatch(PvkError):
    code = "IndexMismatch"


class UnreducibleExtent(PvkError):
    code = "UnreducibleExtent"


class AmbiguousMatch(PvkError):
    code = "AmbiguousMatch"


# --- proof kernel --------------------------------------------------------------

class KernelError(PvkError):
    code = "KernelError"


class NotAnImplication(KernelError):
    code = "NotAnImplication"


class AntecedentMismatch(KernelError):
    code = "AntecedentMismatch"


class NotUniversal(KernelError):
    code = "NotUniversal"


class UnsatisfiedCondition(KernelError):
    code = "UnsatisfiedCondition"


class FreeVariableLeak(KernelError):
    code = "FreeVariableLeak"


class NotFullyProven(KernelError):
    code = "NotFullyProven"


class LiteralStillRequired(KernelError):
    code = "LiteralStillRequired"


# --- theory system --------------------------------------------------------------

class TheoryError(PvkError):
    code = "TheoryError"


class UnknownTheoryItem(TheoryError):
    code = "UnknownTheoryItem"


class PresumptionViolation(TheoryError):
    code = "PresumptionViolation"


class NotClosed(TheoryError):
    code = "NotClosed"


class DuplicateName(TheoryError):
    code = "DuplicateName"


class CircularDependency(TheoryError):
    code = "CircularDependency"


class VerificationFailed(TheoryError):
    code = "VerificationFailed"


class FixtureCorrupt(TheoryError):
    code = "FixtureCorrupt"


# --- certificates / checker -------------------------------------------------------

class CertificateSyntaxError(PvkError):
    """Unparseable certificate or expression text; carries line/column."""
    code = "SyntaxError"

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column

    def __str__(self):
        base = super().__str__()
        if self.line is not None:
            return f"{self.line}:{self.column}: {base}"
        return base


class HashMismatch(PvkError):
    code = "HashMismatch"


class OrderingViolation(PvkError):
    code = "OrderingViolation"


class RuleViolation(PvkError):
    code = "RuleViolation"


# --- service ---------------------------------------------------------------------

class UnknownSnapshot(PvkError):
    code = "UnknownSnapshot"


class UnknownIndex(PvkError):
    code = "UnknownIndex"


class UnknownPath(PvkError):
    code = "UnknownPath"
