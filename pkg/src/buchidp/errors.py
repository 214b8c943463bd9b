"""Exception types shared across the package."""


class BuchiDpError(Exception):
    """Base class for all errors raised by this package."""


class PolicyInvalid(BuchiDpError):
    """A policy selects an action that is not enabled in some state."""


class ParseError(BuchiDpError):
    """Base for model/policy text format errors; carries a source location."""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(str(self))

    def __str__(self):
        loc = ""
        if self.line is not None:
            loc = f"line {self.line}"
            if self.column is not None:
                loc += f", col {self.column}"
            loc += ": "
        return loc + self.message


class ModelSyntaxError(ParseError):
    """A line does not match the model/policy grammar."""


class ModelSemanticError(ParseError):
    """Well-formed text that violates a model-level rule (duplicate
    transition, unknown state, row sum out of tolerance, ...)."""


class LengthMismatch(BuchiDpError):
    """Trace and bound sequences disagree in length (or the trace is empty)."""


class DimensionMismatch(BuchiDpError):
    """A vector or matrix does not conform to the expected shape."""


class EmptySystem(BuchiDpError):
    """Every state lies in a rejecting BSCC; the reduced system has no
    states and the value function is identically zero."""


class SingularSystem(BuchiDpError):
    """The linear solver reported rank deficiency.  Cannot happen for a
    correctly partitioned system; signals an upstream bug."""


class NoTransitions(BuchiDpError):
    """The transition matrix has no positive entry (defensive; impossible
    for a validated row-stochastic chain)."""


class CertificateViolation(BuchiDpError):
    """An empirical multi-step norm exceeded its theoretical bound.
    Indicates an implementation bug, never swallowed."""
