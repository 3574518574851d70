"""Exception hierarchy. Guard failures (NonTermination, NonConvergence) are
kept separate from input errors so the CLI can map them to exit code 2."""


class EqpeError(Exception):
    pass


class InputError(EqpeError):
    """Bad user input: parse errors, unknown names, ill-typed terms."""


class ParseError(InputError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)


class UnknownSort(InputError):
    pass


class IllTyped(InputError):
    pass


class SortViolation(InputError):
    """A substitution binding does not respect the variable's sort."""


class InvalidPosition(InputError):
    pass


class UnsupportedAxioms(InputError):
    """Axiom combination outside {free, C, AC, ACU}, e.g. assoc without comm."""


class NonOrientable(InputError):
    """Equation cannot be used as a rewrite rule (extra rhs variables, lhs = rhs,
    or a variable lhs)."""


class EmptyInput(InputError):
    pass


class GuardError(EqpeError):
    """Resource guard tripped; the computation was cut off, not wrong."""


class NonTermination(GuardError):
    """normalize() exhausted its fuel."""


class NonConvergence(GuardError):
    """The specialization loop did not reach a stable call set within max_iter."""


class CapExceeded(GuardError):
    """A combinatorial search (e.g. the Diophantine basis) hit its hard cap."""


class NotClosed(EqpeError):
    """A term that must be covered by the specialized call set is not."""
