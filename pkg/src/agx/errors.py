"""Exception hierarchy shared by all agx modules."""


class AgxError(Exception):
    """Base class for domain errors (mapped to exit code 1 by the CLI)."""


class InvalidAutomaton(AgxError):
    pass


class InvalidOutputRow(InvalidAutomaton):
    def __init__(self, state):
        super().__init__(f"output row of state {state!r} is not a permutation")
        self.state = state


class InvalidTransition(InvalidAutomaton):
    def __init__(self, state, letter):
        super().__init__(f"transition of state {state!r} on letter {letter} is dangling")
        self.state = state
        self.letter = letter


class LetterOutOfRange(AgxError):
    pass


class OverflowAlphabet(AgxError):
    pass


class BudgetExceeded(AgxError):
    """Raised when an enumeration would exceed its configured budget.

    ``partial`` carries whatever was computed before the cap was hit.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class SizeCapExceeded(BudgetExceeded):
    pass


class NotPolynomial(AgxError):
    pass


class UnsupportedParameter(AgxError):
    pass


class WordSyntaxError(AgxError):
    pass
