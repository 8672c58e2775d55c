"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: input errors exit 2, resource caps
exit 3, invariant violations exit 4.
"""


class InputError(ValueError):
    """Bad user input: unparsable, wrong parity, out-of-domain arguments."""


class ParseError(InputError):
    pass


class ParityError(InputError):
    def __init__(self, total):
        self.total = total
        super().__init__(f"degree sum {total} is odd; a configuration needs an even sum")


class DegenerateInputError(InputError):
    """Raised when a quantity needs at least one edge and N = 0."""


class DomainError(InputError):
    pass


class InconsistencyError(InputError):
    """A configuration or multigraph does not belong to the degree sequence."""


class CapExceededError(RuntimeError):
    def __init__(self, edges, cap):
        self.edges = edges
        self.cap = cap
        super().__init__(f"exact enumeration limited to N <= {cap} edges (got N = {edges})")


class InvariantError(RuntimeError):
    """An internal cross-check failed; results must not be trusted."""
