"""Configuration-model multigraphs and the probability that they are simple."""

from .degseq import DegreeSequence, DegreeStats, stats
from .errors import (
    CapExceededError,
    DegenerateInputError,
    DomainError,
    InconsistencyError,
    InputError,
    InvariantError,
    ParityError,
    ParseError,
)

__version__ = "0.1.0"
