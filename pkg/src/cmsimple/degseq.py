"""Degree sequences, their summary statistics, and vertex splitting.

Vertices are indexed from 0.  Vertices of degree zero are kept unless
:func:`normalize` is called explicitly.
"""

from __future__ import annotations

import math
import operator
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DegenerateInputError, DomainError, ParityError, ParseError


@dataclass(frozen=True)
class DegreeSequence:
    degrees: tuple[int, ...]

    def __init__(self, degrees: Iterable[int]):
        try:
            degs = tuple(operator.index(d) for d in degrees)
        except TypeError as exc:
            raise ParseError(f"degrees must be integers ({exc})") from None
        if not degs:
            raise ParseError("a degree sequence needs at least one vertex")
        for d in degs:
            if d < 0:
                raise ParseError(f"degree {d} is negative")
        total = sum(degs)
        if total % 2:
            raise ParityError(total)
        object.__setattr__(self, "degrees", degs)

    def __len__(self):
        return len(self.degrees)

    def __iter__(self):
        return iter(self.degrees)

    def __getitem__(self, i):
        return self.degrees[i]

    @property
    def n(self) -> int:
        return len(self.degrees)

    @property
    def edges(self) -> int:
        """N, half the degree sum."""
        return sum(self.degrees) // 2

    def __str__(self):
        return "(" + ",".join(map(str, self.degrees)) + ")"


@dataclass(frozen=True)
class DegreeStats:
    n: int
    N: int
    sum_d2: int
    sum_dd1: int
    sum_d2d1sq: int
    max_d: int
    lambda_exact: Fraction
    density_exact: Fraction

    @property
    def lambda_big(self) -> float:
        return float(self.lambda_exact)

    @property
    def density_ratio(self) -> float:
        return float(self.density_exact)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "N": self.N,
            "sum_d2": self.sum_d2,
            "sum_dd1": self.sum_dd1,
            "sum_d2d1sq": self.sum_d2d1sq,
            "max_d": self.max_d,
            "lambda_big": self.lambda_big,
            "lambda_exact": {"num": str(self.lambda_exact.numerator),
                             "den": str(self.lambda_exact.denominator)},
            "density_ratio": self.density_ratio,
        }


def _require_edges(ds: DegreeSequence) -> int:
    N = ds.edges
    if N == 0:
        raise DegenerateInputError(f"degree sequence {ds} has no edges")
    return N


def stats(ds: DegreeSequence) -> DegreeStats:
    N = _require_edges(ds)
    sum_d2 = sum(d * d for d in ds)
    sum_dd1 = sum(d * (d - 1) for d in ds)
    return DegreeStats(
        n=ds.n,
        N=N,
        sum_d2=sum_d2,
        sum_dd1=sum_dd1,
        sum_d2d1sq=sum((d * (d - 1)) ** 2 for d in ds),
        max_d=max(ds),
        # (1/2N) sum C(d,2) == sum d(d-1) / 4N
        lambda_exact=Fraction(sum_dd1, 4 * N),
        density_exact=Fraction(sum_d2, N),
    )


def lambda_pair(ds: DegreeSequence, i: int, j: int) -> float:
    """sqrt(d_i(d_i-1) d_j(d_j-1)) / 2N; exact when the radicand is a square."""
    N = _require_edges(ds)
    di, dj = ds[i], ds[j]
    radicand = di * (di - 1) * dj * (dj - 1)
    root = math.isqrt(radicand)
    if root * root == radicand:
        return float(Fraction(root, 2 * N))
    return math.sqrt(radicand) / (2 * N)


def split_vertex(ds: DegreeSequence, j: int) -> DegreeSequence:
    """Move one half-edge of vertex j onto a new degree-1 vertex."""
    if not 0 <= j < ds.n:
        raise DomainError(f"vertex index {j} out of range for n = {ds.n}")
    if ds[j] <= 1:
        raise DomainError(f"cannot split vertex {j} of degree {ds[j]}")
    degs = list(ds.degrees)
    degs[j] -= 1
    degs.append(1)
    return DegreeSequence(degs)


def split_until(ds: DegreeSequence, A: float) -> DegreeSequence:
    """Split max-degree vertices (lowest index first) until sum d^2 <= A*N."""
    A = Fraction(A)
    if A <= 2:
        raise DomainError(f"split_until needs A > 2, got {float(A)}")
    N = _require_edges(ds)
    limit = A * N
    degs = list(ds.degrees)
    sq = sum(d * d for d in degs)
    while sq > limit:
        top = max(degs)
        j = degs.index(top)
        # top > 1 here: otherwise sq == 2N <= A*N
        degs[j] -= 1
        degs.append(1)
        sq -= 2 * top - 2
    return ds if len(degs) == ds.n else DegreeSequence(degs)


def normalize(ds: DegreeSequence) -> DegreeSequence:
    """Drop vertices of degree zero (keeps one if all are zero)."""
    kept = [d for d in ds if d > 0]
    return DegreeSequence(kept or [0])


def regular(n: int, d: int) -> DegreeSequence:
    if n < 1 or d < 0:
        raise DomainError(f"regular(n={n}, d={d}) needs n >= 1 and d >= 0")
    return DegreeSequence([d] * n)


def hub(k: int, edges: int) -> DegreeSequence:
    """One hub of degree k padded with 2*edges - k vertices of degree 1."""
    if k < 0 or 2 * edges < k:
        raise DomainError(f"hub degree {k} does not fit in {edges} edges")
    return DegreeSequence([k] + [1] * (2 * edges - k))


def parse_degrees(text: str) -> DegreeSequence:
    degs = []
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        try:
            d = int(s)
        except ValueError:
            raise ParseError(f"line {lineno}: {s!r} is not an integer") from None
        if d < 0:
            raise ParseError(f"line {lineno}: degree {d} is negative")
        degs.append(d)
    if not degs:
        raise ParseError("no degrees found")
    return DegreeSequence(degs)


def from_file(path: str | os.PathLike) -> DegreeSequence:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read degree file {path}: {exc.strerror}") from exc
    return parse_degrees(text)


def literal(values: str | Sequence[int]) -> DegreeSequence:
    """Accept either a sequence of ints or a string like ``"3,3,3,3"``."""
    if isinstance(values, str):
        parts = [p.strip() for p in values.replace(" ", ",").split(",") if p.strip()]
        try:
            values = [int(p) for p in parts]
        except ValueError:
            raise ParseError(f"cannot parse degree list {values!r}") from None
    return DegreeSequence(values)
