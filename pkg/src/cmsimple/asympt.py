"""Asymptotic formula values for P(multigraph is simple).

Every value here is the limiting expression with its o(1) error dropped.
Pair sums over i < j are grouped by distinct degree values, so the cost
is quadratic in the number of distinct degrees rather than in n.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .degseq import DegreeSequence, DegreeStats, stats
from .errors import InvariantError

# Below this, the two pair functions are summed from their Taylor series.
SERIES_CUTOFF = 0.1
_SERIES_TERMS = 20

BOUNDED_THRESHOLD = 20.0
VANISHING_THRESHOLD = 200.0


def pair_deficit(lam: float) -> float:
    """lam - log(1 + lam), accurate for tiny lam."""
    if lam < SERIES_CUTOFF:
        # sum_{m>=2} (-1)^m lam^m / m
        total = 0.0
        for m in range(_SERIES_TERMS + 1, 1, -1):
            total = total * lam + (1.0 if m % 2 == 0 else -1.0) / m
        return total * lam * lam
    return lam - math.log1p(lam)


def pair_correction(lam: float) -> float:
    """log(1 + lam) - lam + lam^2/2, accurate for tiny lam."""
    if lam < SERIES_CUTOFF:
        # sum_{m>=3} (-1)^(m+1) lam^m / m
        total = 0.0
        for m in range(_SERIES_TERMS + 2, 2, -1):
            total = total * lam + (1.0 if m % 2 == 1 else -1.0) / m
        return total * lam ** 3
    return math.log1p(lam) - lam + 0.5 * lam * lam


def _class_pairs(ds: DegreeSequence):
    """Yield (lambda_ij, number of unordered pairs i<j) per degree-class pair."""
    N = ds.edges
    classes = sorted((d, m) for d, m in Counter(ds.degrees).items() if d >= 2)
    for a_idx, (a, ma) in enumerate(classes):
        for b, mb in classes[a_idx:]:
            count = ma * (ma - 1) // 2 if a == b else ma * mb
            if count:
                yield math.sqrt(a * (a - 1) * b * (b - 1)) / (2 * N), count


def _pair_sum(ds: DegreeSequence, fn) -> float:
    return math.fsum(count * fn(lam) for lam, count in _class_pairs(ds))


def p_simple_t2a(ds: DegreeSequence) -> float:
    """exp(-1/2 sum_i lam_ii - sum_{i<j} (lam_ij - log(1 + lam_ij)))."""
    st = stats(ds)
    # half the diagonal sum is exactly Lambda
    return math.exp(-st.lambda_big - _pair_sum(ds, pair_deficit))


def _t2b_polynomial_part(st: DegreeStats) -> Fraction:
    N = st.N
    return (-Fraction(st.sum_d2, 2 * N) ** 2 / 4 + Fraction(1, 4)
            + Fraction(st.sum_d2d1sq, 16 * N * N))


def p_simple_t2b(ds: DegreeSequence) -> float:
    st = stats(ds)
    return math.exp(float(_t2b_polynomial_part(st)) + _pair_sum(ds, pair_correction))


def _poisson_forms(st: DegreeStats) -> tuple[float, float]:
    lam = st.lambda_big
    half_ratio = st.sum_d2 / (2 * st.N)
    return math.exp(-lam - lam * lam), math.exp(-0.25 * half_ratio * half_ratio + 0.25)


def p_simple_poisson(ds: DegreeSequence) -> float:
    """exp(-Lambda - Lambda^2), cross-checked against its degree-square form."""
    st = stats(ds)
    direct, alt = _poisson_forms(st)
    if not math.isclose(direct, alt, rel_tol=1e-12, abs_tol=1e-300):
        raise InvariantError(f"Poisson forms disagree for {ds}: {direct} vs {alt}")
    return direct


def bounds(ds: DegreeSequence) -> tuple[float, float]:
    """(upper, lower) = (exp(1/2 - sum d^2 / 4N), exp(-(sum d^2 / 4N)^2))."""
    st = stats(ds)
    # 1/2 - sum d^2/4N == -Lambda exactly; share the float with t2a
    upper = math.exp(-st.lambda_big)
    lower = math.exp(-float(Fraction(st.sum_d2, 4 * st.N) ** 2))
    return upper, lower


def dichotomy_diagnostic(ds: DegreeSequence, bounded: float = BOUNDED_THRESHOLD,
                         vanishing: float = VANISHING_THRESHOLD) -> tuple[float, str]:
    """Return sum d^2 / N and an advisory verdict.

    The thresholds are presentation defaults; the underlying statement is
    about families of sequences, not any single one.
    """
    ratio = stats(ds).density_ratio
    if ratio <= bounded:
        return ratio, "bounded-away"
    if ratio >= vanishing:
        return ratio, "vanishing"
    return ratio, "indeterminate"


@dataclass(frozen=True)
class AsymptoticReport:
    t2a_value: float
    t2b_value: float
    poisson_value: float
    poisson_alt_value: float
    upper_bound_j1: float
    lower_bound_j2: float
    lambda_big: float
    density_ratio: float
    correction_term: float
    verdict: str
    stats: DegreeStats

    def to_dict(self) -> dict:
        return {
            "label": "asymptotic formula value (o(1) term dropped)",
            "t2a_value": self.t2a_value,
            "t2b_value": self.t2b_value,
            "poisson_value": self.poisson_value,
            "poisson_alt_value": self.poisson_alt_value,
            "upper_bound_j1": self.upper_bound_j1,
            "lower_bound_j2": self.lower_bound_j2,
            "lambda_big": self.lambda_big,
            "density_ratio": self.density_ratio,
            "correction_term": self.correction_term,
            "dichotomy": {
                "verdict": self.verdict,
                "thresholds": [BOUNDED_THRESHOLD, VANISHING_THRESHOLD],
                "note": "thresholds are presentation defaults, not mathematics",
            },
            "stats": self.stats.to_dict(),
        }


def report(ds: DegreeSequence) -> AsymptoticReport:
    st = stats(ds)
    t2a = p_simple_t2a(ds)
    t2b = p_simple_t2b(ds)
    upper, lower = bounds(ds)
    direct, alt = _poisson_forms(st)
    rep = AsymptoticReport(
        t2a_value=t2a,
        t2b_value=t2b,
        poisson_value=p_simple_poisson(ds),
        poisson_alt_value=alt,
        upper_bound_j1=upper,
        lower_bound_j2=lower,
        lambda_big=st.lambda_big,
        density_ratio=st.density_ratio,
        correction_term=_pair_sum(ds, pair_correction),
        verdict=dichotomy_diagnostic(ds)[1],
        stats=st,
    )
    if not math.isclose(t2a, t2b, rel_tol=1e-9, abs_tol=1e-300):
        raise InvariantError(f"t2a and t2b disagree for {ds}: {t2a} vs {t2b}")
    if not (lower <= t2b and t2a <= upper):
        raise InvariantError(f"bounds do not bracket the formula for {ds}")
    return rep
