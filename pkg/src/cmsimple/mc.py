"""Monte Carlo estimates of P(simple) and of the Y / Ytilde laws.

Samples are split into fixed chunks of :data:`CHUNK_SIZE`.  Chunk ``c``
draws from its own stream seeded by ``SeedSequence(seed, spawn_key=(c,))``
and results are merged in chunk order, so the worker count only changes
wall-clock time.
"""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np
from scipy import stats as sps

from . import _kernels
from .degseq import DegreeSequence
from .errors import DegenerateInputError, DomainError

CHUNK_SIZE = 4096
STATISTICS = ("Y", "Ytilde", "loops", "parallel_pairs")


def chunk_state(seed: int, chunk: int) -> np.ndarray:
    state = np.random.SeedSequence(seed, spawn_key=(chunk,)).generate_state(4, np.uint64)
    if not state.any():
        state[0] = 1
    return state


def _chunks(samples: int):
    return [(c, min(CHUNK_SIZE, samples - c * CHUNK_SIZE))
            for c in range(math.ceil(samples / CHUNK_SIZE))]


def _run_chunks(fn, samples: int, workers: int):
    chunks = _chunks(samples)
    if workers <= 1 or len(chunks) == 1:
        return [fn(c, k) for c, k in chunks]
    # kernels release the GIL; map keeps chunk order
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda ck: fn(*ck), chunks))


def _prepare(ds: DegreeSequence, samples: int):
    if samples < 1:
        raise DomainError(f"samples must be >= 1, got {samples}")
    if ds.edges == 0:
        raise DegenerateInputError(f"degree sequence {ds} has no edges")
    if 2 * ds.edges >= 2 ** 31:
        raise DomainError(f"{2 * ds.edges} half-edges exceed the sampler's 32-bit labels")
    vertex_of = np.repeat(np.arange(ds.n, dtype=np.int32), ds.degrees)
    return vertex_of, _kernels.table_size(ds.edges)


def wilson_interval(successes: int, samples: int, confidence: float = 0.95) -> tuple[float, float]:
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    p = successes / samples
    denom = 1 + z * z / samples
    centre = (p + z * z / (2 * samples)) / denom
    half = z * math.sqrt(p * (1 - p) / samples + z * z / (4 * samples * samples)) / denom
    # clamp so rounding never pushes p_hat outside its own interval
    return min(max(0.0, centre - half), p), max(min(1.0, centre + half), p)


@dataclass(frozen=True)
class SimplicityEstimate:
    p_hat: float
    ci_low: float
    ci_high: float
    samples: int
    successes: int
    seed: int
    confidence: float
    elapsed: float

    @property
    def half_width(self) -> float:
        return (self.ci_high - self.ci_low) / 2

    def to_dict(self, timing: bool = False) -> dict:
        d = {
            "p_hat": self.p_hat,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "interval": "wilson",
            "confidence": self.confidence,
            "samples": self.samples,
            "successes": self.successes,
            "seed": self.seed,
        }
        if timing:
            d["elapsed"] = self.elapsed
        return d


def estimate_p_simple(ds: DegreeSequence, samples: int = 100_000, seed: int = 0,
                      workers: int = 1, confidence: float = 0.95) -> SimplicityEstimate:
    vertex_of, size = _prepare(ds, samples)
    start = time.perf_counter()

    def run(chunk, count):
        return _kernels.count_simple(vertex_of, ds.n, chunk_state(seed, chunk), count, size, True)

    successes = sum(_run_chunks(run, samples, workers))
    lo, hi = wilson_interval(successes, samples, confidence)
    return SimplicityEstimate(
        p_hat=successes / samples, ci_low=lo, ci_high=hi, samples=samples,
        successes=successes, seed=seed, confidence=confidence,
        elapsed=time.perf_counter() - start)


@dataclass(frozen=True)
class Histogram:
    counts: dict[int, int]
    samples: int
    statistic: str = ""

    def __post_init__(self):
        if sum(self.counts.values()) != self.samples:
            raise ValueError("histogram counts do not add up to the sample total")

    def probabilities(self) -> dict[int, float]:
        return {k: c / self.samples for k, c in sorted(self.counts.items())}

    def mean(self) -> float:
        return sum(k * c for k, c in self.counts.items()) / self.samples

    def to_dict(self) -> dict:
        return {"statistic": self.statistic, "samples": self.samples,
                "counts": {str(k): c for k, c in sorted(self.counts.items())}}

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["value", "count"])
        for k, c in sorted(self.counts.items()):
            writer.writerow([k, c])
        return buf.getvalue()


def sample_statistics(ds: DegreeSequence, samples: int, seed: int = 0, workers: int = 1) -> np.ndarray:
    """(samples, 4) array of Y, Ytilde, loop total, parallel-pair total."""
    vertex_of, size = _prepare(ds, samples)

    def run(chunk, count):
        out = np.empty((count, 4), dtype=np.int64)
        _kernels.sample_statistics(vertex_of, ds.n, chunk_state(seed, chunk), count, size, out)
        return out

    return np.concatenate(_run_chunks(run, samples, workers))


def histograms(ds: DegreeSequence, samples: int, seed: int = 0, workers: int = 1) -> dict[str, Histogram]:
    """All four statistics' histograms from one shared set of samples."""
    table = sample_statistics(ds, samples, seed, workers)
    out = {}
    for col, name in enumerate(STATISTICS):
        values, counts = np.unique(table[:, col], return_counts=True)
        out[name] = Histogram({int(v): int(c) for v, c in zip(values, counts)}, samples, name)
    return out


def empirical_distribution(ds: DegreeSequence, statistic: str, samples: int, seed: int = 0,
                           workers: int = 1) -> Histogram:
    if statistic not in STATISTICS:
        raise DomainError(f"unknown statistic {statistic!r}; choose from {STATISTICS}")
    return histograms(ds, samples, seed, workers)[statistic]


def tv_distance(h: Histogram, mean: float) -> float:
    """sum_j |P_hat(j) - Poisson(mean)(j)|, i.e. twice the usual TV distance.

    Poisson mass above the histogram's largest value is added in full.
    """
    if not mean > 0:
        raise DomainError(f"Poisson mean must be positive, got {mean}")
    if h.samples < 1 or not h.counts:
        raise DomainError("histogram is empty")
    top = max(h.counts)
    support = np.arange(top + 1)
    q = sps.poisson.pmf(support, mean)
    p = np.array([h.counts.get(int(j), 0) / h.samples for j in support])
    return float(np.abs(p - q).sum() + sps.poisson.sf(top, mean))
