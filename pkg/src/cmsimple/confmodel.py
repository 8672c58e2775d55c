"""Configurations (perfect matchings of half-edges) and their multigraphs.

Half-edges are numbered 0..2N-1 in contiguous blocks by vertex, in the
order of the degree sequence: vertex 0 owns 0..d_0-1, vertex 1 the next
d_1 labels, and so on.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .degseq import DegreeSequence
from .errors import DegenerateInputError, InconsistencyError, ParseError


def half_edge_owners(ds: DegreeSequence) -> tuple[int, ...]:
    return tuple(v for v, d in enumerate(ds) for _ in range(d))


@dataclass(frozen=True)
class Configuration:
    """A fixed-point-free involution on the half-edges.

    ``partner[h]`` is the half-edge matched with ``h``.
    """

    partner: tuple[int, ...]
    vertex_of: tuple[int, ...]

    def __post_init__(self):
        p = self.partner
        if len(p) != len(self.vertex_of):
            raise InconsistencyError("partner and vertex_of differ in length")
        for h, q in enumerate(p):
            if q == h or not 0 <= q < len(p) or p[q] != h:
                raise InconsistencyError(f"half-edge {h} is not properly paired")

    @classmethod
    def from_pairs(cls, pairs, vertex_of) -> "Configuration":
        partner = [-1] * len(vertex_of)
        for a, b in pairs:
            partner[a] = b
            partner[b] = a
        return cls(tuple(partner), tuple(vertex_of))

    def pairs(self) -> list[tuple[int, int]]:
        return [(h, q) for h, q in enumerate(self.partner) if h < q]

    def __len__(self):
        return len(self.partner) // 2


class Multigraph:
    """Loop counts per vertex and parallel-edge multiplicities per vertex pair.

    Multiplicities are keyed by ``(v, w)`` with ``v < w`` and never hold
    zeros; loops are kept apart from the pair map.
    """

    __slots__ = ("n", "loop_counts", "multiplicities", "_key")

    def __init__(self, n: int, loop_counts, multiplicities: Mapping[tuple[int, int], int]):
        loops = tuple(int(x) for x in loop_counts)
        if len(loops) != n:
            raise InconsistencyError(f"expected {n} loop counts, got {len(loops)}")
        mult = {}
        for (v, w), c in multiplicities.items():
            if not (0 <= v < w < n) or c < 0:
                raise InconsistencyError(f"bad multiplicity entry {(v, w)}: {c}")
            if c:
                mult[(v, w)] = int(c)
        self.n = n
        self.loop_counts = loops
        self.multiplicities = MappingProxyType(mult)
        self._key = (n, loops, tuple(sorted(mult.items())))

    def multiplicity(self, v: int, w: int) -> int:
        if v == w:
            raise ValueError("use loop_counts for loops")
        return self.multiplicities.get((min(v, w), max(v, w)), 0)

    def degrees(self) -> tuple[int, ...]:
        deg = [2 * x for x in self.loop_counts]
        for (v, w), c in self.multiplicities.items():
            deg[v] += c
            deg[w] += c
        return tuple(deg)

    def __eq__(self, other):
        return isinstance(other, Multigraph) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Multigraph(n={self.n}, loops={self.loop_counts}, edges={dict(self.multiplicities)})"


def sample_pairings(ds: DegreeSequence, rng: np.random.Generator, size: int) -> np.ndarray:
    """``size`` independent shuffles of the half-edge labels, one per row.

    Row entries 2i and 2i+1 are paired; this is the batched form of
    :func:`sample_configuration`.
    """
    N = ds.edges
    if N == 0:
        raise DegenerateInputError(f"degree sequence {ds} has no half-edges")
    return rng.permuted(np.tile(np.arange(2 * N), (size, 1)), axis=1)


def partners_from_pairings(rows: np.ndarray) -> np.ndarray:
    """Turn shuffled rows into partner arrays (row-wise involutions)."""
    out = np.empty_like(rows)
    r = np.arange(rows.shape[0])[:, None]
    out[r, rows[:, 0::2]] = rows[:, 1::2]
    out[r, rows[:, 1::2]] = rows[:, 0::2]
    return out


def sample_configuration(ds: DegreeSequence, rng: np.random.Generator) -> Configuration:
    """Uniform random configuration: shuffle the half-edges, pair neighbours."""
    partner = partners_from_pairings(sample_pairings(ds, rng, 1))[0]
    return Configuration(tuple(partner.tolist()), half_edge_owners(ds))


def project(ds: DegreeSequence, cfg: Configuration) -> Multigraph:
    owners = half_edge_owners(ds)
    if len(cfg.partner) != len(owners):
        raise InconsistencyError(
            f"configuration has {len(cfg.partner)} half-edges, degree sequence has {len(owners)}")
    loops = [0] * ds.n
    mult: dict[tuple[int, int], int] = {}
    for a, b in cfg.pairs():
        v, w = owners[a], owners[b]
        if v == w:
            loops[v] += 1
        else:
            key = (v, w) if v < w else (w, v)
            mult[key] = mult.get(key, 0) + 1
    return Multigraph(ds.n, loops, mult)


def is_simple(mg: Multigraph) -> bool:
    return not any(mg.loop_counts) and all(c <= 1 for c in mg.multiplicities.values())


def y_statistic(mg: Multigraph) -> int:
    """Vertices with a loop plus vertex pairs with at least two parallel edges."""
    return sum(1 for x in mg.loop_counts if x) + sum(1 for c in mg.multiplicities.values() if c >= 2)


def decomposition(mg: Multigraph) -> tuple[int, int]:
    """(total loops, total unordered pairs of parallel non-loop edges)."""
    return sum(mg.loop_counts), sum(comb(c, 2) for c in mg.multiplicities.values())


def ytilde_statistic(mg: Multigraph) -> int:
    loops, pairs = decomposition(mg)
    return loops + pairs


def dump_multigraph(mg: Multigraph) -> str:
    lines = [f"L {v} {x}" for v, x in enumerate(mg.loop_counts) if x]
    lines += [f"E {v} {w} {c}" for (v, w), c in sorted(mg.multiplicities.items())]
    return "\n".join(lines) + ("\n" if lines else "")


def parse_multigraph_dump(text: str, n: int) -> Multigraph:
    loops = [0] * n
    mult = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts:
            continue
        try:
            if parts[0] == "L" and len(parts) == 3:
                loops[int(parts[1])] += int(parts[2])
                continue
            if parts[0] == "E" and len(parts) == 4:
                v, w, c = map(int, parts[1:])
                key = (min(v, w), max(v, w))
                mult[key] = mult.get(key, 0) + c
                continue
        except (ValueError, IndexError):
            pass
        raise ParseError(f"line {lineno}: cannot parse {line!r}")
    return Multigraph(n, loops, mult)
