"""Finite-scale constructions of the named ultrametric spaces."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .rational import to_rational
from .spaces import FiniteUltraSpace, SpectrumSet
from .trees import UNBOUNDED, Degree, word_label


@dataclass(frozen=True)
class LevelSpec:
    """Strictly decreasing positive level values with per-level degree bounds."""

    levels: tuple[Fraction, ...]
    degrees: tuple[Degree, ...] = ()

    def __post_init__(self):
        lv = tuple(to_rational(v) for v in self.levels)
        object.__setattr__(self, "levels", lv)
        if not lv:
            raise ValueError("at least one level is required")
        if any(v <= 0 for v in lv):
            raise ValueError("level values must be positive")
        if any(a <= b for a, b in zip(lv, lv[1:])):
            raise ValueError("level values must strictly decrease")
        if not self.degrees:
            object.__setattr__(self, "degrees", (UNBOUNDED,) * len(lv))
        if len(self.degrees) != len(lv):
            raise ValueError("one degree per level")
        for a in self.degrees:
            if a is not UNBOUNDED and (not isinstance(a, int) or a < 2):
                raise ValueError(f"degree {a!r} must be an integer >= 2 or UNBOUNDED")

    def ranges(self, width: int) -> list[int]:
        return [width if a is UNBOUNDED else min(a, width) for a in self.degrees]


def _values(V: Iterable) -> list[Fraction]:
    vals = sorted({to_rational(v) for v in V})
    if not vals or vals[0] != 0:
        raise ValueError("the value set must contain 0")
    if vals[0] < 0:
        raise ValueError("values must be nonnegative")
    return vals


def max_space(V: Iterable) -> FiniteUltraSpace:
    """Points are the values themselves, d(u, v) = max(u, v)."""
    vals = _values(V)
    dist = tuple(tuple(max(u, v) if u != v else Fraction(0) for v in vals) for u in vals)
    return FiniteUltraSpace(dist, tuple(str(v) for v in vals))


def omega_space(spec: LevelSpec, width: int) -> FiniteUltraSpace:
    """Words with coordinate ``i`` below ``min(degree_i, width)``; distance is
    the level value at the first differing coordinate."""
    if width < 2:
        raise ValueError("width must be at least 2")
    words = list(itertools.product(*(range(r) for r in spec.ranges(width))))
    return _word_space(words, spec.levels)


def _word_space(words: Sequence[tuple[int, ...]], levels: Sequence[Fraction]) -> FiniteUltraSpace:
    n = len(words)
    dist = [[Fraction(0)] * n for _ in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            k = next(i for i, (x, y) in enumerate(zip(words[a], words[b])) if x != y)
            dist[a][b] = dist[b][a] = levels[k]
    return FiniteUltraSpace(tuple(map(tuple, dist)), tuple(word_label(w) for w in words))


def ultv_approx(V: Iterable, width: int) -> FiniteUltraSpace:
    """Width truncation of the Urysohn ultrametric space with spectrum V."""
    vals = _values(V)
    if width < 2:
        raise ValueError("width must be at least 2")
    if len(vals) == 1:
        return FiniteUltraSpace(((Fraction(0),),), (word_label(()),))
    return omega_space(LevelSpec(tuple(reversed(vals[1:]))), width)


def families(V: Iterable) -> list[tuple[Fraction, ...]]:
    """Subsets of V minus its maximum that contain 0, by size then lexicographic."""
    vals = _values(V)
    rest = vals[1:-1]
    out = []
    for size in range(len(rest) + 1):
        for combo in itertools.combinations(rest, size):
            out.append((Fraction(0),) + combo)
    return out


def prop2_space(V: Iterable, width: int, family_cap: int) -> FiniteUltraSpace:
    """Disjoint union of Urysohn truncations over value families, at top distance.

    Each family contributes ``width`` copies of its block so the top ball
    always branches, even when there is a single family.
    """
    vals = _values(V)
    if len(vals) < 2:
        raise ValueError("need at least two values")
    if family_cap < 1:
        raise ValueError("family_cap must be positive")
    r = vals[-1]
    blocks = []
    for fi, F in enumerate(families(vals)[:family_cap]):
        block = ultv_approx(F, width)
        for c in range(width):
            blocks.append((f"F{fi}#{c}", block))
    n = sum(b.n for _, b in blocks)
    dist = [[r] * n for _ in range(n)]
    labels = []
    off = 0
    for tag, b in blocks:
        for i in range(b.n):
            labels.append(f"{tag}:{b.labels[i]}")
            for j in range(b.n):
                dist[off + i][off + j] = b.dist[i][j]
        off += b.n
    return FiniteUltraSpace(tuple(map(tuple, dist)), tuple(labels))


def random_ultrametric(rng: random.Random, n: int, values: Sequence) -> FiniteUltraSpace:
    """Random ultrametric with distances drawn from ``values`` (all positive).

    Clusters merge pairwise at nondecreasing heights, as in single linkage.
    """
    vals = sorted({to_rational(v) for v in values})
    if n < 1:
        raise ValueError("n must be positive")
    if n > 1 and (not vals or vals[0] <= 0):
        raise ValueError("need positive distance values")
    clusters = [[i] for i in range(n)]
    dist = [[Fraction(0)] * n for _ in range(n)]
    h = 0
    for _ in range(n - 1):
        h = rng.randrange(h, len(vals))
        a, b = rng.sample(range(len(clusters)), 2)
        for x in clusters[a]:
            for y in clusters[b]:
                dist[x][y] = dist[y][x] = vals[h]
        clusters[a] += clusters[b]
        del clusters[b]
    return FiniteUltraSpace(tuple(map(tuple, dist)))


def random_metric(rng: random.Random, n: int, low: int = 1, high: int = 9) -> tuple:
    """Random finite metric: shortest paths over random rational edge weights."""
    w = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            w[i][j] = w[j][i] = Fraction(rng.randint(low, high), rng.choice((1, 2)))
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if w[i][k] + w[k][j] < w[i][j]:
                    w[i][j] = w[i][k] + w[k][j]
    return tuple(map(tuple, w))
