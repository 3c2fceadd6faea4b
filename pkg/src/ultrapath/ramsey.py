"""Subdominant ultrametric, finite divisibility search and chain conditions."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Optional, Union

from .embeddings import find_isometric_embedding
from .spaces import FiniteUltraSpace, _minimax, subspace, validate_metric
from .trees import TreeScheme

DEFAULT_GUARD = 2 ** 20


class GuardExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Coloring:
    """A partition of the points into ``k`` numbered parts."""

    parts: tuple[int, ...]
    k: int

    def __post_init__(self):
        if any(not 0 <= c < self.k for c in self.parts):
            raise ValueError("color out of range")

    def part(self, color: int) -> list[int]:
        return [i for i, c in enumerate(self.parts) if c == color]


def subdominant_dstar(dist, labels=None) -> FiniteUltraSpace:
    """d*(x, y): least possible largest step over chains from x to y.

    Computed as the bottleneck distance in a minimum spanning tree.
    """
    m = validate_metric(dist)
    return FiniteUltraSpace(tuple(tuple(r) for r in _minimax(m)), tuple(labels) if labels else ())


def _contains_copy(space: FiniteUltraSpace, pattern: FiniteUltraSpace, part: list[int]) -> bool:
    if len(part) < pattern.n:
        return False
    return find_isometric_embedding(pattern, space, allowed=part) is not None


def _bad_coloring(space, pattern, parts, k) -> bool:
    return not any(_contains_copy(space, pattern, [i for i, c in enumerate(parts) if c == col]) for col in range(k))


def check_divisible(
    space: FiniteUltraSpace,
    pattern: FiniteUltraSpace,
    k: int = 2,
    guard: int = DEFAULT_GUARD,
    heuristic: bool = False,
    samples: int = 2000,
    seed: int = 0,
) -> dict:
    """Search for a k-coloring none of whose parts contains a copy of ``pattern``.

    Exhaustive mode fixes point 0 to color 0 and runs through the other
    points' colors in lexicographic order; the first such coloring is the
    witness. Beyond ``guard`` colorings, ``heuristic=True`` samples colorings
    with a seeded generator instead and the verdict is marked inconclusive
    when nothing is found.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    n = space.n
    total = k ** max(n - 1, 0)
    if k ** n <= guard:
        for rest in itertools.product(range(k), repeat=max(n - 1, 0)):
            parts = (0,) + rest if n else ()
            if _bad_coloring(space, pattern, parts, k):
                return {"verdict": "divisible", "mode": "exhaustive", "witness": Coloring(parts, k),
                        "colorings_checked": None}
        return {"verdict": "indivisible", "mode": "exhaustive", "witness": None, "colorings_checked": total}
    if not heuristic:
        raise GuardExceeded(f"{k}^{n} colorings exceed the guard {guard}; pass heuristic=True to sample")
    rng = random.Random(seed)
    for _ in range(samples):
        parts = (0,) + tuple(rng.randrange(k) for _ in range(n - 1))
        if _bad_coloring(space, pattern, parts, k):
            return {"verdict": "divisible", "mode": "heuristic", "witness": Coloring(parts, k),
                    "colorings_checked": None}
    return {"verdict": "inconclusive", "mode": "heuristic", "witness": None, "colorings_checked": samples}


def _max_ball_chain(space: FiniteUltraSpace) -> int:
    # balls containing a point form a chain; the longest one runs from a singleton
    return max(len(space.point_spectra[a]) for a in range(space.n))


def check_theorem4(obj: Union[FiniteUltraSpace, TreeScheme]) -> dict:
    """Necessary conditions for indivisibility: the ball order admits no
    infinite strictly increasing chain and the diameter is attained."""
    if isinstance(obj, TreeScheme):
        depth = obj.depth()
        return {
            "kind": "scheme",
            "diameter": obj.diam,
            "diameter_attained": True,
            "well_founded": True,
            "increasing_ball_chain_bounded": True,
            "max_ball_chain": depth,
            "reason": "finite scheme: ball chains are bounded by its depth and the root realizes the diameter",
            "verdict": True,
        }
    return {
        "kind": "space",
        "diameter": obj.diameter,
        "diameter_attained": True,
        "well_founded": True,
        "increasing_ball_chain_bounded": True,
        "max_ball_chain": _max_ball_chain(obj),
        "reason": "finite space",
        "verdict": True,
    }
