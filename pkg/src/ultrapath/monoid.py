"""Compatible operations: the word monoid, ball sums and the sum of paths."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

from .generators import LevelSpec, omega_space
from .paths import AlphaPath, PathError, SlimSet, path_from_slim
from .rational import to_rational
from .spaces import Ball, FiniteUltraSpace, closed_ball, least_ball, open_ball


class MonoidError(ValueError):
    pass


def _levels(levels) -> tuple[Fraction, ...]:
    return LevelSpec(tuple(levels)).levels if len(tuple(levels)) else ()


@dataclass(frozen=True)
class WeightedWord:
    """An element of the word monoid: one natural coordinate per level."""

    levels: tuple[Fraction, ...]
    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "levels", _levels(self.levels))
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))
        if len(self.coords) != len(self.levels):
            raise MonoidError("one coordinate per level")
        if any(c < 0 for c in self.coords):
            raise MonoidError("coordinates must be natural numbers")

    @classmethod
    def zero(cls, levels) -> "WeightedWord":
        lv = _levels(levels)
        return cls(lv, (0,) * len(lv))

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.coords) if c)


def add_words(f: WeightedWord, g: WeightedWord) -> WeightedWord:
    if f.levels != g.levels:
        raise MonoidError("words over different level chains")
    return WeightedWord(f.levels, tuple(a + b for a, b in zip(f.coords, g.coords)))


def _word_dist(levels: Sequence[Fraction], a: Sequence[int], b: Sequence[int]) -> Fraction:
    for i, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return levels[i]
    return Fraction(0)


def word_distance(f: WeightedWord, g: WeightedWord) -> Fraction:
    """d_w: the level value at the first coordinate where the words differ."""
    if f.levels != g.levels:
        raise MonoidError("words over different level chains")
    return _word_dist(f.levels, f.coords, g.coords)


# --- hosts ---------------------------------------------------------------

@dataclass(frozen=True)
class WordBall:
    """Ball of the word monoid: all words extending ``prefix``."""

    prefix: tuple[int, ...]
    diameter: Fraction

    def __hash__(self) -> int:
        return hash(self.prefix)

    def contains(self, other: "WordBall") -> bool:
        return other.prefix[:len(self.prefix)] == self.prefix

    def __repr__(self) -> str:
        return "WordBall(%s, δ=%s)" % (list(self.prefix), self.diameter)


@dataclass(frozen=True)
class WordHost:
    """The whole word monoid as a path host, with balls kept symbolic.

    Sums are exact and never leave the carrier. ``window`` only bounds the
    finite nerve used for enumeration (coordinates below ``window``).
    """

    levels: tuple[Fraction, ...]
    window: Optional[int] = None
    _balls: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "levels", _levels(self.levels))
        if self.window is not None and self.window < 1:
            raise MonoidError("window must be positive")
        object.__setattr__(self, "_diams", self.levels + (Fraction(0),))

    @property
    def depth(self) -> int:
        return len(self.levels)

    def ball(self, prefix: Sequence[int]) -> WordBall:
        if isinstance(prefix, tuple):
            b = self._balls.get(prefix)
            if b is not None:
                return b
        key = prefix
        prefix = tuple(int(c) for c in prefix)
        if len(prefix) > self.depth or any(c < 0 for c in prefix):
            raise MonoidError(f"bad prefix {prefix}")
        b = WordBall(prefix, self._diams[len(prefix)])
        if isinstance(key, tuple):
            self._balls[key] = b
        return b

    def _coords(self, x) -> tuple[int, ...]:
        if isinstance(x, WeightedWord):
            if x.levels != self.levels:
                raise MonoidError("word over another level chain")
            return x.coords
        coords = tuple(int(c) for c in x)
        if len(coords) != self.depth:
            raise MonoidError("one coordinate per level")
        return coords

    def point_ball(self, x) -> WordBall:
        return self.ball(self._coords(x))

    def is_nerve_ball(self, b) -> bool:
        return (isinstance(b, WordBall) and self._balls.get(b.prefix) is b) or self._fresh_ball_ok(b)

    def _fresh_ball_ok(self, b) -> bool:
        return (isinstance(b, WordBall) and len(b.prefix) <= self.depth
                and b.diameter == self._diams[len(b.prefix)] and all(c >= 0 for c in b.prefix))

    def ancestors(self, b: WordBall) -> list[WordBall]:
        return [self.ball(b.prefix[:k]) for k in range(len(b.prefix) + 1)]

    def join(self, b1: WordBall, b2: WordBall) -> WordBall:
        k = 0
        for x, y in zip(b1.prefix, b2.prefix):
            if x != y:
                break
            k += 1
        return self.ball(b1.prefix[:k])

    @cached_property
    def nerve(self) -> tuple[WordBall, ...]:
        if self.window is None:
            raise MonoidError("the nerve of the full word monoid is infinite; set a window")
        out = []
        for k in range(self.depth + 1):
            out.extend(self.ball(p) for p in itertools.product(range(self.window), repeat=k))
        return tuple(out)

    @property
    def zero(self) -> tuple[int, ...]:
        return (0,) * self.depth

    def add_points(self, x, y) -> tuple[int, ...]:
        return tuple(a + b for a, b in zip(self._coords(x), self._coords(y)))

    def distance(self, x, y) -> Fraction:
        return _word_dist(self.levels, self._coords(x), self._coords(y))

    def add_balls(self, b1: WordBall, b2: WordBall) -> WordBall:
        k = min(len(b1.prefix), len(b2.prefix))
        return self.ball(tuple(a + b for a, b in zip(b1.prefix[:k], b2.prefix[:k])))

    def points(self) -> list[tuple[int, ...]]:
        if self.window is None:
            raise MonoidError("set a window to list points")
        return list(itertools.product(range(self.window), repeat=self.depth))


@dataclass(frozen=True, eq=False)
class PointOp:
    """A binary operation on the points of a finite space, possibly partial.

    ``table`` maps ``(i, j)`` to the index of ``i + j``; missing pairs are
    undefined (the sum leaves the carrier). The object is also a path host.
    """

    space: FiniteUltraSpace
    table: Mapping[tuple[int, int], int] = field(repr=False)
    zero: Optional[int] = None

    def add(self, i: int, j: int) -> Optional[int]:
        return self.table.get((i, j))

    @property
    def is_total(self) -> bool:
        return len(self.table) == self.space.n ** 2

    @cached_property
    def compatibility_witness(self) -> Optional[tuple[int, int, int]]:
        """First (x, y, z) where a translation by z changes d(x, y), if any."""
        d, n, t = self.space.dist, self.space.n, self.table
        for z in range(n):
            for x in range(n):
                for y in range(x + 1, n):
                    for a, b in (((z, x), (z, y)), ((x, z), (y, z))):
                        if a in t and b in t and d[t[a]][t[b]] != d[x][y]:
                            return (x, y, z)
        return None

    def require_compatible(self) -> None:
        w = self.compatibility_witness
        if w is not None:
            x, y, z = w
            raise MonoidError(f"operation is not compatible: translating {x}, {y} by {z} changes their distance")

    # host interface, delegated to the space
    def point_ball(self, x: int) -> Ball:
        return self.space.point_ball(x)

    def is_nerve_ball(self, b) -> bool:
        return self.space.is_nerve_ball(b)

    def ancestors(self, b: Ball) -> list[Ball]:
        return self.space.ancestors(b)

    def join(self, b1: Ball, b2: Ball) -> Ball:
        return self.space.join(b1, b2)

    @property
    def nerve(self) -> tuple[Ball, ...]:
        return self.space.nerve

    def add_points(self, x: int, y: int) -> int:
        s = self.add(x, y)
        if s is None:
            raise MonoidError(f"{x} + {y} is undefined")
        return s

    def distance(self, x: int, y: int) -> Fraction:
        return self.space.dist[x][y]

    def add_balls(self, b1: Ball, b2: Ball) -> Ball:
        self.require_compatible()
        sums = set()
        for x in b1.points:
            for y in b2.points:
                s = self.add(x, y)
                if s is None:
                    raise MonoidError(f"{x} + {y} leaves the carrier")
                sums.add(s)
        return least_ball(self.space, sums)

    def points(self) -> list[int]:
        return list(range(self.space.n))


def _word_op(levels, width: int, wrap: bool) -> PointOp:
    spec = LevelSpec(tuple(levels))
    space = omega_space(spec, width)
    words = list(itertools.product(*(range(r) for r in spec.ranges(width))))
    index = {w: i for i, w in enumerate(words)}
    table = {}
    for i, u in enumerate(words):
        for j, v in enumerate(words):
            s = tuple((a + b) % width if wrap else a + b for a, b in zip(u, v))
            if s in index:
                table[(i, j)] = index[s]
    return PointOp(space, table, index[(0,) * len(spec.levels)])


def cyclic_op(levels, width: int) -> PointOp:
    """Coordinatewise addition mod ``width`` on a word truncation: a total,
    associative, commutative and compatible operation."""
    return _word_op(levels, width, wrap=True)


def window_op(levels, width: int) -> PointOp:
    """Plain word addition on a truncation, undefined when a sum leaves it."""
    return _word_op(levels, width, wrap=False)


def ball_sum(b1, b2, host):
    """Least nerve ball containing every sum of a point of b1 and a point of b2."""
    for b in (b1, b2):
        if not host.is_nerve_ball(b):
            raise MonoidError(f"{b!r} is not a nerve ball")
    return host.add_balls(b1, b2)


BOTTOM_BALL = None


def ball_meet(b1, b2, host, alpha):
    """Least common nerve ball when its diameter is below alpha, else ⊥ (None)."""
    if b1 is BOTTOM_BALL or b2 is BOTTOM_BALL:
        return BOTTOM_BALL
    j = host.join(b1, b2)
    return j if j.diameter < alpha else BOTTOM_BALL


def ball_sum_or_bottom(b1, b2, host):
    if b1 is BOTTOM_BALL or b2 is BOTTOM_BALL:
        return BOTTOM_BALL
    return ball_sum(b1, b2, host)


def merged_slim(gens_p: Sequence, gens_q: Sequence, host) -> SlimSet:
    """The a-indexed merge: one ball sum per value of the joint spectrum."""
    sp, sq = SlimSet(tuple(gens_p)), SlimSet(tuple(gens_q))
    values = sorted(set(sp.spec) | set(sq.spec), reverse=True)
    return SlimSet(tuple(ball_sum(sp.select(a), sq.select(a), host) for a in values))


def path_sum(p: AlphaPath, q: AlphaPath, gens_p: Optional[Sequence] = None,
             gens_q: Optional[Sequence] = None) -> AlphaPath:
    """p +_α q, computed from slim generators (the pure ones by default)."""
    if p.is_bottom or q.is_bottom:
        raise MonoidError("the sum is defined on paths, not on ⊥")
    if p.alpha != q.alpha:
        raise MonoidError(f"alpha mismatch: {p.alpha} vs {q.alpha}")
    if p.host is not q.host and p.host != q.host:
        raise MonoidError("paths over different hosts")
    if p.delta != q.delta:
        raise MonoidError(f"paths end at different levels: {p.delta} vs {q.delta}")
    host = p.host
    slim = merged_slim(gens_p or p.pure, gens_q or q.pure, host)
    return path_from_slim(host, slim.balls, p.alpha)


def embed_into_omega(space: FiniteUltraSpace) -> tuple[tuple[Fraction, ...], dict[int, WeightedWord]]:
    """Isometric embedding into the word monoid over Spec ∖ {0}, decreasing.

    The coordinate at level r is the position of the point's open r-ball among
    the open r-balls of its closed r-ball, ordered by least member.
    """
    levels = tuple(v for v in reversed(sorted({v for row in space.dist for v in row})) if v > 0)
    out = {}
    for x in range(space.n):
        coords = []
        for r in levels:
            big = closed_ball(space, x, r)
            classes, left = [], list(big.points)
            while left:
                s = open_ball(space, left[0], r).pointset
                classes.append(s)
                left = [p for p in left if p not in s]
            coords.append(next(i for i, c in enumerate(classes) if x in c))
        out[x] = WeightedWord(levels, tuple(coords))
    return levels, out


def star_closure(X: Iterable[WeightedWord], k: int, levels=None) -> set[WeightedWord]:
    """Sums of at most ``k`` members of X (with repetition), zero included."""
    X = sorted(set(X), key=lambda w: w.coords)
    if levels is None:
        if not X:
            raise MonoidError("levels are needed when X is empty")
        levels = X[0].levels
    out = {WeightedWord.zero(levels)}
    frontier = set(out)
    for _ in range(k):
        frontier = {add_words(f, x) for f in frontier for x in X}
        out |= frontier
    return out


def _lcp(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    k = 0
    for x, y in zip(a, b):
        if x != y:
            break
        k += 1
    return tuple(a[:k])


def meet_tree(X: Iterable[WeightedWord]) -> set[tuple[int, ...]]:
    """{e ∧ e′}: longest common prefixes of all pairs (e ∧ e = e)."""
    xs = [w.coords for w in X]
    return {_lcp(a, b) for a in xs for b in xs}


def max_chain_length(T: Iterable[tuple[int, ...]]) -> int:
    """Longest strictly increasing chain of prefixes in T."""
    nodes = sorted(set(T), key=len)
    best: dict[tuple[int, ...], int] = {}
    for t in nodes:
        best[t] = 1 + max((best[s] for s in best if len(s) < len(t) and t[:len(s)] == s), default=0)
    return max(best.values(), default=0)


def translation_report(op: PointOp) -> dict:
    """Translations x ↦ a + x at finite scale.

    For every a: whether the translation is isometric on the points it is
    defined for, and whether Spec(a) ⊆ Spec(a + b) wherever a + b exists.
    Undefined sums are counted, not guessed.
    """
    sp = op.space
    spec = [set(s.values) for s in sp.point_spectra]
    skipped = 0
    witness = None
    for a in range(sp.n):
        image = {}
        for x in range(sp.n):
            s = op.add(a, x)
            if s is None:
                skipped += 1
                continue
            image[x] = s
            if witness is None and not spec[a] <= spec[s]:
                witness = {"a": a, "b": x, "kind": "spectrum"}
        if witness is None:
            for x, y in itertools.combinations(image, 2):
                if sp.dist[image[x]][image[y]] != sp.dist[x][y]:
                    witness = {"a": a, "pair": (x, y), "kind": "distance"}
                    break
    return {"holds": witness is None, "witness": witness, "undefined_sums": skipped}
