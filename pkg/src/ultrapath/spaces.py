"""Finite ultrametric spaces: validation, spectra, nerve and sons."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .rational import to_rational

Matrix = tuple[tuple[Fraction, ...], ...]


class SpaceError(ValueError):
    """A distance matrix failed validation.

    ``kind`` names the broken axiom, ``witness`` holds the offending indices.
    """

    def __init__(self, kind: str, witness: tuple[int, ...], message: str):
        super().__init__(message)
        self.kind = kind
        self.witness = witness


@dataclass(frozen=True)
class SpectrumSet:
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if list(self.values) != sorted(set(self.values)):
            raise ValueError("spectrum values must be sorted and distinct")
        if not self.values or self.values[0] != 0:
            raise ValueError("a spectrum contains 0")
        if self.values[0] < 0:
            raise ValueError("spectrum values are nonnegative")

    @classmethod
    def of(cls, values: Iterable) -> "SpectrumSet":
        return cls(tuple(sorted({to_rational(v) for v in values})))

    def __iter__(self):
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __contains__(self, value) -> bool:
        return value in self.values

    def __le__(self, other: "SpectrumSet") -> bool:
        return set(self.values) <= set(other.values)

    def __or__(self, other: "SpectrumSet") -> "SpectrumSet":
        return SpectrumSet.of(self.values + other.values)

    def __repr__(self) -> str:
        return "SpectrumSet({%s})" % ", ".join(str(v) for v in self.values)

    @property
    def max(self) -> Fraction:
        return self.values[-1]


@dataclass(frozen=True)
class Ball:
    """A closed ball of the nerve, identified by its point set."""

    points: tuple[int, ...]
    diameter: Fraction

    @cached_property
    def pointset(self) -> frozenset:
        return frozenset(self.points)

    def __hash__(self) -> int:
        return hash(self.points)

    @property
    def center(self) -> int:
        return self.points[0]

    def contains(self, other: "Ball") -> bool:
        return other.pointset <= self.pointset

    def __len__(self) -> int:
        return len(self.points)

    def __repr__(self) -> str:
        return "Ball(%s, δ=%s)" % (list(self.points), self.diameter)


def _minimax(dist: Matrix) -> list[list[Fraction]]:
    # Prim's tree, then bottleneck values along tree paths.
    n = len(dist)
    in_tree = [False] * n
    best = [None] * n
    parent = [-1] * n
    adj: list[list[tuple[int, Fraction]]] = [[] for _ in range(n)]
    best[0] = Fraction(0)
    for _ in range(n):
        u = -1
        for v in range(n):
            if not in_tree[v] and best[v] is not None and (u < 0 or best[v] < best[u]):
                u = v
        in_tree[u] = True
        if parent[u] >= 0:
            adj[u].append((parent[u], best[u]))
            adj[parent[u]].append((u, best[u]))
        for v in range(n):
            if not in_tree[v] and (best[v] is None or dist[u][v] < best[v]):
                best[v] = dist[u][v]
                parent[v] = u
    out = [[Fraction(0)] * n for _ in range(n)]
    for s in range(n):
        stack = [(s, -1, Fraction(0))]
        while stack:
            u, prev, m = stack.pop()
            out[s][u] = m
            for v, w in adj[u]:
                if v != prev:
                    stack.append((v, u, max(m, w)))
    return out


def _coerce_matrix(dist) -> Matrix:
    rows = [list(r) for r in dist]
    n = len(rows)
    if n == 0:
        raise SpaceError("empty", (), "a space has at least one point")
    for i, r in enumerate(rows):
        if len(r) != n:
            raise SpaceError("shape", (i,), f"row {i} has {len(r)} entries, expected {n}")
    return tuple(tuple(to_rational(x) for x in r) for r in rows)


def check_metric_axioms(dist: Matrix) -> None:
    """Diagonal, symmetry and positivity; raises SpaceError with a witness."""
    n = len(dist)
    for i in range(n):
        if dist[i][i] != 0:
            raise SpaceError("diagonal", (i,), f"d({i},{i}) = {dist[i][i]} is not 0")
    for i in range(n):
        for j in range(n):
            if dist[i][j] < 0:
                raise SpaceError("negative", (i, j), f"d({i},{j}) = {dist[i][j]} is negative")
            if dist[i][j] != dist[j][i]:
                raise SpaceError("asymmetry", (i, j), f"d({i},{j}) != d({j},{i})")
            if i != j and dist[i][j] == 0:
                raise SpaceError("zero", (i, j), f"distinct points {i},{j} at distance 0")


def _triple_witness(dist: Matrix, strong: bool) -> Optional[tuple[int, int, int]]:
    n = len(dist)
    for i in range(n):
        di = dist[i]
        for j in range(n):
            dij = di[j]
            dj = dist[j]
            for k in range(n):
                bound = max(dij, dj[k]) if strong else dij + dj[k]
                if di[k] > bound:
                    return (i, j, k)
    return None


def validate_metric(dist) -> Matrix:
    """Validate an ordinary finite metric (triangle inequality, not strong)."""
    m = _coerce_matrix(dist)
    check_metric_axioms(m)
    w = _triple_witness(m, strong=False)
    if w is not None:
        i, j, k = w
        raise SpaceError("triangle", w, f"d({i},{k}) > d({i},{j}) + d({j},{k})")
    return m


@dataclass(frozen=True)
class FiniteUltraSpace:
    """Points ``0..n-1`` with an exact rational ultrametric.

    Build through :func:`validate_ultrametric`; direct construction runs the
    same checks.
    """

    dist: Matrix
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        m = _coerce_matrix(self.dist)
        object.__setattr__(self, "dist", m)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(len(m))))
        else:
            object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
        if len(self.labels) != len(m):
            raise SpaceError("labels", (), "label count differs from point count")
        check_metric_axioms(m)
        mm = _minimax(m)
        if any(m[i][j] != mm[i][j] for i in range(len(m)) for j in range(len(m))):
            w = _triple_witness(m, strong=True)
            i, j, k = w
            raise SpaceError(
                "strong_triangle", w,
                f"d({i},{k}) = {m[i][k]} > max(d({i},{j}), d({j},{k})) = {max(m[i][j], m[j][k])}",
            )

    @property
    def n(self) -> int:
        return len(self.dist)

    def d(self, i: int, j: int) -> Fraction:
        return self.dist[i][j]

    def __len__(self) -> int:
        return len(self.dist)

    def __repr__(self) -> str:
        return f"FiniteUltraSpace(n={self.n}, labels={list(self.labels)})"

    # cached analyses; safe because instances are immutable

    @cached_property
    def point_spectra(self) -> tuple[SpectrumSet, ...]:
        return tuple(SpectrumSet.of(row) for row in self.dist)

    @cached_property
    def ranked(self) -> tuple[tuple[int, ...], ...]:
        """Distances replaced by their rank among the distinct values; same order."""
        rank = {v: i for i, v in enumerate(sorted({v for row in self.dist for v in row}))}
        return tuple(tuple(rank[v] for v in row) for row in self.dist)

    @cached_property
    def dominators(self) -> tuple[tuple[int, ...], ...]:
        """For each x, the points whose spectrum contains Spec(x)."""
        specs = [frozenset(s.values) for s in self.point_spectra]
        return tuple(tuple(y for y in range(self.n) if sx <= specs[y]) for sx in specs)

    @cached_property
    def nerve(self) -> tuple[Ball, ...]:
        seen = {}
        for a in range(self.n):
            for r in self.point_spectra[a]:
                b = closed_ball(self, a, r)
                seen.setdefault(b.points, b)
        return tuple(sorted(seen.values(), key=lambda b: (-b.diameter, b.points[0])))

    @cached_property
    def _nerve_by_points(self) -> dict:
        return {b.points: b for b in self.nerve}

    @cached_property
    def diameter(self) -> Fraction:
        return max(max(r) for r in self.dist)

    # host interface used by the path calculus

    def point_ball(self, x: int) -> Ball:
        return Ball((x,), Fraction(0))

    def is_nerve_ball(self, ball) -> bool:
        return isinstance(ball, Ball) and self._nerve_by_points.get(ball.points) == ball

    def ancestors(self, ball: Ball) -> list[Ball]:
        """Nerve balls containing ``ball``, by decreasing diameter."""
        a = ball.points[0]
        return [closed_ball(self, a, r) for r in reversed(self.point_spectra[a].values) if r >= ball.diameter]

    def join(self, b1: Ball, b2: Ball) -> Ball:
        """Least nerve ball containing both."""
        r = max(b1.diameter, b2.diameter, self.dist[b1.points[0]][b2.points[0]])
        return closed_ball(self, b1.points[0], r)


def validate_ultrametric(dist, labels: Optional[Sequence[str]] = None) -> FiniteUltraSpace:
    return FiniteUltraSpace(dist, tuple(labels) if labels else ())


def closed_ball(space: FiniteUltraSpace, a: int, r) -> Ball:
    row = space.dist[a]
    pts = tuple(i for i in range(space.n) if row[i] <= r)
    return Ball(pts, _diam(space, pts))


def open_ball(space: FiniteUltraSpace, a: int, r) -> Ball:
    row = space.dist[a]
    pts = tuple(i for i in range(space.n) if row[i] < r)
    return Ball(pts, _diam(space, pts))


def _diam(space: FiniteUltraSpace, pts: Sequence[int]) -> Fraction:
    # in an ultrametric ball the diameter is attained from any fixed point
    a = pts[0]
    return max(space.dist[a][p] for p in pts)


def least_ball(space: FiniteUltraSpace, points: Iterable[int]) -> Ball:
    pts = sorted(set(points))
    if not pts:
        raise ValueError("no points given")
    return closed_ball(space, pts[0], max(space.dist[pts[0]][p] for p in pts))


def _check_index(space: FiniteUltraSpace, a: int) -> None:
    if not 0 <= a < space.n:
        raise IndexError(f"point {a} out of range for a {space.n}-point space")


def spectrum(space: FiniteUltraSpace, at: Optional[int] = None) -> SpectrumSet:
    """Spec(M, a) when ``at`` is given, otherwise Spec(M)."""
    if at is not None:
        _check_index(space, at)
        return space.point_spectra[at]
    return SpectrumSet.of(v for s in space.point_spectra for v in s)


def multispectrum(space: FiniteUltraSpace) -> tuple[SpectrumSet, ...]:
    return space.point_spectra


def nerve(space: FiniteUltraSpace) -> list[Ball]:
    return list(space.nerve)


def sons(space: FiniteUltraSpace, ball: Ball) -> list[Ball]:
    """Open balls of radius δ(ball) partitioning ``ball``, by least point."""
    if not space.is_nerve_ball(ball):
        raise ValueError(f"{ball!r} is not a nerve ball")
    if ball.diameter == 0:
        raise ValueError("a trivial ball has no sons")
    out, left = [], list(ball.points)
    while left:
        s = open_ball(space, left[0], ball.diameter)
        out.append(s)
        left = [p for p in left if p not in s.pointset]
    return out


def subspace(space: FiniteUltraSpace, points: Sequence[int]) -> FiniteUltraSpace:
    pts = list(points)
    return FiniteUltraSpace(
        tuple(tuple(space.dist[i][j] for j in pts) for i in pts),
        tuple(space.labels[i] for i in pts),
    )


def is_laminar(balls: Sequence[Ball]) -> bool:
    for i, a in enumerate(balls):
        for b in balls[i + 1:]:
            if a.pointset & b.pointset and not (a.contains(b) or b.contains(a)):
                return False
    return True


def is_ramified_meet_tree(balls: Sequence[Ball]) -> bool:
    """Check that (balls, ⊇) is a ramified meet-tree with a single root.

    Ramified here means every non-leaf node has at least two children.
    """
    if not is_laminar(balls):
        return False
    roots = [b for b in balls if not any(c != b and c.contains(b) for c in balls)]
    if len(roots) != 1:
        return False
    for b in balls:
        inside = [c for c in balls if c != b and b.contains(c)]
        children = [c for c in inside if not any(e != c and e.contains(c) for e in inside)]
        if len(b) > 1 and len(children) < 2:
            return False
    return True
