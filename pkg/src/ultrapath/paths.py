"""α-paths over a nerve: canonical pure generators, infimum, distance, balls.

A *host* supplies the nerve. Any object with these members works:

``point_ball(x)``, ``ancestors(ball)`` (decreasing diameter, ending with
``ball``), ``join(b1, b2)`` (least common nerve ball), ``is_nerve_ball(b)``
and, for enumeration, a finite ``nerve`` tuple. Balls expose ``diameter``
and ``contains``. :class:`~ultrapath.spaces.FiniteUltraSpace` is a host, and
so is the symbolic word host of :mod:`ultrapath.monoid`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Optional, Sequence, Union

from .rational import INF, ExtRational, is_inf
from .spaces import FiniteUltraSpace, validate_ultrametric


class PathError(ValueError):
    pass


@dataclass(frozen=True)
class AlphaPath:
    """An α-path, stored as its pure generating sequence."""

    alpha: ExtRational
    pure: tuple
    host: Any = field(compare=False, repr=False, default=None)

    is_bottom = False

    @property
    def delta(self) -> Fraction:
        return self.pure[-1].diameter

    @property
    def mu(self) -> Fraction:
        return self.pure[0].diameter

    @property
    def init(self):
        return self.pure[0]

    @property
    def end(self):
        return self.pure[-1]

    def __len__(self) -> int:
        return len(self.pure)

    @property
    def spectrum(self) -> tuple[Fraction, ...]:
        return tuple(b.diameter for b in self.pure)

    @property
    def balls(self) -> frozenset:
        """The represented set of nerve balls."""
        return represented_set(self.host, self.pure, self.alpha)

    def __repr__(self) -> str:
        return f"AlphaPath(alpha={self.alpha}, pure={list(self.pure)})"


@dataclass(frozen=True)
class BottomPath:
    """⊥_α, the least element added below all α-paths."""

    alpha: ExtRational
    host: Any = field(compare=False, repr=False, default=None)

    is_bottom = True
    pure = ()

    @property
    def delta(self) -> ExtRational:
        return self.alpha

    @property
    def mu(self) -> ExtRational:
        return self.alpha

    def __len__(self) -> int:
        return 0


AnyPath = Union[AlphaPath, BottomPath]


@dataclass(frozen=True)
class SlimSet:
    """Balls with pairwise distinct diameters, kept by decreasing diameter."""

    balls: tuple

    def __post_init__(self):
        bs = tuple(sorted(dict.fromkeys(self.balls), key=lambda b: b.diameter, reverse=True))
        for a, b in zip(bs, bs[1:]):
            if a.diameter == b.diameter:
                raise PathError("generators are not slim: two balls share a diameter")
        object.__setattr__(self, "balls", bs)

    @property
    def spec(self) -> tuple[Fraction, ...]:
        return tuple(b.diameter for b in self.balls)

    @property
    def end(self):
        return self.balls[-1]

    def select(self, a):
        """The member whose diameter is the largest spectrum value ≤ a."""
        for b in self.balls:
            if b.diameter <= a:
                return b
        raise PathError(f"no member of diameter at most {a}")

    def __len__(self) -> int:
        return len(self.balls)

    def __iter__(self):
        return iter(self.balls)


def _check_alpha(alpha) -> None:
    if not is_inf(alpha) and not (isinstance(alpha, Fraction) or isinstance(alpha, int)):
        raise PathError(f"alpha must be a rational or INF, got {alpha!r}")
    if not is_inf(alpha) and alpha <= 0:
        raise PathError("alpha must be positive")


def represented_set(host, gens: Iterable, alpha: ExtRational) -> frozenset:
    """⋃_i ]_{β_{i-1}} ← B_i] for slim ``gens`` sorted by decreasing diameter."""
    out = set()
    prev = alpha
    for b in SlimSet(tuple(gens)):
        out.update(c for c in host.ancestors(b) if c.diameter < prev)
        prev = b.diameter
    return frozenset(out)


def path_from_slim(host, gens: Iterable, alpha: ExtRational = INF) -> AlphaPath:
    """Reduce a slim generating set to the canonical pure sequence."""
    _check_alpha(alpha)
    slim = SlimSet(tuple(gens))
    if not len(slim):
        raise PathError("empty generating set")
    for b in slim:
        if not host.is_nerve_ball(b):
            raise PathError(f"{b!r} is not a nerve ball")
    if not slim.balls[0].diameter < alpha:
        raise PathError(f"generator diameter {slim.balls[0].diameter} is not below alpha={alpha}")
    stack: list = []
    for b in slim:
        while stack and stack[-1].contains(b):
            stack.pop()
        stack.append(b)
    return AlphaPath(alpha, tuple(stack), host)


def generates(host, gens: Iterable, path: AlphaPath) -> bool:
    """Whether a slim set generates ``path``: equal represented sets."""
    gens = tuple(gens)
    if not gens or max(b.diameter for b in gens) >= path.alpha:
        return False
    return represented_set(host, gens, path.alpha) == path.balls


def phi(host, x, alpha: ExtRational = INF) -> AlphaPath:
    """φ_α(x): the path generated by the singleton ball of ``x``."""
    return path_from_slim(host, (host.point_ball(x),), alpha)


def _same_alpha(p: AnyPath, q: AnyPath) -> None:
    if p.alpha != q.alpha:
        raise PathError(f"alpha mismatch: {p.alpha} vs {q.alpha}")


def path_leq(p: AnyPath, q: AnyPath) -> bool:
    """p ≤_α q: q continues p below some level, p's last ball relaxed to ⊇."""
    _same_alpha(p, q)
    if p.is_bottom:
        return True
    if q.is_bottom:
        return False
    k = len(p)
    if k > len(q):
        return False
    return p.pure[:k - 1] == q.pure[:k - 1] and p.pure[k - 1].contains(q.pure[k - 1])


def path_infimum(p: AnyPath, q: AnyPath) -> AnyPath:
    """Greatest lower bound in L̄_α, by recursion on the initial balls."""
    _same_alpha(p, q)
    if path_leq(p, q):
        return p
    if path_leq(q, p):
        return q
    alpha, host = p.alpha, p.host
    b0, c0 = p.init, q.init
    if b0 == c0:
        # both have length >= 2 here, otherwise they would be comparable
        beta = b0.diameter
        rest = path_infimum(AlphaPath(beta, p.pure[1:], host), AlphaPath(beta, q.pure[1:], host))
        if rest.is_bottom:
            return AlphaPath(alpha, (b0,), host)
        return path_from_slim(host, (b0,) + rest.pure, alpha)
    b = host.join(b0, c0)
    if b.diameter < alpha:
        return AlphaPath(alpha, (b,), host)
    return BottomPath(alpha, host)


def path_distance(p: AnyPath, q: AnyPath) -> ExtRational:
    """d_α(p, q) = δ(p ∧_α q)."""
    return path_infimum(p, q).delta


def enumerate_paths(host, alpha: ExtRational = INF, beta=0) -> list[AlphaPath]:
    """All (α, β)-paths, ordered lexicographically by nerve position of the pure sequence."""
    _check_alpha(alpha)
    beta = Fraction(beta)
    if not beta < alpha:
        raise PathError("beta must be below alpha")
    nerve = [b for b in host.nerve if beta <= b.diameter < alpha]
    out: list[AlphaPath] = []

    def extend(seq: list) -> None:
        last = seq[-1]
        if last.diameter == beta:
            out.append(AlphaPath(alpha, tuple(seq), host))
            return
        for b in nerve:
            if b.diameter < last.diameter and not last.contains(b) and not b.contains(last):
                seq.append(b)
                extend(seq)
                seq.pop()

    for b in nerve:
        extend([b])
    return out


def path_space(host, alpha: ExtRational = INF, beta=0) -> tuple[list[AlphaPath], FiniteUltraSpace]:
    """Enumerated L_{α,β} with its distance matrix, validated as an ultrametric.

    d_α(p, p) = δ(p) = β, so the diagonal is reset to 0; all other entries
    are at least β and the strong triangle inequality is unaffected.
    """
    paths = enumerate_paths(host, alpha, beta)
    dist = [[Fraction(0) if p is q else path_distance(p, q) for q in paths] for p in paths]
    if any(is_inf(v) for row in dist for v in row):
        raise PathError("infinite distance between paths")
    return paths, validate_ultrametric(dist, [path_label(p) for p in paths])


def path_label(p: AnyPath) -> str:
    if p.is_bottom:
        return "⊥"
    return "<" + "|".join(_ball_label(b) for b in p.pure) + ">"


def _ball_label(b) -> str:
    if hasattr(b, "points"):
        return "{" + ",".join(str(x) for x in b.points) + "}"
    return str(b)


@dataclass(frozen=True)
class PathBall:
    """The nerve ball I ∗ L_{r,0} of the path extension."""

    top: AlphaPath
    radius: Fraction
    members: tuple

    def __contains__(self, p) -> bool:
        return p in self.members

    def __len__(self) -> int:
        return len(self.members)


def truncate(p: AlphaPath, r) -> AlphaPath:
    """p ∖ Nerv_{<r} as an (α, r)-path; r must be the diameter of a ball of p."""
    r = Fraction(r)
    host = p.host
    for k, b in enumerate(p.pure):
        if b.diameter <= r:
            tops = [c for c in host.ancestors(b) if c.diameter == r]
            upper = p.pure[k - 1].diameter if k else p.alpha
            if tops and r < upper:
                return AlphaPath(p.alpha, p.pure[:k] + (tops[0],), host)
            break
    raise PathError(f"{r} is not the diameter of a ball of the path")


def path_ball(p: AlphaPath, r) -> PathBall:
    """The diameter-r nerve ball of the path extension containing ``p``."""
    r = Fraction(r)
    if r <= 0:
        raise PathError("radius must be positive")
    top = truncate(p, r)
    members = tuple(
        path_from_slim(p.host, top.pure + j.pure, p.alpha) for j in enumerate_paths(p.host, r, 0)
    )
    return PathBall(top, r, members)


def path_ball_isometry(b1: PathBall, b2: PathBall) -> dict:
    """J ↦ I′ ∪ (J ∖ I) between two path balls of equal diameter."""
    if b1.radius != b2.radius:
        raise PathError(f"diameter mismatch: {b1.radius} vs {b2.radius}")
    r = b1.radius
    top = b2.top
    out = {}
    for j in b1.members:
        below = tuple(b for b in j.pure if b.diameter < r)
        out[j] = path_from_slim(top.host, top.pure + below, top.alpha)
    return out
