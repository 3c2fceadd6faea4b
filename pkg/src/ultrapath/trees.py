"""Valued trees and tree schemes, and their translation to spaces."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .rational import to_rational
from .spaces import Ball, FiniteUltraSpace


class TreeError(ValueError):
    pass


class _Unbounded:
    __slots__ = ()

    def __repr__(self) -> str:
        return "UNBOUNDED"

    def __reduce__(self):
        return "UNBOUNDED"


UNBOUNDED = _Unbounded()
Degree = Union[int, _Unbounded]


@dataclass(frozen=True)
class ValuedTree:
    """A finite ultrametric tree.

    Nodes are ``0..m-1``; ``parent[root] is None``. ``leaf_labels`` maps leaf
    nodes to point names. ``keys`` optionally records the ball each node
    came from.
    """

    parent: tuple[Optional[int], ...]
    value: tuple[Fraction, ...]
    leaf_labels: tuple[tuple[int, str], ...] = ()
    keys: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "value", tuple(to_rational(v) for v in self.value))
        validate_tree(self)

    @property
    def size(self) -> int:
        return len(self.parent)

    @property
    def root(self) -> int:
        return self.parent.index(None)

    def children(self, node: int) -> list[int]:
        return [c for c, p in enumerate(self.parent) if p == node]

    def leaves(self) -> list[int]:
        has_child = {p for p in self.parent if p is not None}
        return [v for v in range(self.size) if v not in has_child]

    def path_to_root(self, node: int) -> list[int]:
        out = [node]
        while self.parent[out[-1]] is not None:
            out.append(self.parent[out[-1]])
        return out

    def meet(self, a: int, b: int) -> int:
        up = set(self.path_to_root(a))
        for v in self.path_to_root(b):
            if v in up:
                return v
        raise TreeError("nodes share no ancestor")


def validate_tree(tree: ValuedTree) -> None:
    m = len(tree.parent)
    if m == 0:
        raise TreeError("empty tree")
    if len(tree.value) != m:
        raise TreeError("value list length differs from node count")
    roots = [v for v, p in enumerate(tree.parent) if p is None]
    if len(roots) != 1:
        raise TreeError(f"expected a single root, found {len(roots)}")
    for v, p in enumerate(tree.parent):
        if p is not None and not 0 <= p < m:
            raise TreeError(f"node {v} has parent {p} out of range")
    for v in range(m):
        seen, u = set(), v
        while u is not None:
            if u in seen:
                raise TreeError(f"cycle through node {v}")
            seen.add(u)
            u = tree.parent[u]
    counts = [0] * m
    for v, p in enumerate(tree.parent):
        if p is not None:
            counts[p] += 1
            if not tree.value[v] < tree.value[p]:
                raise TreeError(f"value does not decrease from node {p} to child {v}")
    for v in range(m):
        if counts[v] == 0 and tree.value[v] != 0:
            raise TreeError(f"leaf {v} has nonzero value {tree.value[v]}")
        if counts[v] == 1:
            raise TreeError(f"internal node {v} has a single child")
        if tree.value[v] < 0:
            raise TreeError(f"node {v} has a negative value")


def space_to_tree(space: FiniteUltraSpace) -> ValuedTree:
    """Nerve ordered by reverse inclusion, valued by diameter."""
    balls = space.nerve
    index = {b.points: i for i, b in enumerate(balls)}
    parent: list[Optional[int]] = []
    for b in balls:
        anc = space.ancestors(b)
        # anc is by decreasing diameter and ends with b itself
        parent.append(index[anc[-2].points] if len(anc) > 1 else None)
    leaf_labels = tuple((index[(i,)], space.labels[i]) for i in range(space.n))
    return ValuedTree(tuple(parent), tuple(b.diameter for b in balls), leaf_labels, tuple(balls))


def tree_to_space(tree: ValuedTree) -> FiniteUltraSpace:
    """Leaves become points, in node order; d(x, y) is the value at the meet."""
    leaves = tree.leaves()
    names = dict(tree.leaf_labels)
    dist = tuple(
        tuple(tree.value[tree.meet(a, b)] if a != b else Fraction(0) for b in leaves)
        for a in leaves
    )
    return FiniteUltraSpace(dist, tuple(names.get(v, str(k)) for k, v in enumerate(leaves)))


def to_dot(tree: ValuedTree) -> str:
    names = dict(tree.leaf_labels)
    lines = ["digraph ValuedTree {"]
    for v in range(tree.size):
        extra = f', xlabel="{names[v]}"' if v in names else ""
        lines.append(f'  n{v} [label="δ={tree.value[v]}"{extra}];')
    for v, p in enumerate(tree.parent):
        if p is not None:
            lines.append(f"  n{p} -> n{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class TreeScheme:
    """Finite description of a possibly countable ultrametric space.

    A descriptor is a ball type. An internal descriptor has ``degree`` sons
    (``UNBOUNDED`` stands for infinitely many); son ``j`` has the type
    ``children[j % len(children)]``. Leaves have diameter 0 and no degree.
    """

    diam: Fraction
    degree: Optional[Degree] = None
    children: tuple["TreeScheme", ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "diam", to_rational(self.diam))
        object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            if self.diam != 0:
                raise TreeError(f"leaf descriptor with diameter {self.diam}")
            if self.degree is not None:
                raise TreeError("leaf descriptor with a degree")
            return
        if self.diam <= 0:
            raise TreeError("internal descriptor needs a positive diameter")
        if self.degree is not UNBOUNDED:
            if not isinstance(self.degree, int) or isinstance(self.degree, bool):
                raise TreeError(f"bad degree {self.degree!r}")
            if self.degree < max(2, len(self.children)):
                raise TreeError(f"degree {self.degree} cannot hold {len(self.children)} child types")
        for c in self.children:
            if not c.diam < self.diam:
                raise TreeError("diameters must strictly decrease toward leaves")

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def son_types(self, width: int) -> list["TreeScheme"]:
        count = width if self.degree is UNBOUNDED else self.degree
        if count < len(self.children):
            raise TreeError(f"width {width} is below the {len(self.children)} child types")
        return [self.children[j % len(self.children)] for j in range(count)]

    def walk(self, path: tuple[int, ...] = ()):
        """Yield ``(child-index path, descriptor)`` in preorder."""
        yield path, self
        for i, c in enumerate(self.children):
            yield from c.walk(path + (i,))

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children), default=0)


def uniform_scheme(levels, degrees=None) -> TreeScheme:
    """One descriptor per level: the scheme of ω^[ā] at finite depth."""
    levels = [to_rational(v) for v in levels]
    degrees = list(degrees) if degrees is not None else [UNBOUNDED] * len(levels)
    node = TreeScheme(Fraction(0))
    for v, a in zip(reversed(levels), reversed(degrees)):
        node = TreeScheme(v, a, (node,))
    return node


def word_label(coords) -> str:
    return ".".join(str(c) for c in coords) if coords else "ε"


def scheme_materialize(scheme: TreeScheme, width: int) -> FiniteUltraSpace:
    """Expand a scheme, replacing every unbounded degree by ``width``.

    Points are son-index paths in lexicographic order, so widening only
    appends points and the smaller space sits inside by label.
    """
    if width < 2:
        raise ValueError("width must be at least 2")
    points: list[tuple[tuple[int, ...], list[Fraction]]] = []

    def expand(node: TreeScheme, path: tuple[int, ...], diams: list[Fraction]):
        if node.is_leaf:
            points.append((path, diams))
            return
        for j, t in enumerate(node.son_types(width)):
            expand(t, path + (j,), diams + [node.diam])

    expand(scheme, (), [])
    n = len(points)
    dist = [[Fraction(0)] * n for _ in range(n)]
    for a in range(n):
        pa, da = points[a]
        for b in range(a + 1, n):
            pb = points[b][0]
            k = 0
            while pa[k] == pb[k]:
                k += 1
            dist[a][b] = dist[b][a] = da[k]
    return FiniteUltraSpace(tuple(map(tuple, dist)), tuple(word_label(p) for p, _ in points))
