"""Isometric embedding search, spec-embeddings and the extension criteria."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence

from .spaces import Ball, FiniteUltraSpace, closed_ball, sons, subspace
from .trees import UNBOUNDED, TreeScheme


class EmbeddingError(ValueError):
    pass


@dataclass(frozen=True)
class PartialMap:
    """Finite injective distance-preserving map between two spaces."""

    pairs: tuple[tuple[int, int], ...]
    source: FiniteUltraSpace = field(compare=False, repr=False)
    target: FiniteUltraSpace = field(compare=False, repr=False)

    def __post_init__(self):
        pairs = tuple(sorted((int(a), int(b)) for a, b in dict(self.pairs).items()))
        if len(pairs) != len(self.pairs):
            raise EmbeddingError("a source point is mapped twice")
        object.__setattr__(self, "pairs", pairs)
        images = [b for _, b in pairs]
        if len(set(images)) != len(images):
            raise EmbeddingError("map is not injective")
        for a, b in pairs:
            if not (0 <= a < self.source.n and 0 <= b < self.target.n):
                raise EmbeddingError(f"pair ({a}, {b}) out of range")
        for a, b in pairs:
            for c, e in pairs:
                if self.source.dist[a][c] != self.target.dist[b][e]:
                    raise EmbeddingError(f"distance between {a} and {c} is not preserved")

    @classmethod
    def of(cls, mapping: Mapping[int, int], source, target=None) -> "PartialMap":
        return cls(tuple(mapping.items()), source, source if target is None else target)

    @property
    def domain(self) -> tuple[int, ...]:
        return tuple(a for a, _ in self.pairs)

    @property
    def image(self) -> tuple[int, ...]:
        return tuple(b for _, b in self.pairs)

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)

    def __getitem__(self, a: int) -> int:
        return self.as_dict()[a]

    def __contains__(self, a: int) -> bool:
        return a in self.domain

    def __len__(self) -> int:
        return len(self.pairs)

    def extended(self, a: int, b: int) -> "PartialMap":
        return PartialMap(self.pairs + ((a, b),), self.source, self.target)


class SpecCheck(NamedTuple):
    holds: bool
    witness: Optional[tuple]


def find_isometric_embedding(
    source: FiniteUltraSpace,
    target: FiniteUltraSpace,
    fixed: Optional[Mapping[int, int]] = None,
    allowed: Optional[Iterable[int]] = None,
) -> Optional[PartialMap]:
    """Least-index backtracking search for a total isometric embedding.

    ``fixed`` pins some images in advance; ``allowed`` restricts the image.
    Returns ``None`` when no embedding exists.
    """
    pool = sorted(set(range(target.n) if allowed is None else allowed))
    if len(pool) < source.n:
        return None
    src_spec = source.point_spectra
    tgt_spec = target.point_spectra
    if not set(v for s in src_spec for v in s) <= set(v for s in tgt_spec for v in s):
        return None
    assign: dict[int, int] = {}
    used: set[int] = set()
    for a, b in (fixed or {}).items():
        if b not in pool or b in used:
            return None
        for c, e in assign.items():
            if source.dist[a][c] != target.dist[b][e]:
                return None
        assign[a] = b
        used.add(b)
    order = [x for x in range(source.n) if x not in assign]
    cands = {
        x: [y for y in pool if set(src_spec[x].values) <= set(tgt_spec[y].values)]
        for x in order
    }

    def search(k: int) -> bool:
        if k == len(order):
            return True
        x = order[k]
        drow = source.dist[x]
        for y in cands[x]:
            if y in used:
                continue
            trow = target.dist[y]
            if all(trow[e] == drow[c] for c, e in assign.items()):
                assign[x] = y
                used.add(y)
                if search(k + 1):
                    return True
                del assign[x]
                used.discard(y)
        return False

    if not search(0):
        return None
    return PartialMap(tuple(assign.items()), source, target)


def spec_dominators(space: FiniteUltraSpace, x: int) -> list[int]:
    """M(x): points whose spectrum contains the spectrum of ``x``."""
    return list(space.dominators[x])


def is_local_spec_embedding(f: PartialMap, source: FiniteUltraSpace, target: FiniteUltraSpace) -> SpecCheck:
    """Spec(source, x) ⊆ Spec(target, f(x)) on the domain; witness (x, missing distance)."""
    for a, b in f.pairs:
        missing = [v for v in source.point_spectra[a] if v not in target.point_spectra[b]]
        if missing:
            return SpecCheck(False, (a, missing[0]))
    return SpecCheck(True, None)


def _extend(assign: dict, x: int, space: FiniteUltraSpace, dom_cache: dict) -> Optional[int]:
    """Image for ``x`` under the one-point extension rule, or ``None``."""
    dom = dom_cache.get(x)
    if dom is None:
        dom = dom_cache[x] = spec_dominators(space, x)
    if not assign:
        return dom[0]
    d = space.ranked
    dx = d[x]
    r = min(dx[y] for y in assign)
    images0 = [assign[y] for y in sorted(assign) if dx[y] == r]
    fy0 = images0[0]
    for c in dom:
        if d[fy0][c] == r and all(d[fz][c] >= r for fz in images0):
            return c
    return None


def extend_one_point(f: PartialMap, x: int, space: FiniteUltraSpace) -> Optional[PartialMap]:
    """Extend a local spec-embedding of ``space`` to one more point.

    Candidates lie in M(x) at distance r = d(x, Dom f) from f(y0), outside
    the open r-balls around the images of the nearest domain points.
    Least-index candidate wins; ``None`` when there is none.
    """
    if x in f:
        raise EmbeddingError(f"point {x} is already in the domain")
    ok, witness = is_local_spec_embedding(f, space, space)
    if not ok:
        raise EmbeddingError(f"not a local spec-embedding, witness {witness}")
    c = _extend(f.as_dict(), x, space, {})
    return None if c is None else f.extended(x, c)


def extend_to_total(f: PartialMap, space: FiniteUltraSpace) -> tuple[Optional[PartialMap], Optional[int]]:
    """Apply :func:`extend_one_point` to the remaining points in index order.

    Returns ``(total map, None)`` or ``(None, first point that got stuck)``.
    """
    ok, witness = is_local_spec_embedding(f, space, space)
    if not ok:
        raise EmbeddingError(f"not a local spec-embedding, witness {witness}")
    assign = f.as_dict()
    cache: dict = {}
    for x in range(space.n):
        if x in assign:
            continue
        c = _extend(assign, x, space, cache)
        if c is None:
            return None, x
        assign[x] = c
    return PartialMap(tuple(assign.items()), space, space), None


def _relative_spectra(space: FiniteUltraSpace, ball: Ball) -> dict[int, frozenset]:
    return {a: frozenset(space.dist[a][b] for b in ball.points) for a in ball.points}


def _up_directed_witness(spectra: dict[int, frozenset]) -> Optional[tuple[int, int]]:
    keys = sorted(spectra)
    for i, a in enumerate(keys):
        for b in keys[i + 1:]:
            need = spectra[a] | spectra[b]
            if not any(need <= spectra[c] for c in keys):
                return (a, b)
    return None


def check_extension_properties(space: FiniteUltraSpace, son_threshold: Optional[int] = None) -> dict:
    """Finite-scale report on the extension criteria of a space.

    * ``spec_extension``: every spec-embedding defined on one point extends,
      point by point in index order, to a total embedding. Witness: the
      starting map and the point where the extension got stuck.
    * ``one_point_extension``: each such map extends to each single further
      point.
    * ``up_directed``: the multispectrum of every nerve ball (ball-relative
      spectra) is up-directed. Witness: ball and an unbounded pair.
    * ``son_embeddings``: per ball and son, the number of sons into which the
      son embeds; holds when every count reaches ``son_threshold`` (default:
      all sons of that ball).
    """
    n = space.n
    report: dict = {}

    witness = None
    one_point = None
    for y in range(n):
        for y2 in spec_dominators(space, y):
            f = PartialMap(((y, y2),), space, space)
            if one_point is None:
                for x in range(n):
                    if x != y and extend_one_point(f, x, space) is None:
                        one_point = {"map": {y: y2}, "target": x}
                        break
            if witness is None:
                _, stuck = extend_to_total(f, space)
                if stuck is not None:
                    witness = {"map": {y: y2}, "target": stuck}
    report["spec_extension"] = {"holds": witness is None, "witness": witness}
    report["one_point_extension"] = {"holds": one_point is None, "witness": one_point}

    updir = None
    for ball in space.nerve:
        pair = _up_directed_witness(_relative_spectra(space, ball))
        if pair is not None:
            updir = {"ball": ball, "pair": pair}
            break
    report["up_directed"] = {"holds": updir is None, "witness": updir}

    counts = []
    holds = True
    for ball in space.nerve:
        if ball.diameter == 0:
            continue
        ss = sons(space, ball)
        subs = [subspace(space, s.points) for s in ss]
        need = len(ss) if son_threshold is None else son_threshold
        for i, s in enumerate(ss):
            c = sum(1 for t in subs if find_isometric_embedding(subs[i], t) is not None)
            counts.append({"ball": ball, "son": s, "embeds_into": c, "sons": len(ss)})
            if c < need:
                holds = False
    report["son_embeddings"] = {"holds": holds, "counts": counts}
    return report


def check_prop4_i(space: FiniteUltraSpace) -> dict:
    """(a) each one-point spec-embedding extends to a total embedding (exact
    search); (b) every nerve ball has an up-directed multispectrum."""
    wa = None
    for y in range(space.n):
        for y2 in spec_dominators(space, y):
            if find_isometric_embedding(space, space, fixed={y: y2}) is None:
                wa = {"map": {y: y2}}
                break
        if wa:
            break
    wb = None
    for ball in space.nerve:
        pair = _up_directed_witness(_relative_spectra(space, ball))
        if pair is not None:
            wb = {"ball": ball, "pair": pair}
            break
    return {"a": {"holds": wa is None, "witness": wa}, "b": {"holds": wb is None, "witness": wb},
            "holds": wa is None and wb is None}


def check_prop4_ii(space: FiniteUltraSpace) -> dict:
    """(a) spectrum domination propagates into balls around the dominator;
    (b) every nerve ball embeds into its part dominating any of its points."""
    spec = [set(s.values) for s in space.point_spectra]
    n = space.n
    wa = None
    for y in range(n):
        for y2 in range(n):
            if not spec[y] <= spec[y2]:
                continue
            for x in range(n):
                ball = closed_ball(space, y2, space.dist[x][y])
                if not any(spec[x] <= spec[c] for c in ball.points):
                    wa = {"y": y, "y2": y2, "x": x}
                    break
            if wa:
                break
        if wa:
            break
    wb = None
    for ball in space.nerve:
        sub = subspace(space, ball.points)
        for a in ball.points:
            part = [i for i, p in enumerate(ball.points) if spec[a] <= spec[p]]
            if find_isometric_embedding(sub, sub, allowed=part) is None:
                wb = {"ball": ball, "point": a}
                break
        if wb:
            break
    return {"a": {"holds": wa is None, "witness": wa}, "b": {"holds": wb is None, "witness": wb},
            "holds": wa is None and wb is None}


def is_point_homogeneous(space: FiniteUltraSpace) -> bool:
    """Whether self-isometries act transitively (orbit of point 0)."""
    return all(find_isometric_embedding(space, space, fixed={0: t}) is not None for t in range(space.n))


# --- scheme-level criteria -------------------------------------------------

def _leaf_types(scheme: TreeScheme):
    """``(path, ancestors)`` per leaf descriptor; ancestors from the root down."""
    out = []

    def walk(node, path, anc):
        if node.is_leaf:
            out.append((path, anc))
            return
        for i, c in enumerate(node.children):
            walk(c, path + (i,), anc + [(path, node)])

    walk(scheme, (), [])
    return out


def _spec_of(anc) -> frozenset:
    return frozenset([Fraction(0)] + [node.diam for _, node in anc])


def _embeds_type(t: TreeScheme, u: TreeScheme, allowed=None, upath=()) -> bool:
    # multiplicity-insensitive: every son type is assumed to repeat without bound
    if t.is_leaf:
        return _has_allowed_leaf(u, allowed, upath)
    if t.diam > u.diam:
        return False
    if t.diam == u.diam:
        return all(
            any(_embeds_type(c, uc, allowed, upath + (j,)) for j, uc in enumerate(u.children))
            for c in t.children
        )
    return any(_embeds_type(t, uc, allowed, upath + (j,)) for j, uc in enumerate(u.children))


def _has_allowed_leaf(u: TreeScheme, allowed, upath) -> bool:
    if allowed is None:
        return True
    return any(upath + p in allowed for p, node in u.walk() if node.is_leaf)


def _at(scheme: TreeScheme, path: tuple[int, ...]) -> TreeScheme:
    node = scheme
    for i in path:
        node = node.children[i]
    return node


def _scheme_prop4_ii(scheme: TreeScheme, leaves) -> dict:
    spec = {p: _spec_of(anc) for p, anc in leaves}
    wa = None
    for py, ay in leaves:
        for py2, ay2 in leaves:
            if not spec[py] <= spec[py2]:
                continue
            by_diam = {node.diam: path for path, node in ay2}
            for apath, anode in ay:
                # x ranges over every leaf type under this ancestor
                bpath = by_diam[anode.diam]
                xs = [apath + p for p, nd in anode.walk() if nd.is_leaf]
                xps = [bpath + p for p, nd in _at(scheme, bpath).walk() if nd.is_leaf]
                for x in xs:
                    if not any(spec[x] <= spec[x2] for x2 in xps):
                        wa = {"y": py, "y2": py2, "x": x, "diam": anode.diam}
                        break
                if wa:
                    break
            if wa:
                break
        if wa:
            break
    wb = None
    for bpath, bnode in scheme.walk():
        if bnode.is_leaf:
            continue
        under = [bpath + p for p, nd in bnode.walk() if nd.is_leaf]
        for a in under:
            allowed = {p for p in under if spec[a] <= spec[p]}
            if not _embeds_type(bnode, bnode, allowed, bpath):
                wb = {"ball": bpath, "point": a}
                break
        if wb:
            break
    return {"a": {"holds": wa is None, "witness": wa}, "b": {"holds": wb is None, "witness": wb},
            "holds": wa is None and wb is None}


def check_theorem6(scheme: TreeScheme) -> dict:
    """Evaluate the four indivisibility conditions on a scheme-described space.

    Condition 1 is evaluated directly on descriptors: a spec-embedding
    ``y -> y'`` extends iff at every ancestor level of ``y`` each son type
    embeds into some son type of the matching ancestor of ``y'``. This
    treats every son type as repeated without bound, so it is exact only
    where condition 3 holds. The local conditions of :func:`check_prop4_ii`
    are evaluated on descriptors as well, with a consistency flag where
    conditions 3 and 4 hold.
    """
    leaves = _leaf_types(scheme)
    spec = {p: _spec_of(anc) for p, anc in leaves}

    w1 = None
    for py, ay in leaves:
        for py2, ay2 in leaves:
            if not spec[py] <= spec[py2]:
                continue
            by_diam = {node.diam: (path, node) for path, node in ay2}
            for apath, anode in ay:
                bpath, bnode = by_diam[anode.diam]
                for i, c in enumerate(anode.children):
                    if not any(_embeds_type(c, u) for u in bnode.children):
                        w1 = {"y": py, "y2": py2, "level": anode.diam, "son_type": apath + (i,)}
                        break
                if w1:
                    break
            if w1:
                break
        if w1:
            break

    w3 = None
    for path, node in scheme.walk():
        if not node.is_leaf and node.degree is not UNBOUNDED:
            w3 = {"descriptor": path, "degree": node.degree}
            break

    w4 = None
    for bpath, bnode in scheme.walk():
        if bnode.is_leaf:
            continue
        rel = {}
        for p, anc in leaves:
            if p[:len(bpath)] == bpath:
                rel[p] = frozenset([Fraction(0)] + [nd.diam for q, nd in anc if len(q) >= len(bpath)])
        keys = sorted(rel)
        for i, a in enumerate(keys):
            for b in keys[i + 1:]:
                if not any(rel[a] | rel[b] <= rel[c] for c in keys):
                    w4 = {"descriptor": bpath, "pair": (a, b)}
                    break
            if w4:
                break
        if w4:
            break

    p4 = _scheme_prop4_ii(scheme, leaves)
    conditions = {
        "1_singleton_spec_embeddings_extend": {"holds": w1 is None, "witness": w1},
        "2_nerve_well_founded": {"holds": True, "witness": None, "reason": "finite scheme depth"},
        "3_infinitely_many_sons": {"holds": w3 is None, "witness": w3},
        "4_multispectrum_up_directed": {"holds": w4 is None, "witness": w4},
    }
    verdict = all(c["holds"] for c in conditions.values())
    applicable = w3 is None and w4 is None
    return {
        "conditions": conditions,
        "prop4_ii": p4,
        "prop4_consistent": (p4["holds"] == (w1 is None)) if applicable else None,
        "verdict": verdict,
        "summary": "indivisible" if verdict else "not indivisible",
    }
