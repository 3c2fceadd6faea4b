"""JSON encodings. Rationals travel as strings such as "3/2"; "inf" is +∞."""
from __future__ import annotations

import json
from dataclasses import fields, is_dataclass
from fractions import Fraction
from typing import Any

from .embeddings import PartialMap
from .monoid import WeightedWord, WordBall, WordHost
from .paths import AlphaPath, BottomPath, PathBall, PathError
from .rational import INF, format_rational, to_ext_rational, to_rational
from .ramsey import Coloring
from .spaces import Ball, FiniteUltraSpace, SpaceError, SpectrumSet, least_ball
from .trees import UNBOUNDED, TreeScheme, ValuedTree, _Unbounded


class FormatError(ValueError):
    pass


def jsonable(obj: Any) -> Any:
    """Convert library values to plain JSON data, deterministically."""
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, Fraction) or obj is INF:
        return format_rational(obj)
    if isinstance(obj, _Unbounded):
        return "unbounded"
    if isinstance(obj, FiniteUltraSpace):
        return space_to_json(obj)
    if isinstance(obj, Ball):
        return {"points": list(obj.points), "diam": format_rational(obj.diameter)}
    if isinstance(obj, WordBall):
        return {"prefix": list(obj.prefix), "diam": format_rational(obj.diameter)}
    if isinstance(obj, (AlphaPath, BottomPath)):
        return path_to_json(obj)
    if isinstance(obj, PathBall):
        return {"top": path_to_json(obj.top), "radius": format_rational(obj.radius),
                "members": [path_to_json(p) for p in obj.members]}
    if isinstance(obj, SpectrumSet):
        return [format_rational(v) for v in obj]
    if isinstance(obj, WeightedWord):
        return list(obj.coords)
    if isinstance(obj, PartialMap):
        return {"pairs": [[a, b] for a, b in obj.pairs]}
    if isinstance(obj, Coloring):
        return {"parts": list(obj.parts), "k": obj.k}
    if isinstance(obj, TreeScheme):
        return scheme_to_json(obj)
    if isinstance(obj, ValuedTree):
        return tree_to_json(obj)
    if isinstance(obj, dict):
        return {_key(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted((jsonable(v) for v in obj), key=lambda v: json.dumps(v, sort_keys=True))
    if is_dataclass(obj):
        return {f.name: jsonable(getattr(obj, f.name)) for f in fields(obj)}
    raise TypeError(f"cannot encode {type(obj).__name__}")


def _key(k: Any) -> str:
    if isinstance(k, str):
        return k
    if isinstance(k, (int, Fraction)):
        return str(k)
    if isinstance(k, tuple):
        return ".".join(str(x) for x in k) if k else "ε"
    return json.dumps(jsonable(k), sort_keys=True, ensure_ascii=False)


def dumps(obj: Any) -> str:
    return json.dumps(jsonable(obj), indent=2, ensure_ascii=False) + "\n"


def space_to_json(space: FiniteUltraSpace) -> dict:
    return {"labels": list(space.labels), "dist": [[format_rational(v) for v in row] for row in space.dist]}


def space_from_json(data: Any) -> FiniteUltraSpace:
    """Accept ``{"dist": [[...]], "labels": [...]}`` or a bare matrix."""
    if isinstance(data, list):
        data = {"dist": data}
    if not isinstance(data, dict) or "dist" not in data:
        raise FormatError('a space needs a "dist" matrix')
    return FiniteUltraSpace(_matrix(data["dist"]), tuple(data.get("labels") or ()))


def _matrix(rows: Any) -> tuple:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise FormatError("distance matrix must be a list of rows")
    try:
        return tuple(tuple(to_rational(v) for v in r) for r in rows)
    except (TypeError, ValueError) as exc:
        raise FormatError(str(exc)) from None


def metric_from_json(data: Any) -> tuple[tuple, tuple]:
    if isinstance(data, list):
        data = {"dist": data}
    if not isinstance(data, dict) or "dist" not in data:
        raise FormatError('a metric needs a "dist" matrix')
    return _matrix(data["dist"]), tuple(data.get("labels") or ())


def tree_to_json(tree: ValuedTree) -> dict:
    return {
        "parent": list(tree.parent),
        "value": [format_rational(v) for v in tree.value],
        "leaf_labels": {str(k): v for k, v in tree.leaf_labels},
    }


def scheme_to_json(scheme: TreeScheme) -> dict:
    out: dict = {"diam": format_rational(scheme.diam)}
    if not scheme.is_leaf:
        out["degree"] = "unbounded" if scheme.degree is UNBOUNDED else scheme.degree
        out["children"] = [scheme_to_json(c) for c in scheme.children]
    return out


def scheme_from_json(data: Any) -> TreeScheme:
    if not isinstance(data, dict) or "diam" not in data:
        raise FormatError('a scheme node needs "diam"')
    children = tuple(scheme_from_json(c) for c in data.get("children", []))
    degree = data.get("degree")
    if children:
        if degree in (None, "unbounded", "inf"):
            degree = UNBOUNDED
        elif not isinstance(degree, int) or isinstance(degree, bool):
            raise FormatError(f"bad degree {degree!r}")
    return TreeScheme(to_rational(data["diam"]), degree if children else None, children)


def path_to_json(p) -> dict:
    if p.is_bottom:
        return {"alpha": format_rational(p.alpha), "bottom": True}
    return {"alpha": format_rational(p.alpha), "pure": [jsonable(b) for b in p.pure]}


def ball_from_json(data: Any, host) -> Any:
    if isinstance(host, WordHost):
        if not isinstance(data, dict) or "prefix" not in data:
            raise FormatError('a word ball needs "prefix"')
        b = host.ball(data["prefix"])
    else:
        if not isinstance(data, dict) or "points" not in data:
            raise FormatError('a ball needs "points"')
        pts = data["points"]
        space = getattr(host, "space", host)
        if not pts or any(not isinstance(x, int) or not 0 <= x < space.n for x in pts):
            raise FormatError(f"bad ball points {pts!r}")
        b = least_ball(space, pts)
        if set(b.points) != set(pts):
            raise FormatError(f"{sorted(pts)} is not a ball")
    if "diam" in data and to_rational(data["diam"]) != b.diameter:
        raise FormatError(f"stated diameter {data['diam']} differs from {b.diameter}")
    return b


def path_from_json(data: Any, host) -> Any:
    """Decode a path; generators are re-reduced so any slim set is accepted."""
    from .paths import path_from_slim

    if not isinstance(data, dict) or "alpha" not in data:
        raise FormatError('a path needs "alpha"')
    alpha = to_ext_rational(data["alpha"])
    if data.get("bottom"):
        return BottomPath(alpha, host)
    balls = [ball_from_json(b, host) for b in data.get("pure", [])]
    return path_from_slim(host, balls, alpha)
