"""Seeded invariant suites producing JSON-ready reports.

Sampling depends only on the seed, so equal seeds give identical reports.
"""
from __future__ import annotations

import functools
import itertools
import random
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .embeddings import check_prop4_ii
from .generators import random_metric, random_ultrametric
from .monoid import (
    BOTTOM_BALL,
    WordHost,
    ball_meet,
    ball_sum_or_bottom,
    merged_slim,
    path_sum as _path_sum,
    translation_report,
    window_op,
)
from .paths import enumerate_paths, path_ball, path_ball_isometry, path_distance, path_space, phi
from .rational import INF
from .ramsey import subdominant_dstar
from .spaces import sons
from .trees import space_to_tree, tree_to_space


class Check:
    """Counts cases and keeps the first failure."""

    def __init__(self):
        self.checked = 0
        self.witness = None

    def __call__(self, ok: bool, witness: Callable[[], object]) -> None:
        self.checked += 1
        if not ok and self.witness is None:
            self.witness = witness()

    def report(self) -> dict:
        return {"holds": self.witness is None, "checked": self.checked, "witness": self.witness}


def _choose(items: Sequence, k: int, samples: Optional[int], rng: random.Random) -> Iterable[tuple]:
    if samples is None or len(items) ** k <= samples:
        return itertools.product(items, repeat=k)
    return [tuple(rng.choice(items) for _ in range(k)) for _ in range(samples)]


def monoid_suite(levels, width: int, seed: int = 0, samples: Optional[int] = 2000) -> dict:
    """Monoid laws on the paths of a word-monoid window.

    Operands range over the window; sums are exact in the full monoid.
    ``samples=None`` runs every tuple.
    """
    rng = random.Random(seed)
    host = WordHost(tuple(levels), width)
    path_sum = functools.lru_cache(maxsize=None)(_path_sum)
    paths = enumerate_paths(host)
    words = host.points()
    zero = phi(host, host.zero)
    by_delta: dict = {}
    for p in paths:
        by_delta.setdefault(p.delta, []).append(p)

    checks = {name: Check() for name in (
        "associative", "commutative", "neutral", "phi_additive", "translation_isometric",
        "generator_independent", "point_sum_contraction", "ball_distributive", "ball_sum_diameter",
        "ball_sum_monotone", "merged_spectrum",
    )}
    for p, q, r in _choose(paths, 3, samples, rng):
        left, right = path_sum(path_sum(p, q), r), path_sum(p, path_sum(q, r))
        checks["associative"](left == right, lambda: [p, q, r])
    for p, q in _choose(paths, 2, samples, rng):
        pq = path_sum(p, q)
        checks["commutative"](pq == path_sum(q, p), lambda: [p, q])
        checks["generator_independent"](
            pq == _path_sum(p, q, sorted(p.balls, key=lambda b: -b.diameter), sorted(q.balls, key=lambda b: -b.diameter)),
            lambda: [p, q],
        )
        sp = merged_slim(p.pure, q.pure, host)
        checks["merged_spectrum"](set(sp.spec) == set(p.spectrum) | set(q.spectrum), lambda: [p, q])
    for (p,) in _choose(paths, 1, samples, rng):
        checks["neutral"](path_sum(p, zero) == p and path_sum(zero, p) == p, lambda: [p])
    for x, y in _choose(words, 2, samples, rng):
        checks["phi_additive"](phi(host, host.add_points(x, y)) == path_sum(phi(host, x), phi(host, y)),
                               lambda: [list(x), list(y)])
    for p, q, r in _choose(paths, 3, samples, rng):
        if p.delta != q.delta or q.delta != r.delta:
            continue
        d = path_distance(p, q)
        ok = path_distance(path_sum(r, p), path_sum(r, q)) == d == path_distance(path_sum(p, r), path_sum(q, r))
        checks["translation_isometric"](ok, lambda: [p, q, r])
    for x, x2, y, y2 in _choose(words, 4, samples, rng):
        lhs = host.distance(host.add_points(x, x2), host.add_points(y, y2))
        checks["point_sum_contraction"](lhs <= max(host.distance(x, y), host.distance(x2, y2)),
                                        lambda: [list(x), list(x2), list(y), list(y2)])
    nerve = list(host.nerve)
    for alpha in (INF, host.levels[0]):
        below = [b for b in nerve if b.diameter < alpha]
        for c, b, b2 in _choose(below, 3, samples, rng):
            m = ball_meet(b, b2, host, alpha)
            ok = (ball_sum_or_bottom(c, m, host) == ball_meet(ball_sum_or_bottom(c, b, host), ball_sum_or_bottom(c, b2, host), host, alpha)
                  and ball_sum_or_bottom(m, c, host) == ball_meet(ball_sum_or_bottom(b, c, host), ball_sum_or_bottom(b2, c, host), host, alpha))
            checks["ball_distributive"](ok, lambda: [c, b, b2, alpha])
    for b, b2 in _choose(nerve, 2, samples, rng):
        s = ball_sum_or_bottom(b, b2, host)
        checks["ball_sum_diameter"](s.diameter == max(b.diameter, b2.diameter), lambda: [b, b2])
    for b, b2 in _choose(nerve, 2, samples, rng):
        for c in host.ancestors(b):
            for c2 in host.ancestors(b2):
                checks["ball_sum_monotone"](host.add_balls(c, c2).contains(host.add_balls(b, b2)), lambda: [b, b2, c, c2])

    report = {"levels": list(host.levels), "width": width, "seed": seed, "samples": samples,
              "paths": len(paths)}
    report["checks"] = {k: v.report() for k, v in checks.items()}
    report["translations"] = translation_report(window_op(tuple(levels), width))
    report["path_extension"] = path_extension_certificate(host)
    report["holds"] = all(v["holds"] for v in report["checks"].values()) and report["translations"]["holds"] \
        and report["path_extension"]["holds"]
    return report


def path_extension_certificate(host) -> dict:
    """Finite certificate on the enumerated path extension of a host.

    Same-diameter balls are mapped onto each other isometrically, the local
    conditions of :func:`check_prop4_ii` are evaluated, and son counts per
    diameter are compared with the host.
    """
    paths, P = path_space(host)
    index = {p: i for i, p in enumerate(paths)}
    balls: dict = {}
    for p in paths:
        for r in sorted({b.diameter for b in p.balls}):
            if r > 0:
                b = path_ball(p, r)
                balls.setdefault((r, frozenset(b.members)), b)
    iso = Check()
    by_r: dict = {}
    for (r, _), b in balls.items():
        by_r.setdefault(r, []).append(b)
    for r, group in sorted(by_r.items()):
        for b1, b2 in itertools.product(group, repeat=2):
            f = path_ball_isometry(b1, b2)
            ok = set(f.values()) == set(b2.members) and all(
                P.dist[index[f[u]]][index[f[v]]] == P.dist[index[u]][index[v]] for u in b1.members for v in b1.members
            )
            iso(ok, lambda: {"radius": r, "from": b1.top, "to": b2.top})
    son_counts = {}
    host_sons: dict = {}
    for b in host.nerve:
        if b.diameter > 0:
            k = _host_sons(host, b)
            host_sons[b.diameter] = max(host_sons.get(b.diameter, 0), k)
    for b in P.nerve:
        if b.diameter > 0:
            k = len(sons(P, b))
            son_counts[b.diameter] = max(son_counts.get(b.diameter, 0), k)
    sons_ok = all(son_counts.get(r, 0) >= k for r, k in host_sons.items())
    p4 = check_prop4_ii(P)
    return {
        "paths": len(paths),
        "ball_isometries": iso.report(),
        "prop4_ii": {"holds": p4["holds"], "a": p4["a"]["holds"], "b": p4["b"]["holds"]},
        "max_sons_by_diameter": {str(r): k for r, k in sorted(son_counts.items(), reverse=True)},
        "host_max_sons_by_diameter": {str(r): k for r, k in sorted(host_sons.items(), reverse=True)},
        "sons_dominate_host": sons_ok,
        "holds": iso.witness is None and p4["holds"] and sons_ok,
    }


def _host_sons(host, b) -> int:
    if isinstance(host, WordHost):
        return host.window
    return len(sons(host, b))


def corpus_suite(seed: int = 0, count: int = 20) -> dict:
    """Random corpus checks: tree round trip and subdominant ultrametric."""
    rng = random.Random(seed)
    roundtrip = Check()
    for _ in range(count):
        n = rng.randint(1, 8)
        s = random_ultrametric(rng, n, [1, 2, 3, 4])
        roundtrip(tree_to_space(space_to_tree(s)).dist == s.dist, lambda: s.dist)
    dstar = Check()
    for _ in range(count):
        m = random_metric(rng, rng.randint(1, 6))
        u = subdominant_dstar(m)
        again = subdominant_dstar(u.dist)
        below = all(u.dist[i][j] <= m[i][j] for i in range(u.n) for j in range(u.n))
        dstar(below and again.dist == u.dist, lambda: m)
    return {"seed": seed, "tree_roundtrip": roundtrip.report(), "dstar": dstar.report()}


def full_suite(seed: int = 0, samples: int = 300) -> dict:
    return {
        "seed": seed,
        "monoid": {
            "words_21_w3": monoid_suite((2, 1), 3, seed, samples),
            "words_321_w2": monoid_suite((3, 2, 1), 2, seed, samples),
        },
        "corpus": corpus_suite(seed),
    }
