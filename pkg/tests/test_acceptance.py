"""End-to-end acceptance criteria, one test each, each printing a PASS/FAIL line."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from oracles import SetPaths, chain_dstar, embeddings, path_as_sets, strong_triangle_ok
from ultrapath.embeddings import check_theorem6
from ultrapath.fixtures import equilateral, fixture_spaces, monoid_hosts, t3
from ultrapath.generators import random_metric, random_ultrametric, ultv_approx
from ultrapath.io import dumps
from ultrapath.monoid import BOTTOM_BALL, ball_meet, ball_sum
from ultrapath.paths import (
    enumerate_paths,
    path_ball,
    path_ball_isometry,
    path_distance,
    path_infimum,
    path_space,
    phi,
)
from ultrapath.ramsey import check_divisible, subdominant_dstar
from ultrapath.rational import INF
from ultrapath.spaces import SpaceError, spectrum, validate_ultrametric
from ultrapath.suite import full_suite, monoid_suite
from ultrapath.trees import UNBOUNDED, TreeScheme, space_to_tree, tree_to_space, uniform_scheme

CORPUS = fixture_spaces()
SMALL = {k: v for k, v in CORPUS.items() if v.n <= 6}


@pytest.fixture
def report(capsys, request):
    """Print one PASS/FAIL line for the criterion, whatever the outcome."""
    label = request.node.function.__doc__.strip().splitlines()[0]
    outcome = {"ok": False}
    yield outcome
    with capsys.disabled():
        print(f"\n[acceptance] {'PASS' if outcome['ok'] else 'FAIL'}  {label}")


def all_paths(space, alpha=INF):
    spec = sorted({b.diameter for b in space.nerve if b.diameter < alpha})
    return [p for beta in spec for p in enumerate_paths(space, alpha, beta)]


def alphas(space):
    return [INF] + [r for r in spectrum(space) if r > 0]


def test_criterion_01_tree_roundtrip(report):
    """01 tree round trip on 200 random spaces"""
    rng = random.Random(2024)
    pool = [1, 2, 3, 5, 7, Fraction(1, 2), Fraction(5, 3)]
    for _ in range(200):
        n = rng.randint(1, 12)
        values = rng.sample(pool, rng.randint(1, 4))
        s = random_ultrametric(rng, n, values)
        assert len(spectrum(s)) <= 5
        back = tree_to_space(space_to_tree(s))
        assert back.dist == s.dist and back.labels == s.labels
    report["ok"] = True


def test_criterion_02_phi_embeds_into_path_extension(report):
    """02 φ is a spectrum-preserving embedding and Spec(Path) = Spec on the fixture corpus"""
    for s in SMALL.values():
        paths, ps = path_space(s)
        idx = {p: i for i, p in enumerate(paths)}
        img = [idx[phi(s, x)] for x in range(s.n)]
        for x, y in itertools.product(range(s.n), repeat=2):
            assert ps.dist[img[x]][img[y]] == s.dist[x][y]
        for x in range(s.n):
            assert spectrum(ps, img[x]) == spectrum(s, x)
        assert spectrum(ps) == spectrum(s)
    report["ok"] = True


def test_criterion_03_path_t3(report):
    """03 Path(T3) has 4 paths with the expected distances, matching the oracle"""
    T = t3()
    paths, ps = path_space(T)
    assert len(paths) == 4
    J, fx, fy, fz = paths
    d = lambda p, q: path_distance(p, q)
    assert d(fx, fy) == 1 and d(fx, J) == 1 and d(fy, J) == 1
    assert d(fx, fz) == d(fy, fz) == d(J, fz) == 2
    oracle = SetPaths(T.dist, None)
    assert {path_as_sets(p) for p in paths} == {q for q in oracle.paths if oracle.delta(q) == 0}
    for p, q in itertools.product(paths, repeat=2):
        if p != q:
            assert d(p, q) == oracle.distance(path_as_sets(p), path_as_sets(q))
    report["ok"] = True


def test_criterion_04_infimum_matches_oracle(report):
    """04 path infimum equals the exhaustive greatest lower bound on every host with n ≤ 6"""
    assert len(SMALL) >= 10
    for s in SMALL.values():
        for alpha in alphas(s):
            oracle = SetPaths(s.dist, None if alpha is INF else alpha)
            paths = all_paths(s, alpha)
            assert {path_as_sets(p) for p in paths} == oracle.paths
            for p, q in itertools.product(paths, repeat=2):
                m = path_infimum(p, q)
                want = oracle.infimum(path_as_sets(p), path_as_sets(q))
                assert (None if m.is_bottom else path_as_sets(m)) == want
    report["ok"] = True


def test_criterion_05_path_spaces_are_ultrametric(report):
    """05 every enumerated (α, β)-path space is ultrametric and all triples satisfy the bound"""
    for s in SMALL.values():
        for alpha in alphas(s):
            for beta in sorted({b.diameter for b in s.nerve if b.diameter < alpha}):
                path_space(s, alpha, beta)  # raises if the matrix is not ultrametric
        paths = all_paths(s)
        for p, q, j in itertools.product(paths, repeat=3):
            assert path_distance(p, q) <= max(path_distance(p, j), path_distance(q, j))
    report["ok"] = True


def test_criterion_06_path_balls_and_isometries(report):
    """06 the nerve of Path is the set of path balls; same-diameter balls are isometric"""
    for s in SMALL.values():
        paths, ps = path_space(s)
        idx = {p: i for i, p in enumerate(paths)}
        built = {}
        for p in paths:
            for r in {b.diameter for b in p.balls}:
                if r > 0:
                    pb = path_ball(p, r)
                    built.setdefault(frozenset(pb.members), pb)
        nerve = {frozenset(paths[i] for i in b.points) for b in ps.nerve if b.diameter > 0}
        assert nerve == set(built)
        for b1, b2 in itertools.product(built.values(), repeat=2):
            if b1.radius != b2.radius:
                continue
            f = path_ball_isometry(b1, b2)
            assert set(f) == set(b1.members) and set(f.values()) == set(b2.members)
            for p, q in itertools.product(b1.members, repeat=2):
                assert ps.dist[idx[p]][idx[q]] == ps.dist[idx[f[p]]][idx[f[q]]]
    report["ok"] = True


def test_criterion_07_path_monoid_laws(report):
    """07 path sums on word windows are associative, commutative, unital, additive on φ and compatible"""
    for levels, width in (((1,), 4), ((2, 1), 3), ((3, 2, 1), 2), ((2, 1), 4)):
        rep = monoid_suite(levels, width, samples=None)
        for name in ("associative", "commutative", "neutral", "phi_additive", "translation_isometric",
                     "generator_independent"):
            assert rep["checks"][name]["holds"], (levels, width, name, rep["checks"][name])
        assert rep["holds"], (levels, width)
    report["ok"] = True


def test_criterion_08_ball_sums(report):
    """08 ball sums distribute over meets and have diameter max(δ, δ′) on the fixture hosts"""

    def add(b1, b2, op):
        return BOTTOM_BALL if b1 is BOTTOM_BALL or b2 is BOTTOM_BALL else ball_sum(b1, b2, op)

    for op in monoid_hosts().values():
        nerve = op.space.nerve
        for b1, b2 in itertools.product(nerve, repeat=2):
            assert ball_sum(b1, b2, op).diameter == max(b1.diameter, b2.diameter)
        for alpha in [INF] + sorted({b.diameter for b in nerve if b.diameter > 0}):
            below = [b for b in nerve if b.diameter < alpha]
            for c, b, b2 in itertools.product(below, repeat=3):
                m = ball_meet(b, b2, op, alpha)
                assert add(c, m, op) == ball_meet(ball_sum(c, b, op), ball_sum(c, b2, op), op, alpha)
                assert add(m, c, op) == ball_meet(ball_sum(b, c, op), ball_sum(b2, c, op), op, alpha)
    report["ok"] = True


def test_criterion_09_dstar(report):
    """09 the bottleneck d* equals the chain oracle on 100 random metrics"""
    rng = random.Random(9)
    for _ in range(100):
        m = random_metric(rng, rng.randint(1, 7))
        u = subdominant_dstar(m)
        assert [list(r) for r in u.dist] == chain_dstar(m)
        assert strong_triangle_ok(u.dist)
        assert subdominant_dstar(u.dist).dist == u.dist
    report["ok"] = True


def test_criterion_10_finite_divisibility(report):
    """10 small fixtures are divisible by themselves; six equidistant points resist a 3-point pattern"""
    for s in CORPUS.values():
        if not 2 <= s.n <= 5:
            continue
        rep = check_divisible(s, s)
        assert rep["verdict"] == "divisible"
        w = rep["witness"]
        for c in range(2):
            part = w.part(c)
            sub = [[s.dist[i][j] for j in part] for i in part]
            assert next(embeddings(s.dist, sub), None) is None
    assert check_divisible(ultv_approx([0, 1], 6), equilateral(3))["verdict"] == "indivisible"
    report["ok"] = True


def _holds(rep):
    return tuple(v["holds"] for _, v in sorted(rep["conditions"].items()))


def test_criterion_11_theorem6_checker(report):
    """11 uniform unbounded schemes pass all four conditions; single mutations flip one condition"""
    leaf = TreeScheme(0)
    level_sets = [[1], [2, 1], [3, 2, 1], [5, Fraction(3, 2), Fraction(1, 2)]]
    for levels in level_sets:
        assert _holds(check_theorem6(uniform_scheme(levels))) == (True, True, True, True)
        for i in range(len(levels)):
            degrees = [UNBOUNDED] * len(levels)
            degrees[i] = 3
            assert _holds(check_theorem6(uniform_scheme(levels, degrees))) == (True, True, False, True)
    for top, a, b in ((3, 2, 1), (5, Fraction(3, 2), Fraction(1, 2)), (4, 3, 1)):
        split = TreeScheme(top, UNBOUNDED, (TreeScheme(a, UNBOUNDED, (leaf,)), TreeScheme(b, UNBOUNDED, (leaf,))))
        assert _holds(check_theorem6(split)) == (True, True, True, False)
    report["ok"] = True


def test_criterion_12_determinism(report):
    """12 two runs of the full suite with the same seed give byte-identical reports"""
    a = dumps(full_suite(seed=7))
    b = dumps(full_suite(seed=7))
    assert a == b
    report["ok"] = True
