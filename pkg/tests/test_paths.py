from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings

from oracles import SetPaths, nerve_sets, path_as_sets
from ultrapath.fixtures import fixture_spaces, two_pairs
from ultrapath.paths import (
    AlphaPath,
    BottomPath,
    PathError,
    SlimSet,
    enumerate_paths,
    generates,
    path_ball,
    path_ball_isometry,
    path_distance,
    path_from_slim,
    path_infimum,
    path_leq,
    path_space,
    phi,
    represented_set,
    truncate,
)
from ultrapath.rational import INF
from ultrapath.spaces import least_ball, sons, spectrum

from conftest import ultra_spaces

CORPUS = fixture_spaces()
X, Y, Z = 0, 1, 2


def ball(space, *pts):
    return least_ball(space, pts)


def all_paths(space, alpha=INF):
    """Every α-path, over every end diameter."""
    spec = sorted({b.diameter for b in space.nerve if b.diameter < alpha})
    return [p for beta in spec for p in enumerate_paths(space, alpha, beta)]


def alphas(space):
    """+∞ and every positive spectrum value."""
    return [INF] + [r for r in spectrum(space) if r > 0]


def oracle_alpha(alpha):
    return None if alpha is INF else alpha


def as_sets(p):
    return None if p.is_bottom else path_as_sets(p)


# --- examples ---------------------------------------------------------------


def test_singleton_generator(T3):
    p = path_from_slim(T3, [ball(T3, X)])
    assert p.pure == (ball(T3, X),)
    assert path_as_sets(p) == {frozenset({0}), frozenset({0, 1}), frozenset({0, 1, 2})}


def test_comparable_generators_collapse(T3):
    p = path_from_slim(T3, [ball(T3, X, Y), ball(T3, X)])
    assert p.pure == (ball(T3, X),)


def test_incomparable_generators_kept(T3):
    p = path_from_slim(T3, [ball(T3, X, Y), ball(T3, Z)])
    assert p.pure == (ball(T3, X, Y), ball(T3, Z))
    assert path_as_sets(p) == {frozenset({0, 1, 2}), frozenset({0, 1}), frozenset({2})}


def test_path_from_slim_rejects_bad_input(T3):
    with pytest.raises(PathError):
        path_from_slim(T3, [])
    with pytest.raises(PathError):
        path_from_slim(T3, [ball(T3, X), ball(T3, Y)])
    with pytest.raises(PathError):
        path_from_slim(T3, [ball(T3, X, Y)], alpha=Fraction(1))
    with pytest.raises(PathError):
        path_from_slim(T3, [ball(T3, X)], alpha=Fraction(0))


def test_path_from_slim_rejects_non_nerve_ball(T3):
    from ultrapath.spaces import Ball

    fake = Ball((0, 2), Fraction(1))
    with pytest.raises(PathError):
        path_from_slim(T3, [fake])


def test_infimum_examples(T3):
    fx, fy, fz = (phi(T3, i) for i in (X, Y, Z))
    m = path_infimum(fx, fy)
    assert m.pure == (ball(T3, X, Y),) and m.delta == 1
    J = path_from_slim(T3, [ball(T3, X, Y), ball(T3, Z)])
    m = path_infimum(J, fz)
    assert m.pure == (ball(T3, X, Y, Z),) and m.delta == 2
    assert path_infimum(J, J) == J


def test_distance_examples(T3):
    J = path_from_slim(T3, [ball(T3, X, Y), ball(T3, Z)])
    assert path_distance(phi(T3, X), phi(T3, Y)) == 1
    assert path_distance(J, phi(T3, Z)) == 2


def test_leq_examples(T3):
    I = path_from_slim(T3, [ball(T3, X, Y)])
    J = path_from_slim(T3, [ball(T3, X, Y), ball(T3, Z)])
    assert path_leq(J, J)
    assert path_leq(I, J)
    assert not path_leq(I, phi(T3, Z))


def test_leq_is_stronger_than_inclusion(T3):
    fz = phi(T3, Z)
    J = path_from_slim(T3, [ball(T3, X, Y), ball(T3, Z)])
    assert path_as_sets(fz) <= path_as_sets(J)
    assert not path_leq(fz, J)


def test_enumerate_t3(T3):
    got = enumerate_paths(T3)
    J = path_from_slim(T3, [ball(T3, X, Y), ball(T3, Z)])
    assert got == [J, phi(T3, X), phi(T3, Y), phi(T3, Z)]


def test_enumerate_small(corpus):
    assert len(enumerate_paths(corpus["singleton"])) == 1
    assert len(enumerate_paths(corpus["equilateral3"])) == 3


def test_phi_example(T3):
    assert phi(T3, X).pure == (ball(T3, X),)


def test_path_space_t3_matrix(T3):
    paths, space = path_space(T3)
    J, fx, fy, fz = paths
    idx = {p: i for i, p in enumerate(paths)}
    d = lambda p, q: space.dist[idx[p]][idx[q]]
    assert d(fx, fy) == 1 and d(fx, J) == 1 and d(fy, J) == 1
    assert d(fx, fz) == d(fy, fz) == d(J, fz) == 2
    assert spectrum(space, idx[fz]) == spectrum(T3, Z)


def test_path_ball_examples(T3):
    paths = enumerate_paths(T3)
    J, fx, fy, fz = paths
    b = path_ball(fx, 1)
    # L_{1,0} has three members here: φx, φy and J all lie within 1 of φx
    assert set(b.members) == {fx, fy, J}
    assert set(path_ball(fz, 2).members) == set(paths)


def test_path_ball_equals_distance_ball(corpus):
    for space in corpus.values():
        paths, ps = path_space(space)
        idx = {p: i for i, p in enumerate(paths)}
        for p in paths:
            for r in sorted({b.diameter for b in p.balls}):
                if r == 0:
                    continue
                got = set(path_ball(p, r).members)
                want = {q for q in paths if ps.dist[idx[p]][idx[q]] <= r}
                assert got == want


def test_path_ball_rejects_unrealized_radius(T3):
    with pytest.raises(PathError):
        path_ball(phi(T3, Z), 1)
    with pytest.raises(PathError):
        path_ball(phi(T3, X), 0)
    with pytest.raises(PathError):
        path_ball(phi(T3, X), Fraction(3, 2))


def test_isometry_identity(T3):
    b = path_ball(phi(T3, X), 1)
    assert path_ball_isometry(b, b) == {p: p for p in b.members}


def test_isometry_exchanges_two_pairs():
    S = two_pairs()
    paths, ps = path_space(S)
    idx = {p: i for i, p in enumerate(paths)}
    b1, b2 = path_ball(phi(S, 0), 1), path_ball(phi(S, 2), 1)
    assert set(b1.members).isdisjoint(b2.members)
    f = path_ball_isometry(b1, b2)
    assert set(f.values()) == set(b2.members)
    # the part below the top is kept: φx lands on the path through {z1,z2} ending at {x}
    assert f[phi(S, 0)] == path_from_slim(S, [ball(S, 2, 3), ball(S, 0)])
    assert f[path_from_slim(S, [ball(S, 0, 1), ball(S, 2)])] == phi(S, 2)
    for p, q in itertools.product(b1.members, repeat=2):
        assert ps.dist[idx[p]][idx[q]] == ps.dist[idx[f[p]]][idx[f[q]]]


def test_isometry_rejects_diameter_mismatch(T3):
    with pytest.raises(PathError):
        path_ball_isometry(path_ball(phi(T3, X), 1), path_ball(phi(T3, X), 2))


def test_bottom_path():
    b = BottomPath(Fraction(2))
    assert b.delta == b.mu == 2 and len(b) == 0


def test_alpha_mismatch(T3):
    with pytest.raises(PathError):
        path_leq(phi(T3, X), phi(T3, X, Fraction(3)))


def test_slim_select(T3):
    s = SlimSet((ball(T3, X), ball(T3, X, Y, Z)))
    assert s.spec == (2, 0)
    assert s.select(Fraction(1)) == ball(T3, X)
    assert s.select(5) == ball(T3, X, Y, Z)
    assert s.end == ball(T3, X)


# --- oracle agreement -------------------------------------------------------


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_enumeration_matches_set_oracle(name):
    space = CORPUS[name]
    for alpha in alphas(space):
        oracle = SetPaths(space.dist, oracle_alpha(alpha))
        got = {path_as_sets(p) for p in all_paths(space, alpha)}
        assert got == oracle.paths


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_order_and_infimum_match_set_oracle(name):
    space = CORPUS[name]
    for alpha in alphas(space):
        oracle = SetPaths(space.dist, oracle_alpha(alpha))
        paths = all_paths(space, alpha)
        for p, q in itertools.product(paths, repeat=2):
            ps, qs = path_as_sets(p), path_as_sets(q)
            assert path_leq(p, q) == oracle.leq(ps, qs)
            assert as_sets(path_infimum(p, q)) == oracle.infimum(ps, qs)
            assert path_distance(p, q) == oracle.distance(ps, qs)


# --- structural facts -------------------------------------------------------


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_pure_sequences_are_canonical(name):
    space = CORPUS[name]
    for alpha in alphas(space):
        for p in all_paths(space, alpha):
            diams = p.spectrum
            assert all(a > b for a, b in zip(diams, diams[1:]))
            assert diams[0] < alpha
            for a, b in zip(p.pure, p.pure[1:]):
                assert not a.contains(b) and not b.contains(a)
            # the represented set is slim
            assert len({b.diameter for b in p.balls}) == len(p.balls)
            # its end is the end of the generators
            assert min(p.balls, key=lambda b: b.diameter) == p.end


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_generation_characterization(name):
    """A slim subset of the represented set containing the pure sequence generates the path,
    and any slim set with the same represented set reduces to the same pure sequence."""
    space = CORPUS[name]
    for p in all_paths(space):
        extra = [b for b in p.balls if b not in p.pure]
        for k in range(len(extra) + 1):
            for more in itertools.combinations(extra, k):
                gens = p.pure + more
                assert generates(space, gens, p)
                assert path_from_slim(space, gens) == p


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_truncation_and_concatenation(name):
    space = CORPUS[name]
    paths = all_paths(space)
    for p in paths:
        for r in {b.diameter for b in p.balls}:
            # I ∩ Nerv_{<r} is an r-path when nonempty
            lower = [b for b in p.balls if b.diameter < r]
            if lower:
                q = path_from_slim(space, lower, r)
                assert q.balls == frozenset(lower)
            # I minus Nerv_{<r} is an α-path
            t = truncate(p, r)
            assert t.balls == frozenset(b for b in p.balls if b.diameter >= r)
            assert path_leq(t, p)
        # gluing a δ(I)-path below I gives an α-path
        if p.delta > 0:
            for j in enumerate_paths(space, p.delta, 0):
                glued = path_from_slim(space, p.pure + j.pure)
                assert glued.balls == p.balls | j.balls


def test_represented_set_of_comparable_pair(T3):
    big, small = ball(T3, X, Y, Z), ball(T3, X)
    assert represented_set(T3, [big, small], INF) == represented_set(T3, [small], INF)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_order_is_partial_and_down_sets_are_chains(name):
    space = CORPUS[name]
    paths = all_paths(space)
    for p in paths:
        assert path_leq(p, p)
    for p, q in itertools.product(paths, repeat=2):
        if path_leq(p, q) and path_leq(q, p):
            assert p == q
    for p, q, s in itertools.product(paths, repeat=3):
        if path_leq(p, q) and path_leq(q, s):
            assert path_leq(p, s)
    for J in paths:
        down = [p for p in paths if path_leq(p, J)]
        for p, q in itertools.product(down, repeat=2):
            assert path_leq(p, q) or path_leq(q, p)
            # below a common path, the order is read off δ
            assert path_leq(p, q) == (p.delta >= q.delta)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_distance_bounds_and_ultrametric_triples(name):
    space = CORPUS[name]
    paths = all_paths(space)
    for p, q in itertools.product(paths, repeat=2):
        m = path_infimum(p, q)
        assert path_distance(p, q) <= m.mu
    for p, q, j in itertools.product(paths, repeat=3):
        assert path_distance(p, q) <= max(path_distance(p, j), path_distance(q, j))


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_phi_is_spectrum_preserving_embedding(name):
    space = CORPUS[name]
    paths, ps = path_space(space)
    idx = {p: i for i, p in enumerate(paths)}
    images = [idx[phi(space, x)] for x in range(space.n)]
    for x, y in itertools.product(range(space.n), repeat=2):
        assert ps.dist[images[x]][images[y]] == space.dist[x][y]
    for x in range(space.n):
        assert spectrum(ps, images[x]) == spectrum(space, x)
    assert spectrum(ps) == spectrum(space)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_truncated_extension_spectrum(name):
    """For finite α, distances are capped at α and the spectrum is the capped one."""
    space = CORPUS[name]
    for alpha in alphas(space)[1:]:
        for beta in sorted({b.diameter for b in space.nerve if b.diameter < alpha}):
            paths, ps = path_space(space, alpha, beta)
            capped = {min(v, alpha) for v in spectrum(space)}
            assert set(spectrum(ps)) <= capped
        paths, ps = path_space(space, alpha, 0)
        for x, y in itertools.product(range(space.n), repeat=2):
            p, q = phi(space, x, alpha), phi(space, y, alpha)
            assert path_distance(p, q) == min(space.dist[x][y], alpha)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_nerve_of_path_space_is_path_balls(name):
    space = CORPUS[name]
    paths, ps = path_space(space)
    from_nerve = {frozenset(paths[i] for i in b.points) for b in ps.nerve if b.diameter > 0}
    from_balls = {
        frozenset(path_ball(p, r).members)
        for p in paths
        for r in {b.diameter for b in p.balls}
        if r > 0
    }
    assert from_nerve == from_balls


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_same_diameter_path_balls_are_isometric(name):
    space = CORPUS[name]
    paths, ps = path_space(space)
    idx = {p: i for i, p in enumerate(paths)}
    balls = {}
    for p in paths:
        for r in {b.diameter for b in p.balls}:
            if r > 0:
                pb = path_ball(p, r)
                balls.setdefault((r, frozenset(pb.members)), pb)
    for (r1, _), b1 in balls.items():
        for (r2, _), b2 in balls.items():
            if r1 != r2:
                continue
            f = path_ball_isometry(b1, b2)
            assert set(f) == set(b1.members)
            assert set(f.values()) == set(b2.members)
            for p, q in itertools.product(b1.members, repeat=2):
                assert ps.dist[idx[p]][idx[q]] == ps.dist[idx[f[p]]][idx[f[q]]]


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_path_balls_have_at_least_as_many_sons(name):
    space = CORPUS[name]
    paths, ps = path_space(space)
    for r in spectrum(space):
        if r == 0:
            continue
        host_max = max(len(sons(space, b)) for b in space.nerve if b.diameter == r)
        for b in ps.nerve:
            if b.diameter == r:
                assert len(sons(ps, b)) >= host_max


@settings(max_examples=40, deadline=None)
@given(ultra_spaces(max_n=6))
def test_random_hosts_match_oracle(space):
    oracle = SetPaths(space.dist, None)
    paths = all_paths(space)
    assert {path_as_sets(p) for p in paths} == oracle.paths
    for p, q in itertools.product(paths, repeat=2):
        assert as_sets(path_infimum(p, q)) == oracle.infimum(path_as_sets(p), path_as_sets(q))


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_distance_equals_end_diameter_only_on_the_diagonal(name):
    space = CORPUS[name]
    for beta in sorted({b.diameter for b in space.nerve}):
        paths = enumerate_paths(space, INF, beta)
        for p, q in itertools.product(paths, repeat=2):
            assert (path_distance(p, q) == beta) == (p == q)
