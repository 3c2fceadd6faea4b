"""A small named corpus of spaces and monoid hosts used by tests and the suite."""
from __future__ import annotations

import random

from .generators import max_space, random_ultrametric, ultv_approx
from .monoid import WordHost, cyclic_op
from .spaces import FiniteUltraSpace, validate_ultrametric


def t3() -> FiniteUltraSpace:
    """x, y at distance 1; z at distance 2 from both."""
    return validate_ultrametric([[0, 1, 2], [1, 0, 2], [2, 2, 0]], ["x", "y", "z"])


def equilateral(n: int = 3, r: int = 1) -> FiniteUltraSpace:
    return validate_ultrametric([[0 if i == j else r for j in range(n)] for i in range(n)])


def two_pairs() -> FiniteUltraSpace:
    """x, y and z1, z2 at distance 1 within, 2 across."""
    return validate_ultrametric(
        [[0, 1, 2, 2], [1, 0, 2, 2], [2, 2, 0, 1], [2, 2, 1, 0]], ["x", "y", "z1", "z2"]
    )


def stuck_five() -> FiniteUltraSpace:
    """Sons {p, q, t} and {r, s} at internal distance 1, 2 apart."""
    d = [[0 if i == j else (1 if (i < 3) == (j < 3) else 2) for j in range(5)] for i in range(5)]
    return validate_ultrametric(d, ["p", "q", "t", "r", "s"])


def comb(n: int = 4) -> FiniteUltraSpace:
    """Point i joins the first i points at distance i."""
    return validate_ultrametric([[0 if i == j else max(i, j) for j in range(n)] for i in range(n)])


def fixture_spaces() -> dict[str, FiniteUltraSpace]:
    """Named spaces with at most six points, in a fixed order."""
    out = {
        "singleton": validate_ultrametric([[0]]),
        "pair": validate_ultrametric([[0, 1], [1, 0]]),
        "T3": t3(),
        "equilateral3": equilateral(3),
        "two_pairs": two_pairs(),
        "stuck_five": stuck_five(),
        "max_0123": max_space([0, 1, 2, 3]),
        "comb5": comb(5),
        "ultv_013_w2": ultv_approx([0, 1, 3], 2),
        "mixed_half": validate_ultrametric(
            [[0, "1/2", 2, 2, 2], ["1/2", 0, 2, 2, 2], [2, 2, 0, 1, 1], [2, 2, 1, 0, "1/2"], [2, 2, 1, "1/2", 0]]
        ),
    }
    for seed, n in ((1, 5), (2, 6), (3, 6)):
        out[f"random_s{seed}_n{n}"] = random_ultrametric(random.Random(seed), n, [1, 2, 3])
    return out


def monoid_hosts() -> dict:
    """Finite spaces with a total compatible operation (addition mod width)."""
    return {
        "cyclic_1_w3": cyclic_op((1,), 3),
        "cyclic_21_w2": cyclic_op((2, 1), 2),
        "cyclic_21_w3": cyclic_op((2, 1), 3),
        "cyclic_321_w2": cyclic_op((3, 2, 1), 2),
    }


def word_hosts() -> dict[str, WordHost]:
    """Windows of the word monoid with at most 3 levels and width at most 4."""
    return {
        "words_1_w4": WordHost((1,), 4),
        "words_21_w3": WordHost((2, 1), 3),
        "words_21_w4": WordHost((2, 1), 4),
        "words_321_w2": WordHost((3, 2, 1), 2),
    }
