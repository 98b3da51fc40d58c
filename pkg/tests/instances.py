"""Deterministic instance generators shared by the property tests."""

from __future__ import annotations

import random
from fractions import Fraction

from dsqo.matrix_classes import SymMatrix, nonempty_subsets
from dsqo.qso import QsoTensor, random_qso


def broken_qso(m: int, rng: random.Random) -> tuple[QsoTensor, int, tuple[int, ...]]:
    """Random operator whose slice ``k`` violates the subset bound on ``subset``.

    Coefficients of pairs inside the subset are blended towards slice ``k``
    just far enough to push its subset sum strictly past ``|subset|``.
    """
    base = random_qso(m, rng)
    subset = rng.choice([s for s in nonempty_subsets(m) if len(s) >= 2])
    k = rng.randrange(m)
    size = len(subset)
    s0 = base.slices[k].subset_sum(subset)
    # new subset sum is (1 - lam) * s0 + lam * size**2
    lam_min = max(Fraction(0), Fraction(size - s0) / (size * size - s0))
    lam = lam_min + (1 - lam_min) * Fraction(rng.randint(1, 10), 10)
    grid = [[list(row) for row in a.entries] for a in base.slices]
    for i in subset:
        for j in subset:
            for t in range(m):
                target = Fraction(int(t == k))
                grid[t][i][j] = (1 - lam) * grid[t][i][j] + lam * target
    v = QsoTensor(tuple(SymMatrix(tuple(map(tuple, g))) for g in grid))
    assert v.slices[k].subset_sum(subset) > size
    return v, k, subset


def random_nonmember_u1(m: int, rng: random.Random, denominator: int = 6) -> SymMatrix:
    """Random symmetric nonnegative matrix that fails the U_1 test."""
    from dsqo.matrix_classes import in_U1

    while True:
        grid = [[Fraction(0)] * m for _ in range(m)]
        for i in range(m):
            for j in range(i, m):
                grid[i][j] = grid[j][i] = Fraction(rng.randint(0, 2 * denominator), denominator)
        a = SymMatrix(tuple(map(tuple, grid)))
        if not in_U1(a):
            return a
