"""Quadratic stochastic operators and the doubly stochastic membership test.

An operator on the ``(m-1)``-simplex is stored as its coefficient slices
``A_k = (p_{ij,k})``, so ``(Vx)_k = (A_k x, x)``. It is doubly stochastic
(``Vx`` majorized by ``x`` for every ``x``) exactly when every slice is in U_1
and the slices add up to the all-ones matrix.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Iterable, Sequence

from .majorization import SimplexVector, majorizes
from .matrix_classes import (
    Membership,
    SymMatrix,
    Subset,
    _check_permutation,
    in_U1,
    in_Uk,
    nonempty_subsets,
    ones,
    quadratic_form,
)

DEFAULT_SAMPLE_DENOMINATOR = 720


@dataclass(frozen=True)
class QsoTensor:
    """Coefficients ``p_{ij,k}`` held as the slices ``A_1, ..., A_m``.

    Each slice is symmetric and nonnegative (enforced by :class:`SymMatrix`)
    and for every pair ``(i, j)`` the coefficients over ``k`` sum to 1.
    """

    slices: tuple[SymMatrix, ...]

    def __post_init__(self) -> None:
        m = len(self.slices)
        if m < 1:
            raise ValueError("an operator needs at least one slice")
        for k, a in enumerate(self.slices):
            if a.m != m:
                raise ValueError(f"slice {k + 1} is {a.m}x{a.m}, expected {m}x{m}")
        for i in range(m):
            for j in range(i, m):
                s = sum((a[i, j] for a in self.slices), Fraction(0))
                if s != 1:
                    raise ValueError(
                        f"coefficients p[{i + 1},{j + 1},k] sum to {s} over k, expected 1"
                    )

    @classmethod
    def of(cls, slices: Iterable[SymMatrix | Iterable[Iterable[object]]]) -> QsoTensor:
        return cls(tuple(s if isinstance(s, SymMatrix) else SymMatrix.of(s) for s in slices))

    @classmethod
    def identity(cls, m: int) -> QsoTensor:
        """``p_{ij,k} = (d_ik + d_jk)/2``; maps every point to itself."""
        return cls.permutation(tuple(range(m)))

    @classmethod
    def permutation(cls, g: Sequence[int]) -> QsoTensor:
        """``p_{ij,k} = (d_{g(i)k} + d_{g(j)k})/2`` for a 0-based permutation ``g``."""
        m = len(g)
        _check_permutation(g, m)
        h = Fraction(1, 2)
        slices = []
        for k in range(m):
            slices.append(
                SymMatrix(
                    tuple(
                        tuple(h * ((g[i] == k) + (g[j] == k)) for j in range(m))
                        for i in range(m)
                    )
                )
            )
        return cls(tuple(slices))

    @property
    def m(self) -> int:
        return len(self.slices)

    def p(self, i: int, j: int, k: int) -> Fraction:
        return self.slices[k][i, j]

    def coordinates(self) -> tuple[Fraction, ...]:
        """Slice-major concatenation of the upper-triangular slice coordinates."""
        return tuple(v for a in self.slices for v in a.upper())

    @classmethod
    def from_coordinates(cls, m: int, coords: Sequence[Fraction]) -> QsoTensor:
        n = m * (m + 1) // 2
        return cls(tuple(SymMatrix.from_upper(m, coords[k * n:(k + 1) * n]) for k in range(m)))


def apply(v: QsoTensor, x: SimplexVector) -> SimplexVector:
    """``(Vx)_k = sum_ij p_{ij,k} x_i x_j``."""
    if v.m != x.m:
        raise ValueError(f"dimension mismatch: operator {v.m}, point {x.m}")
    return SimplexVector(tuple(quadratic_form(a, x) for a in v.slices))


@dataclass(frozen=True)
class DsqoCheck:
    """Result of :func:`is_dsqo`; truthy when the operator is doubly stochastic.

    A failure names the offending slice (0-based ``slice_index``) with its U_1
    violation, or the pair ``(i, j)`` where the slices do not add up to 1.
    """

    member: bool
    slice_index: int | None = None
    membership: Membership | None = None
    pair: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.member

    def counterexample(self, m: int) -> SimplexVector | None:
        """A point ``x`` with ``Vx`` not majorized by ``x``, built from the failure.

        A violated subset gives the uniform point on that subset; a slice
        with the wrong total gives the barycenter.
        """
        if self.member or self.membership is None:
            return None
        return self.membership.violation_point(m)


def is_dsqo(v: QsoTensor) -> DsqoCheck:
    """Exact test: every slice in U_1 and the slices sum to the all-ones matrix."""
    for k, a in enumerate(v.slices):
        check = in_U1(a)
        if not check:
            return DsqoCheck(False, slice_index=k, membership=check)
    m = v.m
    for i in range(m):
        for j in range(i, m):
            if sum((a[i, j] for a in v.slices), Fraction(0)) != 1:
                return DsqoCheck(False, pair=(i, j))
    return DsqoCheck(True)


@dataclass(frozen=True)
class NecessaryConditions:
    """Three necessary conditions on a doubly stochastic operator.

    ``slice_totals`` lists ``(k, total)`` for slices whose entries do not sum
    to ``m``; ``row_sums`` lists ``(i, k, sum)`` for rows of a slice summing
    below ``1/2``; ``subset_sums`` lists ``(k, subset, sum)`` with
    ``sum > |subset|``. All indices are 0-based.
    """

    slice_totals: list[tuple[int, Fraction]] = field(default_factory=list)
    row_sums: list[tuple[int, int, Fraction]] = field(default_factory=list)
    subset_sums: list[tuple[int, Subset, Fraction]] = field(default_factory=list)

    @property
    def totals_ok(self) -> bool:
        return not self.slice_totals

    @property
    def rows_ok(self) -> bool:
        return not self.row_sums

    @property
    def subsets_ok(self) -> bool:
        return not self.subset_sums

    @property
    def passed(self) -> bool:
        return self.totals_ok and self.rows_ok and self.subsets_ok


def check_necessary_conditions(v: QsoTensor) -> NecessaryConditions:
    report = NecessaryConditions()
    m = v.m
    half = Fraction(1, 2)
    subsets = nonempty_subsets(m)
    for k, a in enumerate(v.slices):
        total = a.total()
        if total != m:
            report.slice_totals.append((k, total))
        for i, s in enumerate(a.row_sums()):
            if s < half:
                report.row_sums.append((i, k, s))
        for sub in subsets:
            s = a.subset_sum(sub)
            if s > len(sub):
                report.subset_sums.append((k, sub, s))
    return report


# ---------------------------------------------------------------------------
# Randomised search for majorization counterexamples


def _battery(m: int) -> list[tuple[list[int], int]]:
    """Corners, edge midpoints and uniform points on subsets as integer compositions."""
    points: list[tuple[list[int], int]] = []
    for i in range(m):
        points.append(([int(j == i) for j in range(m)], 1))
    for i, j in combinations(range(m), 2):
        points.append(([int(t in (i, j)) for t in range(m)], 2))
    if m <= 12:
        for sub in nonempty_subsets(m):
            if len(sub) > 2:
                points.append(([int(t in sub) for t in range(m)], len(sub)))
    return points


def _integer_tensor(v: QsoTensor) -> tuple[list[list[list[int]]], int]:
    denom = 1
    for a in v.slices:
        for row in a.entries:
            for p in row:
                denom = lcm(denom, p.denominator)
    return [
        [[int(p * denom) for p in row] for row in a.entries] for a in v.slices
    ], denom


def _image_not_majorized(ints: list[list[list[int]]], scale: int, c: list[int], d: int) -> bool:
    """With ``x = c/d``, decide whether ``Vx`` fails to be majorized by ``x``.

    Both vectors are compared after scaling by ``scale * d**2`` so every
    quantity is an integer.
    """
    m = len(c)
    nz = [i for i in range(m) if c[i]]
    image = []
    for a in ints:
        s = 0
        for i in nz:
            row = a[i]
            ci = c[i]
            s += ci * sum(row[j] * c[j] for j in nz)
        image.append(s)
    image.sort(reverse=True)
    base = sorted((ci * scale * d for ci in c), reverse=True)
    pi = pb = 0
    for t in range(m - 1):
        pi += image[t]
        pb += base[t]
        if pi > pb:
            return True
    return False


def majorization_witness(
    v: QsoTensor,
    trials: int = 1000,
    seed: int = 0,
    denominator: int = DEFAULT_SAMPLE_DENOMINATOR,
) -> SimplexVector | None:
    """First sampled ``x`` with ``Vx`` not majorized by ``x``, or None.

    A fixed battery of corners, edge midpoints and uniform subset points is
    tried first, then ``trials`` random compositions of ``denominator``
    drawn from ``random.Random(seed)``. Sampling is deterministic, and the
    arithmetic is exact (integers after clearing denominators).
    """
    m = v.m
    ints, scale = _integer_tensor(v)
    rng = random.Random(seed)

    def candidates():
        yield from _battery(m)
        for _ in range(trials):
            cuts = sorted(rng.randint(0, denominator) for _ in range(m - 1))
            yield [b - a for a, b in zip([0] + cuts, cuts + [denominator])], denominator

    for c, d in candidates():
        if _image_not_majorized(ints, scale, c, d):
            x = SimplexVector(tuple(Fraction(ci, d) for ci in c))
            assert not majorizes(apply(v, x), x)
            return x
    return None


# ---------------------------------------------------------------------------
# Completion and slice permutation


class CompletionError(ValueError):
    """The given slices cannot start a doubly stochastic operator."""


def complete_to_dsqo(prefix: Sequence[SymMatrix], m: int) -> QsoTensor:
    """Extend ``A_1..A_p`` (each in U_1, sum in U_p) to a doubly stochastic operator.

    The residual ``E - sum(A_i)`` is shared equally by the remaining
    ``m - p`` slices; for ``p = 1`` each of them is ``(E - A_1)/(m - 1)``.
    """
    p = len(prefix)
    if not 1 <= p < m:
        raise CompletionError(f"need between 1 and {m - 1} slices, got {p}")
    for idx, a in enumerate(prefix):
        if a.m != m:
            raise CompletionError(f"slice {idx + 1} is {a.m}x{a.m}, expected {m}x{m}")
        check = in_U1(a)
        if not check:
            raise CompletionError(f"slice {idx + 1} is not in U_1 ({_describe(check)})")
    total = prefix[0]
    for a in prefix[1:]:
        total = total + a
    if p > 1 and not in_Uk(total, p):
        raise CompletionError(f"the {p} given slices do not sum to a member of U_{p}")
    rest = (ones(m) - total).scale(Fraction(1, m - p))
    result = QsoTensor(tuple(prefix) + (rest,) * (m - p))
    assert is_dsqo(result)
    return result


def _describe(check: Membership) -> str:
    if check.subset is not None:
        return f"subset {[i + 1 for i in check.subset]} sums to {check.subset_sum}"
    return f"total {check.total}"


def permute_qso(v: QsoTensor, pi: Sequence[int]) -> QsoTensor:
    """Reorder slices: slice ``k`` of the result is slice ``pi[k]`` of ``v`` (0-based)."""
    _check_permutation(pi, v.m)
    return QsoTensor(tuple(v.slices[pi[k]] for k in range(v.m)))


def random_qso(m: int, rng: random.Random, denominator: int = 6) -> QsoTensor:
    """Random (not necessarily doubly stochastic) operator with rational coefficients."""
    grid = [[[Fraction(0)] * m for _ in range(m)] for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            w = [rng.randint(0, denominator) for _ in range(m)]
            if not any(w):
                w[rng.randrange(m)] = 1
            s = sum(w)
            for k in range(m):
                grid[k][i][j] = grid[k][j][i] = Fraction(w[k], s)
    return QsoTensor(tuple(SymMatrix(tuple(map(tuple, g))) for g in grid))
