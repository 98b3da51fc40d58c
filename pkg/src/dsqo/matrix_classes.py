"""Symmetric matrices, the row-sum classes T_k and their symmetrizations U_k.

A symmetric nonnegative ``A`` is in ``U_k`` when ``A = (T + T')/2`` for some
``T`` with entries in ``[0, 1]`` and every row summing to ``k``. For ``k = 1``
membership has a subset-sum test (:func:`in_U1`); for other ``k`` it is
decided by exact linear feasibility (:func:`in_Uk`).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .linalg import ConstraintSystem, as_fraction, feasible
from .majorization import SimplexVector, largest_sum, smallest_sum

Grid = tuple[tuple[Fraction, ...], ...]
Subset = tuple[int, ...]  # sorted 0-based indices


def _grid(rows: Iterable[Iterable[object]]) -> Grid:
    return tuple(tuple(as_fraction(v) for v in row) for row in rows)


def _check_square(entries: Grid) -> int:
    m = len(entries)
    if m < 1:
        raise ValueError("matrix must have at least one row")
    for i, row in enumerate(entries):
        if len(row) != m:
            raise ValueError(f"row {i + 1} has {len(row)} entries, expected {m}")
    return m


@dataclass(frozen=True)
class SymMatrix:
    """Symmetric matrix with nonnegative rational entries."""

    entries: Grid

    def __post_init__(self) -> None:
        m = _check_square(self.entries)
        for i in range(m):
            for j in range(m):
                v = self.entries[i][j]
                if v < 0:
                    raise ValueError(f"entry ({i + 1},{j + 1}) is negative ({v})")
                if j > i and v != self.entries[j][i]:
                    raise ValueError(
                        f"not symmetric at ({i + 1},{j + 1}): "
                        f"{v} != {self.entries[j][i]}"
                    )

    @classmethod
    def of(cls, rows: Iterable[Iterable[object]]) -> SymMatrix:
        return cls(_grid(rows))

    @classmethod
    def from_upper(cls, m: int, coords: Sequence[object]) -> SymMatrix:
        """Inverse of :meth:`upper`."""
        vals = [as_fraction(v) for v in coords]
        if len(vals) != m * (m + 1) // 2:
            raise ValueError(f"expected {m * (m + 1) // 2} coordinates, got {len(vals)}")
        grid = [[Fraction(0)] * m for _ in range(m)]
        it = iter(vals)
        for i in range(m):
            for j in range(i, m):
                grid[i][j] = grid[j][i] = next(it)
        return cls(tuple(map(tuple, grid)))

    @property
    def m(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        return self.entries[ij[0]][ij[1]]

    def upper(self) -> tuple[Fraction, ...]:
        """Upper-triangular coordinates ``a_ij, i <= j`` in row-major order."""
        m = self.m
        return tuple(self.entries[i][j] for i in range(m) for j in range(i, m))

    def total(self) -> Fraction:
        return sum((v for row in self.entries for v in row), Fraction(0))

    def row_sums(self) -> tuple[Fraction, ...]:
        return tuple(sum(row, Fraction(0)) for row in self.entries)

    def subset_sum(self, subset: Iterable[int]) -> Fraction:
        idx = sorted(set(subset))
        return sum((self.entries[i][j] for i in idx for j in idx), Fraction(0))

    def __add__(self, other: SymMatrix) -> SymMatrix:
        return SymMatrix(_combine(self.entries, other.entries, 1))

    def __sub__(self, other: SymMatrix) -> SymMatrix:
        return SymMatrix(_combine(self.entries, other.entries, -1))

    def scale(self, factor: object) -> SymMatrix:
        f = as_fraction(factor)
        return SymMatrix(tuple(tuple(f * v for v in row) for row in self.entries))

    def __str__(self) -> str:
        return "[" + "; ".join(" ".join(str(v) for v in row) for row in self.entries) + "]"


@dataclass(frozen=True)
class RowSumMatrix:
    """Matrix in T_k: entries in ``[0, 1]`` and every row summing to ``k``."""

    entries: Grid
    k: int = 1

    def __post_init__(self) -> None:
        m = _check_square(self.entries)
        if not 1 <= self.k <= m:
            raise ValueError(f"row sum k={self.k} outside 1..{m}")
        for i, row in enumerate(self.entries):
            for j, v in enumerate(row):
                if not 0 <= v <= 1:
                    raise ValueError(f"entry ({i + 1},{j + 1}) = {v} is outside [0, 1]")
            s = sum(row, Fraction(0))
            if s != self.k:
                raise ValueError(f"row {i + 1} sums to {s}, expected {self.k}")

    @classmethod
    def of(cls, rows: Iterable[Iterable[object]], k: int = 1) -> RowSumMatrix:
        return cls(_grid(rows), k)

    @property
    def m(self) -> int:
        return len(self.entries)

    def transpose(self) -> Grid:
        return tuple(zip(*self.entries))

    def symmetrized(self) -> SymMatrix:
        """``(T + T') / 2``."""
        m = self.m
        e = self.entries
        return SymMatrix(
            tuple(tuple((e[i][j] + e[j][i]) / 2 for j in range(m)) for i in range(m))
        )

    def is_doubly_stochastic(self) -> bool:
        return self.k == 1 and all(sum(col, Fraction(0)) == 1 for col in self.transpose())


def _combine(a: Grid, b: Grid, sign: int) -> Grid:
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")
    return tuple(tuple(x + sign * y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def ones(m: int) -> SymMatrix:
    return SymMatrix(tuple(tuple(Fraction(1) for _ in range(m)) for _ in range(m)))


def identity(m: int) -> SymMatrix:
    return SymMatrix(tuple(tuple(Fraction(int(i == j)) for j in range(m)) for i in range(m)))


def half_offdiagonal(m: int = 3) -> SymMatrix:
    """Zero diagonal, ``1/2`` elsewhere. For m=3 this is in U_1 but not extreme."""
    h = Fraction(1, 2)
    return SymMatrix(
        tuple(tuple(Fraction(0) if i == j else h for j in range(m)) for i in range(m))
    )


def nonempty_subsets(m: int) -> list[Subset]:
    """All nonempty subsets of ``range(m)`` in lexicographic order."""
    subsets = [s for r in range(1, m + 1) for s in combinations(range(m), r)]
    subsets.sort()
    return subsets


@dataclass(frozen=True)
class Membership:
    """Outcome of a class-membership test, truthy when the test passed.

    On a failed U_1 test exactly one of ``subset`` (a violated subset-sum
    condition) or ``total`` (the total when it differs from ``m``) is set.
    On a passed U_k test ``witness`` holds a matrix ``T`` in T_k with
    ``(T + T')/2 = A``.
    """

    member: bool
    subset: Subset | None = None
    subset_sum: Fraction | None = None
    total: Fraction | None = None
    witness: RowSumMatrix | None = None

    def __bool__(self) -> bool:
        return self.member

    def violation_point(self, m: int) -> SimplexVector | None:
        """Point where the quadratic form leaves the k=1 bounds, if failed.

        For a violated subset this is the uniform distribution on it; for a
        wrong total it is the barycenter.
        """
        if self.member:
            return None
        if self.subset is not None:
            return SimplexVector.uniform_on(m, self.subset)
        return SimplexVector.center(m)


def in_U1(a: SymMatrix) -> Membership:
    """Subset-sum test for membership in U_1.

    Checks ``sum_{i,j in S} a_ij <= |S|`` for every nonempty ``S`` and that
    the total is exactly ``m``. The reported subset is the lexicographically
    smallest violated one.
    """
    for s in nonempty_subsets(a.m):
        total = a.subset_sum(s)
        if total > len(s):
            return Membership(False, subset=s, subset_sum=total)
    total = a.total()
    if total != a.m:
        return Membership(False, total=total)
    return Membership(True)


def _reduced_uk_system(a: SymMatrix, k: int):
    """Feasibility system for ``T`` in T_k with ``(T + T')/2 = A``.

    Diagonal entries are fixed to ``a_ii`` and ``t_ji`` is eliminated as
    ``2 a_ij - t_ij``, leaving one variable per pair ``i < j``:
    ``s_ij = t_ij - lo_ij`` with ``0 <= s_ij <= hi_ij - lo_ij``. Returns None
    when a bound already rules the system out.
    """
    m = a.m
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    lo: dict[tuple[int, int], Fraction] = {}
    if any(a[i, i] > 1 for i in range(m)):
        return None
    ineqs = []
    for n, (i, j) in enumerate(pairs):
        two_a = 2 * a[i, j]
        low, high = max(Fraction(0), two_a - 1), min(Fraction(1), two_a)
        if low > high:
            return None
        lo[i, j] = low
        unit = [Fraction(0)] * len(pairs)
        unit[n] = Fraction(-1)
        ineqs.append((tuple(unit), Fraction(0)))
        unit = [Fraction(0)] * len(pairs)
        unit[n] = Fraction(1)
        ineqs.append((tuple(unit), high - low))
    eqs = []
    for r in range(m):
        coeffs = [Fraction(0)] * len(pairs)
        rhs = Fraction(k) - a[r, r]
        for n, (i, j) in enumerate(pairs):
            if i == r:
                coeffs[n] = Fraction(1)
                rhs -= lo[i, j]
            elif j == r:
                coeffs[n] = Fraction(-1)
                rhs -= 2 * a[i, j] - lo[i, j]
        eqs.append((tuple(coeffs), rhs))
    return ConstraintSystem(len(pairs), tuple(eqs), tuple(ineqs)), pairs, lo


def in_Uk(a: SymMatrix, k: int) -> Membership:
    """Decide ``A in U_k`` exactly; on success carry a witness ``T`` in T_k."""
    m = a.m
    if not 1 <= k <= m:
        raise ValueError(f"k={k} outside 1..{m}")
    built = _reduced_uk_system(a, k)
    if built is None:
        return Membership(False)
    system, pairs, lo = built
    point = feasible(system)
    if point is None:
        return Membership(False)
    t = [[Fraction(0)] * m for _ in range(m)]
    for i in range(m):
        t[i][i] = a[i, i]
    for s, (i, j) in zip(point, pairs):
        t[i][j] = lo[i, j] + s
        t[j][i] = 2 * a[i, j] - t[i][j]
    witness = RowSumMatrix(tuple(map(tuple, t)), k)
    assert witness.symmetrized() == a
    return Membership(True, witness=witness)


class NotInU1Error(ValueError):
    """The matrix fails the U_1 test; ``membership`` says where."""

    def __init__(self, membership: Membership):
        self.membership = membership
        if membership.subset is not None:
            where = (
                f"subset {[i + 1 for i in membership.subset]} sums to "
                f"{membership.subset_sum} > {len(membership.subset)}"
            )
        else:
            where = f"total is {membership.total}"
        super().__init__(f"matrix is not in U_1: {where}")


def solve_symmetrization(a: SymMatrix) -> RowSumMatrix:
    """A stochastic ``T`` with ``(T + T')/2 = A``.

    Raises:
        NotInU1Error: if ``A`` fails the U_1 test; no such ``T`` exists.
    """
    check = in_U1(a)
    if not check:
        raise NotInU1Error(check)
    result = in_Uk(a, 1)
    assert result.witness is not None
    return result.witness


def solution_polytope(a: SymMatrix) -> ConstraintSystem:
    """All stochastic solutions ``T`` of ``(T + T')/2 = A`` as an H-polytope.

    Variables are the ``m*m`` entries of ``T`` in row-major order.
    """
    m = a.m
    n = m * m

    def unit(*idx: int) -> tuple[Fraction, ...]:
        v = [Fraction(0)] * n
        for i in idx:
            v[i] = Fraction(1)
        return tuple(v)

    eqs = []
    for i in range(m):
        eqs.append((unit(i * m + i), a[i, i]))
        for j in range(i + 1, m):
            eqs.append((unit(i * m + j, j * m + i), 2 * a[i, j]))
    for i in range(m):
        eqs.append((unit(*range(i * m, i * m + m)), Fraction(1)))
    ineqs = []
    for p in range(n):
        ineqs.append((tuple(-c for c in unit(p)), Fraction(0)))
        ineqs.append((unit(p), Fraction(1)))
    return ConstraintSystem(n, tuple(eqs), tuple(ineqs))


def matrix_from_flat(m: int, coords: Sequence[Fraction], k: int = 1) -> RowSumMatrix:
    return RowSumMatrix(tuple(tuple(coords[i * m:(i + 1) * m]) for i in range(m)), k)


def quadratic_form(a: SymMatrix | RowSumMatrix | Grid, x: SimplexVector) -> Fraction:
    """``(A x, x) = sum_ij a_ij x_i x_j``; also accepts a T_k matrix or raw grid."""
    entries = a if isinstance(a, tuple) else a.entries
    if len(entries) != x.m:
        raise ValueError(f"dimension mismatch: matrix {len(entries)}, point {x.m}")
    total = Fraction(0)
    for i, xi in enumerate(x.coords):
        if xi:
            total += xi * sum(
                (v * xj for v, xj in zip(entries[i], x.coords) if v and xj), Fraction(0)
            )
    return total


def form_bounds(a: SymMatrix, k: int, x: SimplexVector) -> tuple[Fraction, Fraction, Fraction]:
    """``(sum of k smallest x_i, (Ax, x), sum of k largest x_i)``."""
    if a.m != x.m:
        raise ValueError(f"dimension mismatch: matrix {a.m}, point {x.m}")
    if not 1 <= k <= a.m:
        raise ValueError(f"k={k} outside 1..{a.m}")
    return smallest_sum(x.coords, k), quadratic_form(a, x), largest_sum(x.coords, k)


def check_form_bounds(a: SymMatrix, k: int, x: SimplexVector) -> bool:
    lo, value, hi = form_bounds(a, k, x)
    return lo <= value <= hi


def _check_permutation(g: Sequence[int], m: int) -> None:
    if sorted(g) != list(range(m)):
        raise ValueError(f"{list(g)} is not a permutation of 0..{m - 1}")


def permute_matrix(a, g: Sequence[int]):
    """Row-and-column permutation ``A_g = (a_{g(i) g(j)})`` with 0-based ``g``.

    Works for :class:`SymMatrix` and :class:`RowSumMatrix` alike.
    """
    m = a.m
    _check_permutation(g, m)
    e = a.entries
    grid = tuple(tuple(e[g[i]][g[j]] for j in range(m)) for i in range(m))
    if isinstance(a, RowSumMatrix):
        return RowSumMatrix(grid, a.k)
    return SymMatrix(grid)


def inverse_permutation(g: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(g)
    for i, gi in enumerate(g):
        inv[gi] = i
    return tuple(inv)


# ---------------------------------------------------------------------------
# Random instances for property checks


def random_row_sum_matrix(
    m: int, k: int, rng: random.Random, denominator: int = 12
) -> RowSumMatrix:
    """Random member of T_k with rational entries.

    Rows are random integer weights scaled to sum ``k``; entries above 1 are
    capped and the excess is spread over the uncapped entries in proportion
    to their size (evenly if they are all zero), until every entry fits.
    """
    if not 1 <= k <= m:
        raise ValueError(f"k={k} outside 1..{m}")
    rows = []
    for _ in range(m):
        weights = [rng.randint(0, denominator) for _ in range(m)]
        if not any(weights):
            weights[rng.randrange(m)] = 1
        total = sum(weights)
        row = [Fraction(k * w, total) for w in weights]
        capped = [False] * m
        while any(v > 1 for v in row):
            excess = Fraction(0)
            for j, v in enumerate(row):
                if v >= 1:
                    excess += v - 1
                    row[j] = Fraction(1)
                    capped[j] = True
            free = [j for j in range(m) if not capped[j]]
            mass = sum((row[j] for j in free), Fraction(0))
            for j in free:
                row[j] += excess * row[j] / mass if mass else excess / len(free)
        rows.append(tuple(row))
    return RowSumMatrix(tuple(rows), k)


def random_uk_member(
    m: int, k: int, rng: random.Random, denominator: int = 12
) -> tuple[SymMatrix, RowSumMatrix]:
    """``(A, T)`` with ``T`` random in T_k and ``A = (T + T')/2``."""
    t = random_row_sum_matrix(m, k, rng, denominator)
    return t.symmetrized(), t


def random_simplex_point(m: int, rng: random.Random, denominator: int = 720) -> SimplexVector:
    """Uniformly random composition of ``denominator`` into ``m`` parts, scaled."""
    cuts = sorted(rng.randint(0, denominator) for _ in range(m - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [denominator])]
    return SimplexVector(tuple(Fraction(p, denominator) for p in parts))
