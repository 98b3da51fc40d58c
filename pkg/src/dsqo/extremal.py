"""Extreme points of U_1 and of the polytope B of doubly stochastic operators.

Both sets are written as H-polytopes over upper-triangular coordinates. Extreme
points are found two ways: a structured search over candidates with entries in
``{0, 1/2, 1}`` filtered by the active-constraint rank test, and generic double
description on the same system. The two are compared when requested.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Literal, Sequence

from .linalg import ConstraintSystem, PolytopeError, enumerate_vertices
from .matrix_classes import SymMatrix, half_offdiagonal, in_U1, ones
from .qso import QsoTensor, is_dsqo

U1_ENUMERATION_CAP = 4
B_SUPPORTED = (2, 3)

HALF = Fraction(1, 2)
ZERO = Fraction(0)
ONE = Fraction(1)


class EnumerationError(ValueError):
    """Enumeration refused (size outside the supported range) or inconsistent."""


@dataclass(frozen=True)
class PolytopePoint:
    coords: tuple[Fraction, ...]
    polytope: Literal["U1", "B", "solutions"]

    @property
    def dimension(self) -> int:
        return len(self.coords)


def _pairs(m: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(m) for j in range(i, m)]


def _subset_row(m: int, subset: Sequence[int]) -> list[Fraction]:
    members = set(subset)
    return [
        Fraction(1 if i == j else 2) if i in members and j in members else ZERO
        for i, j in _pairs(m)
    ]


def _u1_rows(m: int) -> tuple[list, list]:
    n = m * (m + 1) // 2
    eqs = [(_subset_row(m, range(m)), Fraction(m))]
    ineqs = []
    for p in range(n):
        row = [ZERO] * n
        row[p] = -ONE
        ineqs.append((row, ZERO))
    for r in range(1, m):
        for sub in combinations(range(m), r):
            ineqs.append((_subset_row(m, sub), Fraction(r)))
    return eqs, ineqs


def u1_constraints(m: int) -> ConstraintSystem:
    """U_1 over the ``m(m+1)/2`` coordinates ``a_ij, i <= j``.

    Rows: nonnegativity, one subset-sum inequality per nonempty proper subset
    and the total-sum equality.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    eqs, ineqs = _u1_rows(m)
    return ConstraintSystem.build(m * (m + 1) // 2, eqs, ineqs)


def b_constraints(m: int) -> ConstraintSystem:
    """B over ``m * m(m+1)/2`` coordinates, slice-major (see ``QsoTensor.coordinates``)."""
    if m < 2:
        raise ValueError("m must be at least 2")
    n = m * (m + 1) // 2
    dim = m * n
    eqs, ineqs = [], []
    slice_eqs, slice_ineqs = _u1_rows(m)
    for k in range(m):
        pad_l, pad_r = [ZERO] * (k * n), [ZERO] * ((m - 1 - k) * n)
        eqs.extend((pad_l + row + pad_r, b) for row, b in slice_eqs)
        ineqs.extend((pad_l + row + pad_r, b) for row, b in slice_ineqs)
    for p in range(n):
        eqs.append(([ONE if q % n == p else ZERO for q in range(dim)], ONE))
    return ConstraintSystem.build(dim, eqs, ineqs)


def _coords(point) -> tuple[Fraction, ...]:
    if isinstance(point, PolytopePoint):
        return point.coords
    if isinstance(point, SymMatrix):
        return point.upper()
    if isinstance(point, QsoTensor):
        return point.coordinates()
    return tuple(point)


def is_extreme(point, system: ConstraintSystem) -> bool:
    """Vertex test: the active rows at ``point`` have full column rank.

    ``point`` may be a coordinate sequence, a :class:`PolytopePoint`, a
    :class:`SymMatrix` (against :func:`u1_constraints`) or a
    :class:`QsoTensor` (against :func:`b_constraints`).

    Raises:
        ValueError: if the point does not satisfy the system.
    """
    x = _coords(point)
    if not system.satisfies(x):
        raise ValueError("point does not satisfy the constraint system")
    return system.is_vertex(x)


def enumerate_extreme_u1(
    m: int, cap: int = U1_ENUMERATION_CAP, oracle: bool = False
) -> list[SymMatrix]:
    """Extreme points of U_1 in lexicographic order of their coordinates.

    Candidates have diagonal entries in ``{0, 1}`` and off-diagonal entries
    in ``{0, 1/2, 1}``; each is kept if it is in U_1 and passes the vertex
    test. With ``oracle=True`` the result is compared against double
    description on :func:`u1_constraints` and a mismatch raises.
    """
    if not 2 <= m <= cap:
        raise EnumerationError(f"U_1 enumeration supports 2 <= m <= {cap}, got m={m}")
    system = u1_constraints(m)
    choices = [(ZERO, ONE) if i == j else (ZERO, HALF, ONE) for i, j in _pairs(m)]
    found = []
    for coords in product(*choices):
        a = SymMatrix.from_upper(m, coords)
        if in_U1(a) and system.is_vertex(coords):
            found.append(coords)
    found.sort()
    if oracle:
        vertices = enumerate_vertices(system)
        if vertices != found:
            raise EnumerationError(
                f"grid found {len(found)} extreme points, double description {len(vertices)}"
            )
    return [SymMatrix.from_upper(m, c) for c in found]


_SLICE_SPLITS = {
    m: sorted(
        {
            split
            for split in product((ZERO, HALF, ONE), repeat=m)
            if sum(split) == 1
        }
    )
    for m in B_SUPPORTED
}


def enumerate_extreme_b(m: int, oracle: bool = False) -> list[QsoTensor]:
    """Extreme points of B for ``m`` in {2, 3}, lexicographically ordered.

    For each pair ``i <= j`` the coefficients ``(p_{ij,1}, ..., p_{ij,m})``
    range over splits of 1 into parts from ``{0, 1/2, 1}``; candidates in B
    that pass the vertex test against :func:`b_constraints` are kept. With
    ``oracle=True`` the list is compared against double description.
    """
    if m not in B_SUPPORTED:
        raise EnumerationError(f"B enumeration supports m in {B_SUPPORTED}, got m={m}")
    system = b_constraints(m)
    n = m * (m + 1) // 2
    found = []
    for choice in product(_SLICE_SPLITS[m], repeat=n):
        coords = tuple(choice[p][k] for k in range(m) for p in range(n))
        if system.is_vertex(coords):
            found.append(coords)
    found.sort()
    if oracle:
        vertices = enumerate_vertices(system)
        if vertices != found:
            raise EnumerationError(
                f"grid found {len(found)} extreme points, double description {len(vertices)}"
            )
    return [QsoTensor.from_coordinates(m, c) for c in found]


def double_description_b(m: int) -> list[QsoTensor]:
    """Vertices of :func:`b_constraints` by double description alone."""
    try:
        vertices = enumerate_vertices(b_constraints(m))
    except PolytopeError as exc:
        raise EnumerationError(str(exc)) from exc
    return [QsoTensor.from_coordinates(m, c) for c in vertices]


def count_triples(extremes: Sequence[SymMatrix]) -> tuple[int, int]:
    """Unordered triples from the 3x3 U_1 extreme points whose sum is all ones.

    Returns ``(triples of three extreme points, pairs {X, Y} with M + X + Y = E)``
    where ``M`` has zero diagonal and ``1/2`` elsewhere.
    """
    if len(extremes) != 25:
        raise ValueError(f"expected the 25 extreme points of U_1 for m=3, got {len(extremes)}")
    target = ones(3).upper()
    coords = [a.upper() for a in extremes]

    def add(*vs):
        return tuple(sum(t, ZERO) for t in zip(*vs))

    all_extreme = sum(
        1
        for x, y, z in _multisets(coords, 3)
        if add(x, y, z) == target
    )
    m_coords = half_offdiagonal(3).upper()
    with_m = sum(1 for x, y in _multisets(coords, 2) if add(m_coords, x, y) == target)
    return all_extreme, with_m


def _multisets(items: list, r: int):
    """Unordered selections with repetition, by index."""
    def rec(start, left, acc):
        if left == 0:
            yield tuple(acc)
            return
        for i in range(start, len(items)):
            acc.append(items[i])
            yield from rec(i, left - 1, acc)
            acc.pop()
    yield from rec(0, r, [])


def expand_triples(extremes: Sequence[SymMatrix]) -> list[QsoTensor]:
    """All orderings of the triples counted by :func:`count_triples`, as operators."""
    target = ones(3).upper()
    coords = [a.upper() for a in extremes]
    m_coords = half_offdiagonal(3).upper()
    triples = [
        t for t in _multisets(coords, 3)
        if tuple(sum(v, ZERO) for v in zip(*t)) == target
    ]
    triples += [
        (m_coords, x, y) for x, y in _multisets(coords, 2)
        if tuple(sum(v, ZERO) for v in zip(m_coords, x, y)) == target
    ]
    ops = {perm for t in triples for perm in permutations(t)}
    return [
        QsoTensor(tuple(SymMatrix.from_upper(3, s) for s in op)) for op in sorted(ops)
    ]


def extreme_slice_count(v: QsoTensor) -> int:
    """How many slices of ``v`` are extreme points of U_1."""
    system = u1_constraints(v.m)
    return sum(1 for a in v.slices if system.is_vertex(a.upper()))


def two_slice_criterion_holds(v: QsoTensor) -> bool:
    """For m=3: ``v`` extreme in B iff at least two of its slices are extreme in U_1.

    Returns whether that equivalence holds for ``v``.

    Raises:
        ValueError: if ``v`` is not a doubly stochastic operator with m=3.
    """
    if v.m != 3:
        raise ValueError(f"criterion is stated for m=3, got m={v.m}")
    if not is_dsqo(v):
        raise ValueError("operator is not doubly stochastic")
    extreme = b_constraints(3).is_vertex(v.coordinates())
    return extreme == (extreme_slice_count(v) >= 2)
