from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dsqo.linalg import (
    ConstraintSystem,
    PolytopeError,
    as_fraction,
    enumerate_vertices,
    feasible,
    rank,
)
from dsqo.matrix_classes import solution_polytope

from conftest import example_matrix, t_alpha

F = Fraction


def test_decimal_strings_are_exact():
    assert as_fraction("0.1") == F(1, 10)
    assert as_fraction("1/3") == F(1, 3)
    assert as_fraction(" -2 ") == -2
    with pytest.raises(TypeError):
        as_fraction(0.1)
    with pytest.raises(ValueError):
        as_fraction("one half")


@pytest.mark.parametrize(
    "rows, expected",
    [
        ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3),
        ([[0, 0, 0], [0, 0, 0]], 0),
        ([[1, 2], [2, 4]], 1),
        ([[F(1, 2), F(1, 3)], [3, 2]], 1),
        ([[1, 2, 3], [4, 5, 6], [7, 8, 10]], 3),
        ([[1, 2, 3], [4, 5, 6], [7, 8, 9]], 2),
    ],
)
def test_rank(rows, expected):
    assert rank(rows) == expected


small_rows = st.lists(
    st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=6), min_size=3, max_size=3),
    min_size=1,
    max_size=5,
)


@given(small_rows, st.data())
@settings(max_examples=150, deadline=None)
def test_rank_invariant_under_swaps_and_scaling(rows, data):
    r = rank(rows)
    perm = data.draw(st.permutations(range(len(rows))))
    scales = data.draw(
        st.lists(
            st.fractions(min_value=-4, max_value=4, max_denominator=5).filter(bool),
            min_size=len(rows),
            max_size=len(rows),
        )
    )
    moved = [[scales[i] * v for v in rows[p]] for i, p in enumerate(perm)]
    assert rank(moved) == r


def unit_box(d: int, lo=0, hi=1) -> list:
    rows = []
    for j in range(d):
        e = [0] * d
        e[j] = -1
        rows.append((e, -lo))
        e = [0] * d
        e[j] = 1
        rows.append((e, hi))
    return rows


def test_feasible_interval():
    x = feasible(ConstraintSystem.build(1, [], unit_box(1)))
    assert x is not None and 0 <= x[0] <= 1


def test_infeasible_interval():
    assert feasible(ConstraintSystem.build(1, [], [([1], 0), ([-1], -1)])) is None


def test_feasible_free_variables_and_equalities():
    system = ConstraintSystem.build(3, [([1, 1, 1], 2), ([1, -1, 0], -5)], [([0, 0, 1], -1)])
    x = feasible(system)
    assert x is not None and system.satisfies(x)


def test_feasible_solution_polytope_of_example():
    system = solution_polytope(example_matrix())
    x = feasible(system)
    assert x is not None and system.satisfies(x)


def test_unit_square_vertices():
    verts = enumerate_vertices(ConstraintSystem.build(2, [], unit_box(2)))
    assert verts == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_simplex_vertices():
    system = ConstraintSystem.build(
        3, [([1, 1, 1], 1)], [([-1, 0, 0], 0), ([0, -1, 0], 0), ([0, 0, -1], 0)]
    )
    assert enumerate_vertices(system) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]


def test_example_solution_polytope_has_two_vertices():
    # oracle: scan alpha on a fine grid with the closed-form family; the
    # nonnegative members form [1/10, 6/10]
    feasible_alphas = [
        F(n, 100)
        for n in range(0, 101)
        if all(v >= 0 for row in t_alpha(F(n, 100)) for v in row)
    ]
    assert (min(feasible_alphas), max(feasible_alphas)) == (F(1, 10), F(6, 10))
    expected = sorted(
        tuple(v for row in t_alpha(a) for v in row) for a in (F(1, 10), F(6, 10))
    )
    assert enumerate_vertices(solution_polytope(example_matrix())) == expected


def test_empty_and_unbounded_are_errors():
    with pytest.raises(PolytopeError, match="empty"):
        enumerate_vertices(ConstraintSystem.build(1, [], [([1], 0), ([-1], -1)]))
    with pytest.raises(PolytopeError, match="empty"):
        enumerate_vertices(ConstraintSystem.build(2, [([1, 1], 1), ([1, 1], 2)], []))
    with pytest.raises(PolytopeError, match="unbounded"):
        enumerate_vertices(ConstraintSystem.build(2, [], [([-1, 0], 0), ([0, -1], 0)]))
    with pytest.raises(PolytopeError, match="unbounded"):
        enumerate_vertices(ConstraintSystem.build(1, [], [([-1], 0)]))


def test_dimension_cap():
    with pytest.raises(PolytopeError, match="cap"):
        enumerate_vertices(ConstraintSystem.build(21, [], unit_box(21)))
    with pytest.raises(PolytopeError, match="cap"):
        enumerate_vertices(ConstraintSystem.build(3, [], unit_box(3)), max_dimension=2)


def brute_force_vertices(system: ConstraintSystem) -> list[tuple[Fraction, ...]]:
    """Every feasible point where some d rows of full rank are tight."""
    from sympy import Matrix, Rational

    d = system.dimension
    rows = [(c, b) for c, b in system.equalities] + list(system.inequalities)
    found = set()
    for combo in combinations(range(len(rows)), d):
        mat = Matrix([[Rational(v.numerator, v.denominator) for v in rows[i][0]] for i in combo])
        if mat.rank() < d:
            continue
        rhs = Matrix([Rational(rows[i][1].numerator, rows[i][1].denominator) for i in combo])
        sol = mat.LUsolve(rhs)
        x = tuple(F(int(v.p), int(v.q)) for v in sol)
        if system.satisfies(x):
            found.add(x)
    return sorted(found)


def random_bounded_system(rng: random.Random, d: int) -> ConstraintSystem:
    ineqs = unit_box(d, lo=-2, hi=2)
    for _ in range(rng.randint(1, 4)):
        c = [rng.randint(-3, 3) for _ in range(d)]
        ineqs.append((c, rng.randint(-3, 4)))
    eqs = []
    if d == 3 and rng.random() < 0.3:
        eqs.append(([rng.randint(-2, 2) for _ in range(d)], rng.randint(-1, 1)))
    return ConstraintSystem.build(d, eqs, ineqs)


@pytest.mark.parametrize("seed", range(60))
def test_double_description_matches_brute_force(seed):
    rng = random.Random(seed)
    system = random_bounded_system(rng, rng.choice((2, 3)))
    expected = brute_force_vertices(system)
    if not expected:
        with pytest.raises(PolytopeError):
            enumerate_vertices(system)
        assert feasible(system) is None
        return
    verts = enumerate_vertices(system)
    assert verts == expected
    for v in verts:
        assert system.is_vertex(v)
    assert feasible(system) is not None


def test_degenerate_pyramid():
    # apex of a square pyramid has four tight facets in three dimensions
    ineqs = [([-1, 0, 0], 0), ([0, -1, 0], 0), ([0, 0, -1], 0)]
    ineqs += [([1, 0, 1], 2), ([0, 1, 1], 2), ([-1, 0, 1], 0), ([0, -1, 1], 0)]
    system = ConstraintSystem.build(3, [], ineqs)
    assert enumerate_vertices(system) == brute_force_vertices(system)
    assert len(enumerate_vertices(system)) == 5
