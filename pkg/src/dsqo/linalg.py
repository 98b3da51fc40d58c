"""Exact rational linear algebra: rank, feasibility and vertex enumeration.

Everything here works on :class:`fractions.Fraction` values. There is no
floating point in any decision path, so "is this constraint tight" and "is
this system feasible" are answered exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vector = tuple[Fraction, ...]
Row = tuple[Vector, Fraction]

DEFAULT_VERTEX_DIMENSION_CAP = 20


class PolytopeError(ValueError):
    """Raised when a constraint system is empty, unbounded or too large."""


def as_fraction(value: object) -> Fraction:
    """Convert ints, Fractions and strings like ``"0.1"`` or ``"1/3"`` exactly.

    Floats are rejected: ``Fraction(0.1)`` is not one tenth.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational number: {value!r}") from exc
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def as_vector(values: Iterable[object]) -> Vector:
    return tuple(as_fraction(v) for v in values)


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    total = Fraction(0)
    for x, y in zip(a, b):
        if x and y:
            total += x * y
    return total


def _integer_row(row: Sequence[Fraction]) -> list[int]:
    """Scale a rational row to a primitive integer row (same direction)."""
    denom = 1
    for v in row:
        denom = denom * v.denominator // gcd(denom, v.denominator)
    ints = [int(v * denom) for v in row]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def rank(rows: Sequence[Sequence[object]]) -> int:
    """Exact rank of a rational matrix given as a sequence of rows.

    Rows are scaled to integers and reduced by fraction-free (Bareiss)
    elimination, so intermediate values stay integral.
    """
    mat = [_integer_row(as_vector(r)) for r in rows]
    mat = [r for r in mat if any(r)]
    if not mat:
        return 0
    ncols = len(mat[0])
    r = 0
    prev = 1
    for c in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        p = mat[r][c]
        for i in range(r + 1, len(mat)):
            f = mat[i][c]
            row_i = mat[i]
            row_r = mat[r]
            mat[i] = [(p * row_i[j] - f * row_r[j]) // prev for j in range(ncols)]
        prev = p
        r += 1
        if r == len(mat):
            break
    return r


def nullspace_basis(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[Vector]:
    """Basis of ``{y : R y = 0}`` via reduced row echelon form."""
    mat = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        p = mat[r][c]
        mat[r] = [v / p for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -mat[i][fc]
        basis.append(tuple(vec))
    return basis


def solve_particular(
    rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction], ncols: int
) -> Vector | None:
    """One solution of ``R x = rhs`` (free variables set to zero), or None."""
    mat = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        p = mat[r][c]
        mat[r] = [v / p for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    for i in range(r, len(mat)):
        if mat[i][ncols] != 0:
            return None
    x = [Fraction(0)] * ncols
    for i, pc in enumerate(pivots):
        x[pc] = mat[i][ncols]
    return tuple(x)


@dataclass(frozen=True)
class ConstraintSystem:
    """H-representation ``{x : E x = e, G x <= g}`` with rational data."""

    dimension: int
    equalities: tuple[Row, ...] = ()
    inequalities: tuple[Row, ...] = ()

    def __post_init__(self) -> None:
        for coeffs, _ in self.equalities + self.inequalities:
            if len(coeffs) != self.dimension:
                raise ValueError(
                    f"coefficient vector of length {len(coeffs)} in a "
                    f"{self.dimension}-dimensional system"
                )

    @classmethod
    def build(
        cls,
        dimension: int,
        equalities: Iterable[tuple[Iterable[object], object]] = (),
        inequalities: Iterable[tuple[Iterable[object], object]] = (),
    ) -> ConstraintSystem:
        return cls(
            dimension,
            tuple((as_vector(c), as_fraction(b)) for c, b in equalities),
            tuple((as_vector(c), as_fraction(b)) for c, b in inequalities),
        )

    def satisfies(self, x: Sequence[Fraction]) -> bool:
        if len(x) != self.dimension:
            return False
        return all(dot(c, x) == b for c, b in self.equalities) and all(
            dot(c, x) <= b for c, b in self.inequalities
        )

    def active_rows(self, x: Sequence[Fraction]) -> list[Vector]:
        """Equalities plus the inequalities that are tight at ``x``."""
        rows = [c for c, _ in self.equalities]
        rows.extend(c for c, b in self.inequalities if dot(c, x) == b)
        return rows

    def is_vertex(self, x: Sequence[Fraction]) -> bool:
        return self.satisfies(x) and rank(self.active_rows(x)) == self.dimension


# ---------------------------------------------------------------------------
# Feasibility: phase-one simplex with Bland's rule


def feasible(system: ConstraintSystem) -> Vector | None:
    """Return a point satisfying ``system`` exactly, or None if there is none.

    Variables are free unless the system carries an explicit ``-x_j <= 0``
    row, in which case that row is dropped and ``x_j`` enters the tableau as
    a nonnegative column; other free variables are split as ``x+ - x-``.
    Phase one minimises the sum of artificials with Bland's rule, which
    cannot cycle.
    """
    d = system.dimension
    nonneg = [False] * d
    rows: list[tuple[Vector, Fraction, bool]] = []  # (coeffs, rhs, is_inequality)
    for c, b in system.inequalities:
        nz = [j for j, v in enumerate(c) if v != 0]
        if len(nz) == 1 and c[nz[0]] < 0 and b == 0:
            nonneg[nz[0]] = True
            continue
        if not nz:
            if b < 0:
                return None
            continue
        rows.append((c, b, True))
    for c, b in system.equalities:
        if not any(c):
            if b != 0:
                return None
            continue
        rows.append((c, b, False))

    # column layout: structural (+ split negatives), slacks, artificials
    cols: list[tuple[int, int]] = []  # (variable, sign)
    for j in range(d):
        cols.append((j, 1))
        if not nonneg[j]:
            cols.append((j, -1))
    n_struct = len(cols)
    n_slack = sum(1 for _, _, ineq in rows if ineq)

    tableau: list[list[Fraction]] = []
    basis: list[int] = []
    artificial_rows: list[int] = []
    slack_idx = n_struct
    pending: list[tuple[list[Fraction], Fraction, int | None, int]] = []
    for c, b, ineq in rows:
        line = [c[j] * s for j, s in cols] + [Fraction(0)] * n_slack
        sign = 1
        slack_col = None
        if ineq:
            slack_col = slack_idx
            line[slack_col] = Fraction(1)
            slack_idx += 1
        if b < 0:
            sign = -1
            line = [-v for v in line]
        pending.append((line, b * sign, slack_col, sign))

    n_art = sum(
        1 for _, _, slack_col, sign in pending if slack_col is None or sign < 0
    )
    width = n_struct + n_slack + n_art
    art_idx = n_struct + n_slack
    for line, rhs, slack_col, sign in pending:
        line = line + [Fraction(0)] * n_art
        if slack_col is not None and sign > 0:
            basis.append(slack_col)
        else:
            line[art_idx] = Fraction(1)
            basis.append(art_idx)
            artificial_rows.append(len(tableau))
            art_idx += 1
        line.append(rhs)
        tableau.append(line)

    first_art = n_struct + n_slack
    # reduced costs for min sum(artificials): cost row = -sum of artificial rows
    cost = [Fraction(0)] * (width + 1)
    for i in artificial_rows:
        for j, v in enumerate(tableau[i]):
            if v:
                cost[j] -= v
    for j in range(first_art, width):
        cost[j] = Fraction(0)

    while True:
        entering = next((j for j in range(width) if cost[j] < 0), None)
        if entering is None:
            break
        best: tuple[Fraction, int, int] | None = None
        for i, line in enumerate(tableau):
            a = line[entering]
            if a > 0:
                cand = (line[width] / a, basis[i], i)
                if best is None or cand[:2] < best[:2]:
                    best = cand
        if best is None:
            # the phase-one objective is bounded below by 0
            raise AssertionError("phase one unbounded")
        _pivot(tableau, cost, best[2], entering)
        basis[best[2]] = entering

    if cost[width] != 0:
        return None
    x = [Fraction(0)] * d
    for i, var in enumerate(basis):
        if var < n_struct:
            j, s = cols[var]
            x[j] += s * tableau[i][width]
    point = tuple(x)
    assert system.satisfies(point)
    return point


def _pivot(tableau: list[list[Fraction]], cost: list[Fraction], r: int, c: int) -> None:
    prow = tableau[r]
    p = prow[c]
    if p != 1:
        prow[:] = [v / p for v in prow]
    nz = [j for j, v in enumerate(prow) if v]
    for i, line in enumerate(tableau):
        if i != r:
            f = line[c]
            if f:
                for j in nz:
                    line[j] -= f * prow[j]
    f = cost[c]
    if f:
        for j in nz:
            cost[j] -= f * prow[j]


# ---------------------------------------------------------------------------
# Vertex enumeration: double description on the homogenised cone


def _primitive(vec: Sequence[Fraction]) -> tuple[int, ...]:
    return tuple(_integer_row(vec))


def enumerate_vertices(
    system: ConstraintSystem, max_dimension: int = DEFAULT_VERTEX_DIMENSION_CAP
) -> list[Vector]:
    """All vertices of a bounded nonempty polytope, sorted lexicographically.

    The equalities are eliminated by an exact affine parametrisation
    ``x = x0 + N y``; the remaining inequalities are homogenised to the cone
    ``{(y, t) : G N y <= (g - G x0) t, t >= 0}`` whose extreme rays with
    ``t > 0`` are the vertices. Rays are built by the double description
    method with the combinatorial adjacency test.

    Raises:
        PolytopeError: if the system is empty or unbounded, or if
            ``system.dimension`` exceeds ``max_dimension``.
    """
    d = system.dimension
    if d > max_dimension:
        raise PolytopeError(
            f"refusing vertex enumeration in dimension {d} (cap {max_dimension})"
        )
    eq_rows = [c for c, _ in system.equalities]
    eq_rhs = [b for _, b in system.equalities]
    x0 = solve_particular(eq_rows, eq_rhs, d) if eq_rows else tuple([Fraction(0)] * d)
    if x0 is None:
        raise PolytopeError("polytope is empty: equalities are inconsistent")
    basis = nullspace_basis(eq_rows, d) if eq_rows else [
        tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)
    ]
    k = len(basis)

    # reduced inequalities h . (y, t) <= 0 with h = (G N, -(g - G x0))
    hs: list[tuple[int, ...]] = []
    for c, b in system.inequalities:
        red = [dot(c, v) for v in basis]
        slack = b - dot(c, x0)
        if not any(red):
            if slack < 0:
                raise PolytopeError("polytope is empty: inconsistent constant row")
            continue
        hs.append(_primitive(red + [-slack]))
    hs.append(tuple([0] * k + [-1]))  # t >= 0
    hs = list(dict.fromkeys(hs))

    if k == 0:
        if system.satisfies(x0):
            return [x0]
        raise PolytopeError("polytope is empty")

    rays = _double_description(hs, k + 1, system)
    vertices = []
    for ray in rays:
        t = ray[k]
        if t == 0:
            raise PolytopeError("polytope is unbounded")
        y = [Fraction(v, t) for v in ray[:k]]
        x = tuple(
            x0[j] + sum((y[i] * basis[i][j] for i in range(k) if y[i]), Fraction(0))
            for j in range(d)
        )
        vertices.append(x)
    if not vertices:
        raise PolytopeError("polytope is empty")
    vertices.sort()
    for v in vertices:
        assert system.is_vertex(v)
    return vertices


def _idot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b) if x and y)


def _double_description(
    hs: list[tuple[int, ...]], n: int, system: ConstraintSystem
) -> list[tuple[int, ...]]:
    """Extreme rays of the pointed cone ``{z : h . z <= 0 for h in hs}``."""
    # pick n linearly independent rows for the initial simplicial cone
    chosen: list[int] = []
    for i in range(len(hs)):
        if rank([hs[j] for j in chosen + [i]]) == len(chosen) + 1:
            chosen.append(i)
            if len(chosen) == n:
                break
    if len(chosen) < n:
        if feasible(system) is None:
            raise PolytopeError("polytope is empty")
        raise PolytopeError("polytope is unbounded")

    # initial rays: columns of -H^{-1}; ray r_i is tight on every chosen row but i
    h_mat = [[Fraction(v) for v in hs[i]] for i in chosen]
    inv = _inverse(h_mat)
    rays: list[tuple[int, ...]] = []
    for col in range(n):
        rays.append(_primitive([-inv[row][col] for row in range(n)]))

    processed: list[int] = list(chosen)
    remaining = [i for i in range(len(hs)) if i not in set(chosen)]
    # tight sets as bitmasks over indices into hs
    tight = [_tight_mask(r, hs, processed) for r in rays]

    for idx in remaining:
        h = hs[idx]
        vals = [_idot(h, r) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zero = [i for i, v in enumerate(vals) if v == 0]
        bit = 1 << idx
        new_rays: list[tuple[int, ...]] = []
        new_tight: list[int] = []
        if pos and neg:
            need = n - 2
            for i in pos:
                ti = tight[i]
                for j in neg:
                    common = ti & tight[j]
                    if common.bit_count() < need:
                        continue
                    if not _adjacent(common, i, j, tight):
                        continue
                    vi, vj = vals[i], vals[j]
                    comb = [vi * b - vj * a for a, b in zip(rays[i], rays[j])]
                    g = 0
                    for v in comb:
                        g = gcd(g, v)
                    new_rays.append(tuple(v // g for v in comb))
                    new_tight.append(common | bit)
        rays = [rays[i] for i in neg + zero] + new_rays
        tight = (
            [tight[i] for i in neg]
            + [tight[i] | bit for i in zero]
            + new_tight
        )
        processed.append(idx)
    return rays


def _adjacent(common: int, i: int, j: int, tight: list[int]) -> bool:
    """Combinatorial test: no third ray is tight on every row ``i`` and ``j`` share."""
    for k, mask in enumerate(tight):
        if k != i and k != j and mask & common == common:
            return False
    return True


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _tight_mask(ray: Sequence[int], hs: list[tuple[int, ...]], rows: list[int]) -> int:
    mask = 0
    for i in rows:
        if _idot(hs[i], ray) == 0:
            mask |= 1 << i
    return mask


def _inverse(mat: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(mat)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for c in range(n):
        p = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [v / piv for v in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]
