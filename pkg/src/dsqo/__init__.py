"""Exact arithmetic for doubly stochastic quadratic operators on the simplex."""

from .extremal import (
    b_constraints,
    count_triples,
    enumerate_extreme_b,
    enumerate_extreme_u1,
    is_extreme,
    two_slice_criterion_holds,
    u1_constraints,
)
from .linalg import ConstraintSystem, PolytopeError, enumerate_vertices, feasible, rank
from .majorization import SimplexVector, majorizes, rearrange_down
from .matrix_classes import (
    RowSumMatrix,
    SymMatrix,
    check_form_bounds,
    in_U1,
    in_Uk,
    permute_matrix,
    quadratic_form,
    solution_polytope,
    solve_symmetrization,
)
from .qso import (
    QsoTensor,
    apply,
    check_necessary_conditions,
    complete_to_dsqo,
    is_dsqo,
    majorization_witness,
    permute_qso,
)

__all__ = [
    "ConstraintSystem",
    "PolytopeError",
    "QsoTensor",
    "RowSumMatrix",
    "SimplexVector",
    "SymMatrix",
    "apply",
    "b_constraints",
    "check_form_bounds",
    "check_necessary_conditions",
    "complete_to_dsqo",
    "count_triples",
    "enumerate_extreme_b",
    "enumerate_extreme_u1",
    "enumerate_vertices",
    "feasible",
    "in_U1",
    "in_Uk",
    "is_dsqo",
    "is_extreme",
    "majorization_witness",
    "majorizes",
    "permute_matrix",
    "permute_qso",
    "quadratic_form",
    "rank",
    "rearrange_down",
    "solution_polytope",
    "solve_symmetrization",
    "two_slice_criterion_holds",
    "u1_constraints",
]
