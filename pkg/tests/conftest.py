from __future__ import annotations

from fractions import Fraction

import pytest

from dsqo.matrix_classes import SymMatrix, half_offdiagonal
from dsqo.qso import QsoTensor

F = Fraction
H = Fraction(1, 2)


def example_matrix() -> SymMatrix:
    """Symmetric matrix with a one-parameter family of stochastic solutions."""
    return SymMatrix.of([["0.1", "0.3", "0.4"], ["0.3", "0.1", "0.5"], ["0.4", "0.5", "0.4"]])


def t_alpha(alpha: Fraction) -> list[list[Fraction]]:
    """Closed-form solution family for ``example_matrix``."""
    t = F(1, 10)
    return [
        [t, alpha, F(9, 10) - alpha],
        [F(6, 10) - alpha, t, F(3, 10) + alpha],
        [alpha - t, F(7, 10) - alpha, F(4, 10)],
    ]


def example_operator() -> QsoTensor:
    """x1' = x1x2 + x1x3 + x2x3, x2' = x2^2 + x3^2 + x1x3, x3' = x1^2 + x1x2 + x2x3."""
    return QsoTensor.of(
        [
            half_offdiagonal(3),
            [[0, 0, H], [0, 1, 0], [H, 0, 1]],
            [[1, H, 0], [H, 0, H], [0, H, 0]],
        ]
    )


def bad_two_point_operator() -> QsoTensor:
    return QsoTensor.of([[[1, 1], [1, 0]], [[0, 0], [0, 1]]])


@pytest.fixture
def a_example() -> SymMatrix:
    return example_matrix()


@pytest.fixture
def v_example() -> QsoTensor:
    return example_operator()
