"""JSON encoding of rationals, matrices, simplex points and operators.

Rationals travel as strings (``"0.5"`` or ``"1/2"``); integers are accepted
too. JSON floats are rejected because they are not exact. Index sets and
permutations are 1-based on the wire and 0-based in the library.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .linalg import as_fraction
from .majorization import SimplexError, SimplexVector
from .matrix_classes import RowSumMatrix, SymMatrix
from .qso import QsoTensor


class ValidationError(ValueError):
    """Input does not decode to a valid object; the message names the first problem."""


def read_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def _rational(value: Any, where: str) -> Fraction:
    if isinstance(value, float):
        raise ValidationError(f"{where}: JSON number {value!r} is not exact; use a string")
    try:
        return as_fraction(value)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def encode_rational(value: Fraction) -> str:
    return str(value)


def encode_vector(values: Sequence[Fraction]) -> list[str]:
    return [encode_rational(v) for v in values]


def encode_matrix(entries: Sequence[Sequence[Fraction]]) -> list[list[str]]:
    return [encode_vector(row) for row in entries]


def _grid(data: Any, where: str) -> list[list[Fraction]]:
    if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
        raise ValidationError(f"{where}: expected a nonempty array of rows")
    return [
        [_rational(v, f"{where}[{i + 1}][{j + 1}]") for j, v in enumerate(row)]
        for i, row in enumerate(data)
    ]


def decode_simplex_vector(data: Any, where: str = "x") -> SimplexVector:
    if not isinstance(data, list) or not data:
        raise ValidationError(f"{where}: expected a nonempty array of rationals")
    coords = tuple(_rational(v, f"{where}[{i + 1}]") for i, v in enumerate(data))
    try:
        return SimplexVector(coords)
    except SimplexError as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def decode_sym_matrix(data: Any, where: str = "matrix") -> SymMatrix:
    grid = _grid(data, where)
    try:
        return SymMatrix(tuple(map(tuple, grid)))
    except ValueError as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def decode_row_sum_matrix(data: Any, k: int = 1, where: str = "matrix") -> RowSumMatrix:
    grid = _grid(data, where)
    try:
        return RowSumMatrix(tuple(map(tuple, grid)), k)
    except ValueError as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def encode_upper(a: SymMatrix) -> list[list[str]]:
    """Upper-triangular rows: row ``i`` holds ``a_ii, ..., a_im``."""
    return [encode_vector(a.entries[i][i:]) for i in range(a.m)]


def _slice_from_rows(rows: list[list[Fraction]], m: int, where: str) -> SymMatrix:
    if len(rows) != m:
        raise ValidationError(f"{where}: expected {m} rows, got {len(rows)}")
    if all(len(r) == m - i for i, r in enumerate(rows)):
        coords = [v for r in rows for v in r]
        try:
            return SymMatrix.from_upper(m, coords)
        except ValueError as exc:
            raise ValidationError(f"{where}: {exc}") from exc
    if all(len(r) == m for r in rows):
        try:
            return SymMatrix(tuple(map(tuple, rows)))
        except ValueError as exc:
            raise ValidationError(f"{where}: {exc}") from exc
    raise ValidationError(
        f"{where}: rows must be upper-triangular (lengths {m}..1) or full (length {m})"
    )


def decode_qso(data: Any, where: str = "qso") -> QsoTensor:
    """Decode ``{"m": int, "slices": [...]}``, one upper-triangular slice per k."""
    if not isinstance(data, dict) or "m" not in data or "slices" not in data:
        raise ValidationError(f'{where}: expected an object with "m" and "slices"')
    m = data["m"]
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise ValidationError(f"{where}.m: expected a positive integer")
    slices = data["slices"]
    if not isinstance(slices, list) or len(slices) != m:
        raise ValidationError(f"{where}.slices: expected {m} slices")
    mats = []
    for k, s in enumerate(slices):
        label = f"{where}.slices[{k + 1}]"
        if not isinstance(s, list) or not all(isinstance(r, list) for r in s):
            raise ValidationError(f"{label}: expected an array of rows")
        rows = [
            [_rational(v, f"{label}[{i + 1}][{j + 1}]") for j, v in enumerate(r)]
            for i, r in enumerate(s)
        ]
        mats.append(_slice_from_rows(rows, m, label))
    try:
        return QsoTensor(tuple(mats))
    except ValueError as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def encode_qso(v: QsoTensor) -> dict[str, Any]:
    return {"m": v.m, "slices": [encode_upper(a) for a in v.slices]}


def decode_prefix(data: Any, where: str = "prefix") -> list[SymMatrix]:
    """A list of matrices, or an object whose ``"slices"`` holds such a list."""
    if isinstance(data, dict):
        data = data.get("slices")
    if not isinstance(data, list) or not data:
        raise ValidationError(f"{where}: expected a nonempty array of matrices")
    return [decode_sym_matrix(s, f"{where}[{k + 1}]") for k, s in enumerate(data)]


def encode_subset(subset: Sequence[int]) -> list[int]:
    return sorted(i + 1 for i in subset)


def decode_permutation(text: str | Sequence[int], m: int) -> tuple[int, ...]:
    """Parse a 1-based permutation like ``"2,3,1"`` into 0-based form."""
    if isinstance(text, str):
        try:
            values = [int(t) for t in text.replace(" ", "").split(",") if t]
        except ValueError as exc:
            raise ValidationError(f"permutation: {text!r} is not a list of integers") from exc
    else:
        values = list(text)
    if sorted(values) != list(range(1, m + 1)):
        raise ValidationError(f"permutation: {values} is not a permutation of 1..{m}")
    return tuple(v - 1 for v in values)
