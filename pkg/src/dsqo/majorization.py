"""Points of the standard simplex and the majorization preorder on them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate
from typing import Iterable

from .linalg import as_fraction


class SimplexError(ValueError):
    """A vector is not a point of the standard simplex."""


@dataclass(frozen=True)
class SimplexVector:
    """An exact point of the simplex: nonnegative coordinates summing to 1."""

    coords: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not self.coords:
            raise SimplexError("a simplex point needs at least one coordinate")
        for i, v in enumerate(self.coords):
            if v < 0:
                raise SimplexError(f"coordinate {i + 1} is negative ({v})")
        total = sum(self.coords, Fraction(0))
        if total != 1:
            raise SimplexError(
                f"coordinates sum to {total}, deficit {1 - total} from 1"
            )

    @classmethod
    def of(cls, values: Iterable[object]) -> SimplexVector:
        return cls(tuple(as_fraction(v) for v in values))

    @classmethod
    def center(cls, m: int) -> SimplexVector:
        return cls(tuple(Fraction(1, m) for _ in range(m)))

    @classmethod
    def vertex(cls, m: int, i: int) -> SimplexVector:
        return cls(tuple(Fraction(int(j == i)) for j in range(m)))

    @classmethod
    def uniform_on(cls, m: int, subset: Iterable[int]) -> SimplexVector:
        """Uniform distribution on ``subset`` (0-based indices), zero elsewhere."""
        members = set(subset)
        if not members:
            raise SimplexError("uniform_on needs a nonempty subset")
        w = Fraction(1, len(members))
        return cls(tuple(w if j in members else Fraction(0) for j in range(m)))

    @property
    def m(self) -> int:
        return len(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i: int) -> Fraction:
        return self.coords[i]


def rearrange_down(x: SimplexVector) -> SimplexVector:
    """Nonincreasing rearrangement; ties keep their original order."""
    order = sorted(range(x.m), key=lambda i: (-x.coords[i], i))
    return SimplexVector(tuple(x.coords[i] for i in order))


def prefix_sums(x: SimplexVector) -> list[Fraction]:
    return list(accumulate(rearrange_down(x).coords))


def majorizes(x: SimplexVector, y: SimplexVector) -> bool:
    """True iff ``x`` is majorized by ``y``.

    Both points lie on the simplex, so only the first ``m - 1`` prefix sums
    of the nonincreasing rearrangements need comparing.
    """
    if x.m != y.m:
        raise ValueError(f"dimension mismatch: {x.m} vs {y.m}")
    px, py = prefix_sums(x), prefix_sums(y)
    return all(a <= b for a, b in zip(px[:-1], py[:-1]))


def largest_sum(values: Iterable[Fraction], k: int) -> Fraction:
    """Sum of the ``k`` largest entries."""
    return sum(sorted(values, reverse=True)[:k], Fraction(0))


def smallest_sum(values: Iterable[Fraction], k: int) -> Fraction:
    """Sum of the ``k`` smallest entries."""
    return sum(sorted(values)[:k], Fraction(0))
