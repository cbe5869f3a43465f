"""Exact probabilities with power-of-two denominators.

Every probability produced by the occurrence-threshold recursion is of the
form numerator / 2**k, so a dedicated dyadic type keeps the arithmetic in
plain integers with no rational-number reduction cost.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def _canonical(numerator: int, log2_denominator: int) -> tuple[int, int]:
    if numerator == 0:
        return 0, 0
    shift = (numerator & -numerator).bit_length() - 1
    if shift > log2_denominator:
        shift = log2_denominator
    return numerator >> shift, log2_denominator - shift


@dataclass(frozen=True, order=False)
class DyadicProbability:
    """A probability numerator / 2**log2_denominator in canonical form.

    Canonical means the numerator is odd (or zero with exponent zero), and
    the value always lies in [0, 1].
    """

    numerator: int
    log2_denominator: int = 0

    def __post_init__(self):
        if self.numerator < 0 or self.log2_denominator < 0:
            raise ValueError("negative numerator or exponent")
        num, exp = _canonical(self.numerator, self.log2_denominator)
        if num > (1 << exp):
            raise ValueError(
                f"{self.numerator}/2^{self.log2_denominator} is larger than 1"
            )
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "log2_denominator", exp)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "DyadicProbability":
        return cls(0, 0)

    @classmethod
    def one(cls) -> "DyadicProbability":
        return cls(1, 0)

    @classmethod
    def from_fraction(cls, value: Fraction) -> "DyadicProbability":
        den = value.denominator
        if den & (den - 1):
            raise ValueError(f"{value} does not have a power-of-two denominator")
        return cls(value.numerator, den.bit_length() - 1)

    # -- arithmetic --------------------------------------------------------

    def _pair(self, other: "DyadicProbability") -> tuple[int, int, int]:
        exp = max(self.log2_denominator, other.log2_denominator)
        return (
            self.numerator << (exp - self.log2_denominator),
            other.numerator << (exp - other.log2_denominator),
            exp,
        )

    def __add__(self, other: "DyadicProbability") -> "DyadicProbability":
        a, b, exp = self._pair(other)
        return DyadicProbability(a + b, exp)

    def __sub__(self, other: "DyadicProbability") -> "DyadicProbability":
        a, b, exp = self._pair(other)
        if b > a:
            raise ValueError("difference of probabilities would be negative")
        return DyadicProbability(a - b, exp)

    def __mul__(self, other: "DyadicProbability") -> "DyadicProbability":
        return DyadicProbability(
            self.numerator * other.numerator,
            self.log2_denominator + other.log2_denominator,
        )

    def complement(self) -> "DyadicProbability":
        return DyadicProbability(
            (1 << self.log2_denominator) - self.numerator, self.log2_denominator
        )

    # -- comparisons and views ----------------------------------------------

    def __lt__(self, other):
        a, b, _ = self._pair(other)
        return a < b

    def __le__(self, other):
        a, b, _ = self._pair(other)
        return a <= b

    def __gt__(self, other):
        return other < self

    def __ge__(self, other):
        return other <= self

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.log2_denominator)

    def __float__(self) -> float:
        # int / int is correctly rounded for arbitrary magnitudes
        return self.numerator / (1 << self.log2_denominator)

    def to_json_dict(self) -> dict:
        return {
            "numerator": self.numerator,
            "log2_denominator": self.log2_denominator,
            "decimal": float(self),
        }

    def __str__(self) -> str:
        return f"{self.numerator}/2^{self.log2_denominator}"
