"""Exact arithmetic in Q/Z."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


@dataclass(frozen=True)
class QZ:
    """A rational number modulo 1, kept as ``numerator/denominator`` with
    ``0 <= numerator < denominator`` and the fraction reduced."""

    numerator: int
    denominator: int = 1

    def __post_init__(self):
        den = self.denominator
        if den <= 0:
            raise ValueError(f"denominator must be positive, got {den}")
        num = self.numerator % den
        g = gcd(num, den)
        object.__setattr__(self, "numerator", num // g)
        object.__setattr__(self, "denominator", den // g)

    @classmethod
    def from_fraction(cls, value: Fraction | int) -> QZ:
        value = Fraction(value)
        return cls(value.numerator, value.denominator)

    @classmethod
    def parse(cls, text: str) -> QZ:
        text = text.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            return cls(int(num), int(den))
        return cls(int(text))

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    @property
    def order(self) -> int:
        return self.denominator

    def is_zero(self) -> bool:
        return self.numerator == 0

    def __add__(self, other: QZ) -> QZ:
        if not isinstance(other, QZ):
            return NotImplemented
        return QZ.from_fraction(self.as_fraction() + other.as_fraction())

    def __sub__(self, other: QZ) -> QZ:
        if not isinstance(other, QZ):
            return NotImplemented
        return QZ.from_fraction(self.as_fraction() - other.as_fraction())

    def __neg__(self) -> QZ:
        return QZ(-self.numerator, self.denominator)

    def __mul__(self, k: int) -> QZ:
        if not isinstance(k, int):
            return NotImplemented
        return QZ(k * self.numerator, self.denominator)

    __rmul__ = __mul__

    def __str__(self) -> str:
        if self.numerator == 0:
            return "0"
        return f"{self.numerator}/{self.denominator}"

    def __repr__(self) -> str:
        return f"QZ({self})"


ZERO = QZ(0)
