from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Scalar = Union[Fraction, float, int]

INF = math.inf


def is_infinite(x: Scalar) -> bool:
    return isinstance(x, float) and math.isinf(x)


@dataclass(frozen=True)
class Interval:
    """Interval of the extended real line with per-side openness.

    Infinite endpoints are always treated as open; passing ``lo_open=False``
    together with ``lo=-inf`` silently opens that side.
    """

    lo: Scalar
    hi: Scalar
    lo_open: bool = False
    hi_open: bool = False

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise ValueError("interval endpoints must not be NaN")
        if self.lo > self.hi:
            raise ValueError(f"empty interval: lo={self.lo} > hi={self.hi}")
        if is_infinite(self.lo):
            if self.lo > 0:
                raise ValueError("lower endpoint cannot be +inf")
            object.__setattr__(self, "lo_open", True)
        if is_infinite(self.hi):
            if self.hi < 0:
                raise ValueError("upper endpoint cannot be -inf")
            object.__setattr__(self, "hi_open", True)

    @classmethod
    def closed(cls, lo: Scalar, hi: Scalar) -> "Interval":
        return cls(lo, hi, False, False)

    @classmethod
    def open(cls, lo: Scalar, hi: Scalar) -> "Interval":
        return cls(lo, hi, True, True)

    @property
    def bounded(self) -> bool:
        return not (is_infinite(self.lo) or is_infinite(self.hi))

    def length(self) -> Scalar:
        if not self.bounded:
            return INF
        return self.hi - self.lo

    def contains(self, x: Scalar) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and self.lo_open:
            return False
        if x == self.hi and self.hi_open:
            return False
        return True

    __contains__ = contains

    def closure(self) -> "Interval":
        return Interval(self.lo, self.hi)

    def within(self, other: "Interval") -> bool:
        """True when ``self`` lies inside the closure of ``other``."""
        return other.lo <= self.lo and self.hi <= other.hi

    def intersect(self, other: "Interval") -> "Interval | None":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            return None
        lo_open = (self.lo_open and self.lo == lo) or (other.lo_open and other.lo == lo)
        hi_open = (self.hi_open and self.hi == hi) or (other.hi_open and other.hi == hi)
        return Interval(lo, hi, lo_open, hi_open)

    def same_endpoints(self, other: "Interval") -> bool:
        return self.lo == other.lo and self.hi == other.hi

    def __str__(self) -> str:
        left = "(" if self.lo_open else "["
        right = ")" if self.hi_open else "]"
        return f"{left}{self.lo}, {self.hi}{right}"
