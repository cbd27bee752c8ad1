from __future__ import annotations

from abc import ABC, abstractmethod
from fractions import Fraction

import numpy as np

from .errors import ArithmeticModeError
from .intervals import Interval, Scalar

RATIONAL = "rational"
FLOAT = "float"
MODES = (RATIONAL, FLOAT)


def infer_mode(scalars) -> str:
    return FLOAT if any(isinstance(x, float) for x in scalars) else RATIONAL


def coerce(x, mode: str) -> Scalar:
    """Convert ``x`` into the scalar type of ``mode``.

    Strings may be decimal (``"0.25"``) or ratio (``"1/4"``) literals.
    Floats are refused in rational mode; silently rationalising 0.1 would
    hide a mode mix.
    """
    if mode == RATIONAL:
        if isinstance(x, float):
            raise ArithmeticModeError(f"float {x!r} supplied in rational mode")
        return Fraction(x)
    if mode == FLOAT:
        if isinstance(x, str):
            return float(Fraction(x))
        return float(x)
    raise ValueError(f"unknown arithmetic mode {mode!r}")


def zero_of(mode: str) -> Scalar:
    return Fraction(0) if mode == RATIONAL else 0.0


class HKFunction(ABC):
    """A Henstock-Kurzweil integrable function on ``self.base``.

    Subclasses supply pointwise evaluation, exact (or closed-form) integrals
    over subintervals, and a vectorised float primitive used by the numeric
    Alexiewicz norm search.
    """

    @property
    @abstractmethod
    def base(self) -> Interval: ...

    @property
    @abstractmethod
    def mode(self) -> str: ...

    @abstractmethod
    def eval(self, x): ...

    @abstractmethod
    def integral(self, c, d):
        """Integral over [c, d]; endpoints lie in the closure of the base."""

    @abstractmethod
    def primitive_array(self, xs: np.ndarray) -> np.ndarray:
        """Float values of x -> integral from base.lo to x (finite base.lo only)."""

    @abstractmethod
    def knots(self) -> list[float]:
        """Points where the primitive may fail to be smooth."""

    def __call__(self, x):
        return self.eval(x)
