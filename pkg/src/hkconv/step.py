"""Left-continuous step functions and the exact norms built on them.

A :class:`StepFunction` on ``[x0, xm]`` takes the value ``values[i]`` on the
half-open piece ``(x_i, x_{i+1}]`` and ``value_at_a`` at ``x0``. Every
instance is therefore left-continuous, and NBV membership reduces to
``value_at_a == 0``.

:class:`PointStep` drops the left-continuity convention and stores a value
at every breakpoint; it exists to hold exact images under ``x -> 1/x`` and
inputs to :func:`nbv_normalize`.
"""
from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence, Union

import numpy as np

from .base import FLOAT, RATIONAL, HKFunction, coerce, infer_mode, zero_of
from .errors import ArithmeticModeError, DomainMismatch, NonpositiveEpsilon, OutOfDomain
from .intervals import Interval, Scalar, is_infinite


def _check_breakpoints(bps):
    if len(bps) < 2:
        raise ValueError("a step function needs at least two breakpoints")
    for x in bps:
        if is_infinite(x):
            raise ValueError("step function breakpoints must be finite")
    for left, right in zip(bps, bps[1:]):
        if not left < right:
            raise ValueError(f"breakpoints must increase strictly: {left} !< {right}")


@dataclass(frozen=True)
class StepFunction(HKFunction):
    breakpoints: tuple
    values: tuple
    value_at_a: Scalar = 0
    mode: str = None
    lo_open: bool = False

    def __post_init__(self):
        bps, vals = tuple(self.breakpoints), tuple(self.values)
        mode = self.mode or infer_mode(bps + vals + (self.value_at_a,))
        if mode not in (RATIONAL, FLOAT):
            raise ValueError(f"unknown arithmetic mode {mode!r}")
        bps = tuple(coerce(x, mode) for x in bps)
        vals = tuple(coerce(v, mode) for v in vals)
        _check_breakpoints(bps)
        if len(vals) != len(bps) - 1:
            raise ValueError(f"{len(bps)} breakpoints need {len(bps) - 1} values, got {len(vals)}")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "value_at_a", coerce(self.value_at_a, mode))
        object.__setattr__(self, "mode", mode)

    # construction helpers

    @classmethod
    def zero(cls, lo=0, hi=1, mode=RATIONAL, lo_open=False) -> "StepFunction":
        return cls((lo, hi), (0,), 0, mode=mode, lo_open=lo_open)

    @classmethod
    def constant(cls, c, lo=0, hi=1, mode=None) -> "StepFunction":
        return cls((lo, hi), (c,), c, mode=mode)

    @classmethod
    def indicator(cls, c, d, lo=0, hi=1, mode=None) -> "StepFunction":
        """Indicator of ``(c, d]`` on ``[lo, hi]``."""
        if not lo <= c <= d <= hi:
            raise OutOfDomain(f"({c}, {d}] not inside [{lo}, {hi}]")
        bps, vals = [lo], []
        for point, value in ((c, 0), (d, 1), (hi, 0)):
            if point > bps[-1]:
                bps.append(point)
                vals.append(value)
        return cls(tuple(bps), tuple(vals), 0, mode=mode).canonicalize()

    # basic structure

    @property
    def base(self) -> Interval:
        return Interval(self.breakpoints[0], self.breakpoints[-1], self.lo_open, False)

    @property
    def a(self):
        return self.breakpoints[0]

    @property
    def b(self):
        return self.breakpoints[-1]

    def pieces(self) -> Iterator[tuple]:
        return zip(self.breakpoints, self.breakpoints[1:], self.values)

    def _zero(self):
        return zero_of(self.mode)

    def eval(self, x):
        if x < self.a or x > self.b:
            raise OutOfDomain(f"{x} outside {self.base}")
        if x == self.a:
            return self.value_at_a
        return self.values[bisect_left(self.breakpoints, x) - 1]

    def canonicalize(self) -> "StepFunction":
        bps, vals = [self.a], []
        for _, right, v in self.pieces():
            if vals and vals[-1] == v:
                bps[-1] = right
            else:
                vals.append(v)
                bps.append(right)
        return StepFunction(tuple(bps), tuple(vals), self.value_at_a, self.mode, self.lo_open)

    def is_canonical(self) -> bool:
        return all(u != v for u, v in zip(self.values, self.values[1:]))

    def refine(self, points: Sequence) -> "StepFunction":
        """Same function with extra breakpoints inserted (points outside (a, b) ignored)."""
        extra = {coerce(p, self.mode) for p in points if self.a < p < self.b}
        bps = tuple(sorted(set(self.breakpoints) | extra))
        vals = tuple(self.eval(r) for r in bps[1:])
        return StepFunction(bps, vals, self.value_at_a, self.mode, self.lo_open)

    # conversions

    def as_float(self) -> "StepFunction":
        if self.mode == FLOAT:
            return self
        return StepFunction(tuple(float(x) for x in self.breakpoints),
                            tuple(float(v) for v in self.values),
                            float(self.value_at_a), FLOAT, self.lo_open)

    def as_rational(self) -> "StepFunction":
        if self.mode == RATIONAL:
            return self
        return StepFunction(tuple(Fraction(x) for x in self.breakpoints),
                            tuple(Fraction(v) for v in self.values),
                            Fraction(self.value_at_a), RATIONAL, self.lo_open)

    def with_value_at_a(self, v) -> "StepFunction":
        return StepFunction(self.breakpoints, self.values, v, self.mode, self.lo_open)

    # arithmetic

    def _check_compatible(self, other: "StepFunction"):
        if not self.base.same_endpoints(other.base):
            raise DomainMismatch(f"bases differ: {self.base} vs {other.base}")
        if self.mode != other.mode:
            raise ArithmeticModeError(f"cannot combine {self.mode} and {other.mode} step functions")

    def _combine(self, other: "StepFunction", op) -> "StepFunction":
        self._check_compatible(other)
        bps = tuple(sorted(set(self.breakpoints) | set(other.breakpoints)))
        vals = tuple(op(self.eval(r), other.eval(r)) for r in bps[1:])
        return StepFunction(bps, vals, op(self.value_at_a, other.value_at_a),
                            self.mode, self.lo_open and other.lo_open)

    def _scale(self, c) -> "StepFunction":
        c = coerce(c, self.mode)
        return StepFunction(self.breakpoints, tuple(c * v for v in self.values),
                            c * self.value_at_a, self.mode, self.lo_open)

    def __add__(self, other):
        if isinstance(other, StepFunction):
            return self._combine(other, lambda u, v: u + v)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, StepFunction):
            return self._combine(other, lambda u, v: u - v)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, StepFunction):
            return self._combine(other, lambda u, v: u * v)
        if isinstance(other, (int, float, Fraction)):
            return self._scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return self._scale(-1)

    def __abs__(self):
        return StepFunction(self.breakpoints, tuple(abs(v) for v in self.values),
                            abs(self.value_at_a), self.mode, self.lo_open)

    def shifted(self, c) -> "StepFunction":
        """``self - c`` as a pointwise constant shift."""
        c = coerce(c, self.mode)
        return StepFunction(self.breakpoints, tuple(v - c for v in self.values),
                            self.value_at_a - c, self.mode, self.lo_open)

    def restrict(self, c, d) -> "StepFunction":
        """``self`` times the indicator of ``(c, d]``, on the same base.

        The value at ``a`` is zeroed, so the result agrees with
        ``self * chi_[c,d]`` except possibly at ``a`` and ``c``.
        """
        if not self.a <= c <= d <= self.b:
            raise OutOfDomain(f"[{c}, {d}] not inside {self.base}")
        g = self.refine((c, d))
        zero = self._zero()
        vals = tuple(v if (c <= left and right <= d) else zero for left, right, v in g.pieces())
        return StepFunction(g.breakpoints, vals, zero, self.mode, self.lo_open)

    # integration

    def integral(self, c, d):
        if c > d:
            raise ValueError("integral bounds must satisfy c <= d")
        if c < self.a or d > self.b:
            raise OutOfDomain(f"[{c}, {d}] not inside {self.base}")
        total = self._zero()
        for left, right, v in self.pieces():
            lo, hi = max(left, c), min(right, d)
            if lo < hi:
                total += v * (hi - lo)
        return total

    def primitive_values(self) -> list:
        """Exact primitive at each breakpoint, starting from 0 at ``a``."""
        out = [self._zero()]
        for left, right, v in self.pieces():
            out.append(out[-1] + v * (right - left))
        return out

    def primitive(self, x):
        return self.integral(self.a, x)

    def primitive_array(self, xs):
        bps = np.array([float(x) for x in self.breakpoints])
        prim = np.array([float(p) for p in self.primitive_values()])
        return np.interp(np.asarray(xs, dtype=float), bps, prim)

    def knots(self) -> list[float]:
        return [float(x) for x in self.breakpoints]

    def __repr__(self) -> str:
        pieces = ", ".join(f"({l}, {r}]:{v}" for l, r, v in self.pieces())
        return f"StepFunction[{self.mode}; a:{self.value_at_a}; {pieces}]"


@dataclass(frozen=True)
class PointStep:
    """Piecewise constant function with free values at breakpoints.

    ``piece_values[i]`` holds on the open piece ``(x_i, x_{i+1})`` and
    ``point_values[i]`` at ``x_i``.
    """

    breakpoints: tuple
    piece_values: tuple
    point_values: tuple
    mode: str = None
    lo_open: bool = False

    def __post_init__(self):
        bps, pieces, points = map(tuple, (self.breakpoints, self.piece_values, self.point_values))
        mode = self.mode or infer_mode(bps + pieces + points)
        bps = tuple(coerce(x, mode) for x in bps)
        _check_breakpoints(bps)
        if len(pieces) != len(bps) - 1 or len(points) != len(bps):
            raise ValueError("PointStep needs m+1 breakpoints, m piece values, m+1 point values")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "piece_values", tuple(coerce(v, mode) for v in pieces))
        object.__setattr__(self, "point_values", tuple(coerce(v, mode) for v in points))
        object.__setattr__(self, "mode", mode)

    @classmethod
    def from_step(cls, g: StepFunction) -> "PointStep":
        points = (g.value_at_a,) + g.values
        return cls(g.breakpoints, g.values, points, g.mode, g.lo_open)

    @property
    def base(self) -> Interval:
        return Interval(self.breakpoints[0], self.breakpoints[-1], self.lo_open, False)

    def pieces(self):
        return zip(self.breakpoints, self.breakpoints[1:], self.piece_values)

    def eval(self, x):
        bps = self.breakpoints
        if x < bps[0] or x > bps[-1]:
            raise OutOfDomain(f"{x} outside {self.base}")
        i = bisect_left(bps, x)
        if bps[i] == x:
            return self.point_values[i]
        return self.piece_values[i - 1]

    __call__ = eval

    def left_continuous(self) -> StepFunction:
        """The left-continuous representative; differs only at breakpoints."""
        return StepFunction(self.breakpoints, self.piece_values, self.point_values[0],
                            self.mode, self.lo_open)


AnyStep = Union[StepFunction, PointStep]


@dataclass(frozen=True)
class NormalizationReport:
    normalized: StepFunction
    changed_points: tuple = field(default_factory=tuple)
    shift: Scalar = 0


def _resolve_interval(g: AnyStep, I: Interval | None) -> Interval:
    if I is None:
        return g.base
    if not I.within(g.base.closure()):
        raise OutOfDomain(f"{I} not inside {g.base}")
    return I


def value_walk(g: AnyStep, I: Interval | None = None) -> list:
    """Values met by ``g`` sweeping ``I`` left to right, one per constancy set.

    Closed endpoints contribute their point values; each interior breakpoint
    contributes its point value between the two open-piece values around it.
    """
    I = _resolve_interval(g, I)
    c, d = I.lo, I.hi
    walk = []
    if not I.lo_open:
        walk.append(g.eval(c))
    for left, right, v in g.pieces():
        if right <= c or left >= d:
            continue
        walk.append(v)
        if right < d:
            walk.append(g.eval(right))
    if not I.hi_open:
        walk.append(g.eval(d))
    return walk


def total_variation(g: AnyStep, I: Interval | None = None, anchor=None):
    """Total variation of ``g`` over ``I`` (default: the base).

    With ``anchor`` set, the function is taken to equal ``anchor`` at ``I.lo``
    (e.g. ``anchor=0`` gives the variation of the representative vanishing at
    the left endpoint of ``I``).
    """
    walk = value_walk(g, I)
    if anchor is not None:
        I = _resolve_interval(g, I)
        walk = [coerce(anchor, g.mode)] + (walk if I.lo_open else walk[1:])
    total = zero_of(g.mode)
    for u, v in zip(walk, walk[1:]):
        total += abs(v - u)
    return total


def sup_norm(g: AnyStep, I: Interval | None = None):
    return max(abs(v) for v in value_walk(g, I))


def _overlaps(g: AnyStep, I: Interval):
    for left, right, v in g.pieces():
        lo, hi = max(left, I.lo), min(right, I.hi)
        if lo < hi:
            yield hi - lo, v


def l1_norm(g: AnyStep, I: Interval | None = None):
    I = _resolve_interval(g, I)
    total = zero_of(g.mode)
    for length, v in _overlaps(g, I):
        total += abs(v) * length
    return total


def measure_exceedance(g: AnyStep, eps, I: Interval | None = None):
    """Lebesgue measure of ``{x in I : |g(x)| > eps}``."""
    eps = coerce(eps, g.mode)
    if not eps > 0:
        raise NonpositiveEpsilon(f"eps must be positive, got {eps}")
    I = _resolve_interval(g, I)
    total = zero_of(g.mode)
    for length, v in _overlaps(g, I):
        if abs(v) > eps:
            total += length
    return total


def nbv_normalize(g: AnyStep) -> NormalizationReport:
    """Left-continuous representative of ``g`` shifted to vanish at ``a``.

    Breakpoint values disagreeing with the left limit are reset (recorded in
    ``changed_points``); the value at ``a`` is then subtracted everywhere.
    """
    if isinstance(g, StepFunction):
        lc, changed = g, ()
    else:
        lc = g.left_continuous()
        changed = tuple(x for x, p, v in zip(g.breakpoints[1:], g.point_values[1:], g.piece_values)
                        if p != v)
    shift = lc.value_at_a
    normalized = lc.shifted(shift).canonicalize()
    return NormalizationReport(normalized, changed, shift)
