"""HK-integrable function representations and the operations on them.

Integrals are never approximated: step pieces are summed exactly and
antiderivative-backed functions integrate as differences of their closed-form
primitive. Only the Alexiewicz norm of a non-step function needs a search,
since it is the oscillation ``max - min`` of the primitive.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .base import FLOAT, RATIONAL, HKFunction, coerce, zero_of
from .errors import (
    ArithmeticModeError,
    DomainMismatch,
    OutOfDomain,
    SingularPoint,
    UnboundedWithoutLimit,
    UnsupportedBase,
)
from .intervals import INF, Interval, is_infinite
from .step import PointStep, StepFunction

DEFAULT_GRID = 4096
MIN_POINTS_PER_SEGMENT = 64
GOLDEN_TOL = 1e-12
REFINED_CANDIDATES = 4


class AntiderivativeFunction(HKFunction):
    """``f = F'`` with a closed-form continuous primitive ``F``.

    ``F`` and ``f`` must accept numpy arrays. ``F`` must return its
    continuous extension at the singular points. ``limits`` maps ``"lo"``
    and/or ``"hi"`` to the limit of ``F`` at an infinite endpoint.
    """

    def __init__(self, base: Interval, F: Callable, f: Callable,
                 singular_points: Sequence[float] = (), limits: dict | None = None,
                 label: str = "antideriv", params: dict | None = None):
        self._base = base
        self.F = F
        self.f = f
        self.singular_points = tuple(sorted(float(s) for s in singular_points))
        self.limits = dict(limits or {})
        self.label = label
        self.params = dict(params or {})

    @property
    def base(self) -> Interval:
        return self._base

    @property
    def mode(self) -> str:
        return FLOAT

    def F_at(self, x) -> float:
        if is_infinite(x):
            key = "hi" if x > 0 else "lo"
            if key not in self.limits:
                raise UnboundedWithoutLimit(f"{self.label}: no declared limit of F at {x}")
            return float(self.limits[key])
        return float(self.F(np.float64(x)))

    def eval(self, x):
        if not self._base.closure().contains(x) or is_infinite(x):
            raise OutOfDomain(f"{x} outside {self._base}")
        if float(x) in self.singular_points:
            raise SingularPoint(f"{self.label} has no derivative value at {x}")
        return float(self.f(np.float64(x)))

    def integral(self, c, d):
        return self.F_at(d) - self.F_at(c)

    def primitive_array(self, xs):
        lo = self._base.lo
        if is_infinite(lo):
            raise UnboundedWithoutLimit("primitive arrays need a finite left endpoint")
        return np.asarray(self.F(np.asarray(xs, dtype=float)), dtype=float) - self.F_at(lo)

    def knots(self) -> list[float]:
        pts = [float(x) for x in (self._base.lo, self._base.hi) if not is_infinite(x)]
        return sorted(set(pts) | set(self.singular_points))

    def __repr__(self):
        return f"AntiderivativeFunction({self.label}, base={self._base})"


def _same_base(f: HKFunction, g: HKFunction):
    if not f.base.same_endpoints(g.base):
        raise DomainMismatch(f"bases differ: {f.base} vs {g.base}")


def to_float(f: HKFunction) -> HKFunction:
    """Promote every rational component of ``f`` to float arithmetic."""
    if f.mode == FLOAT:
        return f
    if isinstance(f, StepFunction):
        return f.as_float()
    if isinstance(f, SumFunction):
        return SumFunction([to_float(t) for t in f.terms])
    if isinstance(f, ScaleFunction):
        return ScaleFunction(float(f.c), to_float(f.f))
    if isinstance(f, RestrictFunction):
        return RestrictFunction(to_float(f.f), f.interval)
    if isinstance(f, ProductFunction):
        return ProductFunction(to_float(f.f), f.g.as_float())
    raise TypeError(f"cannot convert {type(f).__name__} to float mode")


def _unify_modes(fs: Sequence[HKFunction]) -> list[HKFunction]:
    modes = {f.mode for f in fs}
    if len(modes) <= 1:
        return list(fs)
    # Two pure-step operands of different modes are a genuine mode clash;
    # anything involving an antiderivative runs in float.
    if all(as_step(f) is not None for f in fs):
        raise ArithmeticModeError("cannot combine rational and float step functions")
    return [to_float(f) for f in fs]


class SumFunction(HKFunction):
    def __init__(self, terms: Sequence[HKFunction]):
        if not terms:
            raise ValueError("SumFunction needs at least one term")
        for t in terms[1:]:
            _same_base(terms[0], t)
        self.terms = tuple(_unify_modes(terms))

    @property
    def base(self):
        return self.terms[0].base

    @property
    def mode(self):
        return self.terms[0].mode

    def eval(self, x):
        return sum((t.eval(x) for t in self.terms), zero_of(self.mode))

    def integral(self, c, d):
        return sum((t.integral(c, d) for t in self.terms), zero_of(self.mode))

    def primitive_array(self, xs):
        return sum(t.primitive_array(xs) for t in self.terms)

    def knots(self):
        return sorted(set().union(*(t.knots() for t in self.terms)))


class ScaleFunction(HKFunction):
    def __init__(self, c, f: HKFunction):
        if isinstance(c, float) and f.mode == RATIONAL:
            f = to_float(f)
        self.c = coerce(c, f.mode)
        self.f = f

    @property
    def base(self):
        return self.f.base

    @property
    def mode(self):
        return self.f.mode

    def eval(self, x):
        return self.c * self.f.eval(x)

    def integral(self, c, d):
        return self.c * self.f.integral(c, d)

    def primitive_array(self, xs):
        return float(self.c) * self.f.primitive_array(xs)

    def knots(self):
        return self.f.knots()


class RestrictFunction(HKFunction):
    """``f`` times the indicator of ``interval`` (the ``f chi_I`` of the norms)."""

    def __init__(self, f: HKFunction, interval: Interval):
        if not interval.within(f.base.closure()):
            raise OutOfDomain(f"{interval} not inside {f.base}")
        self.f = f
        self.interval = interval

    @property
    def base(self):
        return self.f.base

    @property
    def mode(self):
        return self.f.mode

    def eval(self, x):
        if self.interval.contains(x):
            return self.f.eval(x)
        if not self.base.closure().contains(x):
            raise OutOfDomain(f"{x} outside {self.base}")
        return zero_of(self.mode)

    def integral(self, c, d):
        lo, hi = max(c, self.interval.lo), min(d, self.interval.hi)
        if lo >= hi:
            return zero_of(self.mode)
        return self.f.integral(lo, hi)

    def primitive_array(self, xs):
        lo, hi = float(self.interval.lo), float(self.interval.hi)
        clipped = np.clip(np.asarray(xs, dtype=float), lo, hi)
        return self.f.primitive_array(clipped) - self.f.primitive_array(np.array([lo]))[0]

    def knots(self):
        lo, hi = self.interval.lo, self.interval.hi
        inner = [k for k in self.f.knots() if lo <= k <= hi]
        ends = [float(x) for x in (lo, hi) if not is_infinite(x)]
        return sorted(set(inner) | set(ends))


class ProductFunction(HKFunction):
    """``f * g`` for a step multiplier ``g``: integrals are sums of
    ``v_i * (Phi(y_i) - Phi(y_{i-1}))`` over the pieces of ``g``."""

    def __init__(self, f: HKFunction, g: StepFunction):
        _same_base(f, g)
        if f.mode == FLOAT:
            g = g.as_float()
        elif g.mode == FLOAT:
            f = to_float(f)
        self.f = f
        self.g = g

    @property
    def base(self):
        return self.f.base

    @property
    def mode(self):
        return self.f.mode

    def eval(self, x):
        return self.f.eval(x) * self.g.eval(x)

    def integral(self, c, d):
        total = zero_of(self.mode)
        for left, right, v in self.g.pieces():
            lo, hi = max(left, c), min(right, d)
            if lo < hi and v != 0:
                total += v * self.f.integral(lo, hi)
        return total

    def primitive_array(self, xs):
        xs = np.asarray(xs, dtype=float)
        out = np.zeros_like(xs)
        for left, right, v in self.g.pieces():
            if v == 0:
                continue
            left, right = float(left), float(right)
            start = self.f.primitive_array(np.array([left]))[0]
            out = out + float(v) * (self.f.primitive_array(np.clip(xs, left, right)) - start)
        return out

    def knots(self):
        return sorted(set(self.f.knots()) | set(self.g.knots()))


def as_step(f: HKFunction) -> StepFunction | None:
    """Exact step-function form of ``f`` when one exists, else ``None``."""
    if isinstance(f, StepFunction):
        return f
    if isinstance(f, SumFunction):
        parts = [as_step(t) for t in f.terms]
        if any(p is None for p in parts):
            return None
        total = parts[0]
        for p in parts[1:]:
            total = total + p
        return total
    if isinstance(f, ScaleFunction):
        inner = as_step(f.f)
        return None if inner is None else inner * f.c
    if isinstance(f, RestrictFunction):
        inner = as_step(f.f)
        if inner is None:
            return None
        return inner.restrict(f.interval.lo, f.interval.hi)
    if isinstance(f, ProductFunction):
        inner = as_step(f.f)
        return None if inner is None else inner * f.g
    return None


# operations


def eval_at(f: HKFunction, x):
    return f.eval(x)


def hk_integral(f: HKFunction, I: Interval | None = None):
    I = f.base if I is None else I
    if not I.within(f.base.closure()):
        raise OutOfDomain(f"{I} not inside {f.base}")
    return f.integral(I.lo, I.hi)


@dataclass(frozen=True)
class Primitive:
    """x -> integral of ``f`` from ``base.lo`` to ``x``."""

    f: HKFunction

    def __call__(self, x):
        return hk_integral(self.f, Interval(self.f.base.lo, x))


def indefinite(f: HKFunction) -> Primitive:
    return Primitive(f)


@dataclass(frozen=True)
class NormEstimate:
    value: object
    argmax: object
    argmin: object
    bracket: float
    exact: bool


def _step_norm(g: StepFunction) -> NormEstimate:
    prim = g.primitive_values()
    i_max = max(range(len(prim)), key=prim.__getitem__)
    i_min = min(range(len(prim)), key=prim.__getitem__)
    return NormEstimate(prim[i_max] - prim[i_min], g.breakpoints[i_max],
                        g.breakpoints[i_min], 0.0, True)


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(fun, lo: float, hi: float, tol: float):
    """Golden-section maximisation on ``[lo, hi]``; returns (x, value, width)."""
    a, b = lo, hi
    c, d = b - _INVPHI * (b - a), a + _INVPHI * (b - a)
    fc, fd = fun(c), fun(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = fun(d)
    return (c, fc, b - a) if fc >= fd else (d, fd, b - a)


def _search_grid(knots: list[float], grid: int) -> np.ndarray:
    total = knots[-1] - knots[0]
    parts = []
    for left, right in zip(knots, knots[1:]):
        count = max(MIN_POINTS_PER_SEGMENT, math.ceil(grid * (right - left) / total))
        parts.append(np.linspace(left, right, count + 1)[:-1])
    parts.append(np.array([knots[-1]]))
    return np.concatenate(parts)


def _refined_max(prim, xs: np.ndarray, ys: np.ndarray, tol: float):
    """Best maximum of ``prim`` after golden refinement of the top grid peaks."""
    n = len(ys)
    peaks = [i for i in range(n)
             if (i == 0 or ys[i] >= ys[i - 1]) and (i == n - 1 or ys[i] >= ys[i + 1])]
    peaks.sort(key=lambda i: (-ys[i], i))
    best_x, best_y, width = xs[peaks[0]], ys[peaks[0]], 0.0
    for i in peaks[:REFINED_CANDIDATES]:
        lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, n - 1)]
        if hi <= lo:
            continue
        x, y, w = _golden_max(lambda t: float(prim(np.array([t]))[0]), lo, hi, tol)
        if y > best_y:
            best_x, best_y = x, y
        width = max(width, w)
    return best_x, best_y, width


def alexiewicz_estimate(f: HKFunction, grid: int = DEFAULT_GRID,
                        tol: float = GOLDEN_TOL) -> NormEstimate:
    """Alexiewicz norm ``sup_I |int_I f|`` as ``max Phi - min Phi``.

    Exact for step-reducible inputs (extrema of a piecewise-linear primitive
    sit at breakpoints). Otherwise the primitive is sampled on a grid of about
    ``grid`` points, with every knot included and at least
    ``MIN_POINTS_PER_SEGMENT`` points between consecutive knots, and the best
    peaks are polished by golden section; ``bracket`` is the widest final
    golden bracket.
    """
    step = as_step(f)
    if step is not None:
        return _step_norm(step)
    if not f.base.bounded:
        return alexiewicz_estimate(compactify(f), grid, tol)
    lo, hi = float(f.base.lo), float(f.base.hi)
    knots = sorted({k for k in f.knots() if lo <= k <= hi} | {lo, hi})
    if hi == lo:
        return NormEstimate(0.0, lo, lo, 0.0, False)
    xs = _search_grid(knots, grid)
    ys = f.primitive_array(xs)
    x_max, y_max, w_max = _refined_max(f.primitive_array, xs, ys, tol)
    x_min, neg_min, w_min = _refined_max(lambda t: -f.primitive_array(t), xs, -ys, tol)
    return NormEstimate(float(y_max + neg_min), float(x_max), float(x_min),
                        float(max(w_max, w_min)), False)


def alexiewicz_norm(f: HKFunction, grid: int = DEFAULT_GRID):
    return alexiewicz_estimate(f, grid).value


def multiply_step(f: HKFunction, g: StepFunction) -> HKFunction:
    _same_base(f, g)
    step = as_step(f)
    if step is not None:
        if step.mode != g.mode:
            raise ArithmeticModeError("cannot multiply rational and float step functions")
        return (step * g).canonicalize()
    return ProductFunction(f, g)


# change of variables x -> s/t with s = +1 for [a, inf) and s = -1 for (-inf, b]


def _side_of(base: Interval, side: str | None) -> int:
    if side is None:
        side = "left" if base.hi < 0 or (is_infinite(base.lo) and base.hi <= 0) else "right"
    if side == "right":
        if not base.lo > 0:
            raise UnsupportedBase(f"x -> 1/x needs a base inside (0, inf], got {base}")
        return 1
    if side == "left":
        if not base.hi < 0:
            raise UnsupportedBase(f"x -> -1/x needs a base inside [-inf, 0), got {base}")
        return -1
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def _tail_primitive(f: HKFunction, s: int):
    """Continuous primitive of ``f`` on the half-line, plus its limit at s*inf.

    Step functions are extended by zero outside their base.
    """
    if isinstance(f, AntiderivativeFunction):
        lo, hi = float(f.base.lo), float(f.base.hi)

        def F(x):
            return np.asarray(f.F(np.clip(np.asarray(x, dtype=float), lo, hi)), dtype=float)
        far = f.base.hi if s > 0 else f.base.lo
        if is_infinite(far):
            return F, f.limits.get("hi" if s > 0 else "lo")
        return F, f.F_at(far)
    if isinstance(f, StepFunction):
        g = f.as_float()
        lo, hi = float(g.a), float(g.b)

        def F(x):
            return g.primitive_array(np.clip(np.asarray(x, dtype=float), lo, hi))
        end = float(g.primitive_values()[-1]) if s > 0 else 0.0
        return F, end
    raise UnsupportedBase(f"cannot compactify {type(f).__name__}")


def compactify(f: HKFunction, side: str | None = None) -> HKFunction:
    """Image of ``f`` under ``x -> s/t``: a function on ``(0, 1/|edge|]``.

    The image integrand is ``f(s/t) / t**2`` and its primitive is
    ``-s * F(s/t)``, so integrals over the half-line equal integrals of the
    image over ``(0, 1/|edge|]``. Sums and scalings are mapped termwise.
    """
    s = _side_of(f.base, side)
    edge = f.base.lo if s > 0 else f.base.hi
    if isinstance(f, SumFunction):
        return SumFunction([compactify(t, side) for t in f.terms])
    if isinstance(f, ScaleFunction):
        return ScaleFunction(f.c, compactify(f.f, side))
    F, limit = _tail_primitive(f, s)
    top = 1.0 / abs(float(edge))

    def F_image(t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            inner = -s * F(s / np.where(t == 0, 1.0, t))
        if np.any(t == 0):
            if limit is None:
                raise UnboundedWithoutLimit(f"no limit of F at {'+' if s > 0 else '-'}inf")
            inner = np.where(t == 0, -s * float(limit), inner)
        return inner

    def f_image(t):
        t = np.asarray(t, dtype=float)
        x = s / t
        if isinstance(f, StepFunction):
            inside = (x >= float(f.a)) & (x <= float(f.b))
            vals = np.array([float(f.eval(xi)) if ok else 0.0 for xi, ok in
                             zip(np.atleast_1d(x), np.atleast_1d(inside))])
            vals = vals.reshape(np.shape(x))
        else:
            vals = f.f(x)
        return vals / t ** 2

    if isinstance(f, StepFunction):
        singular = [1.0 / abs(float(x)) for x in f.breakpoints]
    else:
        singular = [1.0 / abs(p) for p in f.singular_points if p != 0]
    singular.append(0.0)
    params = {"source": getattr(f, "label", type(f).__name__), "side": "right" if s > 0 else "left"}
    return AntiderivativeFunction(Interval(0.0, top, lo_open=True), F_image, f_image,
                                  singular, label=f"compactified {params['source']}",
                                  params=params)


def uncompactify(f: AntiderivativeFunction, side: str = "right") -> AntiderivativeFunction:
    """Inverse of :func:`compactify` for antiderivative functions on ``(0, T]``."""
    if not isinstance(f, AntiderivativeFunction):
        raise UnsupportedBase("uncompactify expects an AntiderivativeFunction")
    if f.base.lo != 0 or not f.base.hi > 0:
        raise UnsupportedBase(f"uncompactify needs a base (0, T], got {f.base}")
    s = 1 if side == "right" else -1
    edge = s / float(f.base.hi)

    def F(x):
        x = np.asarray(x, dtype=float)
        return -s * np.asarray(f.F(s / x), dtype=float)

    def f_orig(x):
        x = np.asarray(x, dtype=float)
        return np.asarray(f.f(s / x), dtype=float) / x ** 2

    limit = -s * f.F_at(0.0)
    base = Interval(edge, INF) if s > 0 else Interval(-INF, edge)
    singular = [s / p for p in f.singular_points if p != 0]
    return AntiderivativeFunction(base, F, f_orig, singular,
                                  limits={"hi" if s > 0 else "lo": limit},
                                  label=f"uncompactified {f.label}")


def compactify_multiplier(g: StepFunction, tail=None) -> PointStep:
    """Exact image ``t -> g(1/t)`` of a multiplier on ``[a, b]`` with ``a > 0``.

    With ``tail`` given, ``g`` is taken to equal ``tail`` on ``(b, inf)`` and the
    image lives on ``(0, 1/a]``; otherwise on ``[1/b, 1/a]``. The image of a
    left-continuous function is right-continuous, hence a :class:`PointStep`.
    """
    if not g.a > 0:
        raise UnsupportedBase(f"multiplier base must lie in (0, inf), got {g.base}")
    one = coerce(1, g.mode)
    bps = [one / x for x in reversed(g.breakpoints)]
    pieces = list(reversed(g.values))
    points = [g.eval(x) for x in reversed(g.breakpoints)]
    lo_open = False
    if tail is not None:
        tail = coerce(tail, g.mode)
        bps = [zero_of(g.mode)] + bps
        pieces = [tail] + pieces
        points = [tail] + points
        lo_open = True
    return PointStep(tuple(bps), tuple(pieces), tuple(points), g.mode, lo_open)


def tail_bound(f: HKFunction, start, variation_bound) -> float:
    """Upper bound ``||f chi_(start, inf)|| * M`` on ``|int_start^inf f g|``
    for any ``g`` with variation at most ``M`` vanishing at ``start``."""
    image = compactify(f, "right")
    cut = 1.0 / float(start)
    if not cut <= float(image.base.hi):
        raise OutOfDomain(f"tail start {start} precedes the base of f")
    restricted = RestrictFunction(image, Interval(0.0, cut))
    return alexiewicz_norm(restricted) * float(variation_bound)
