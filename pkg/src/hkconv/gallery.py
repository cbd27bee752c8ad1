"""Named sequences and test integrands, plus seeded random step functions."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .base import FLOAT, RATIONAL, coerce
from .convergence import FunctionSequence
from .errors import InvalidExponents, SpecError
from .functions import AntiderivativeFunction
from .intervals import INF, Interval
from .step import PointStep, StepFunction

ONE = Fraction(1)


def _in_mode(g: StepFunction, mode: str) -> StepFunction:
    return g.as_float() if mode == FLOAT else g


def typewriter_indices(n: int) -> tuple[int, int]:
    """``(k, j)`` with ``n = j + 2**k`` and ``0 <= j < 2**k``."""
    if n < 1:
        raise ValueError("typewriter index starts at 1")
    k = n.bit_length() - 1
    return k, n - (1 << k)


def typewriter(n: int, mode: str = RATIONAL) -> StepFunction:
    k, j = typewriter_indices(n)
    width = Fraction(1, 1 << k)
    return _in_mode(StepFunction.indicator(j * width, (j + 1) * width, 0, 1), mode)


def alternating(n: int, mode: str = RATIONAL) -> StepFunction:
    if n < 1:
        raise ValueError("alternating index starts at 1")
    return _in_mode(StepFunction.constant((-1) ** n, 0, 1, mode=RATIONAL), mode)


def heaviside(n: int, L, mode: str = RATIONAL) -> StepFunction:
    """Truncation of ``chi_(n, inf)`` to ``[0, L]``."""
    L = coerce(L, RATIONAL) if mode == RATIONAL else coerce(L, FLOAT)
    if not L > 0:
        raise ValueError("truncation length must be positive")
    if n >= L:
        return StepFunction.zero(0, L, mode=mode)
    return StepFunction.indicator(coerce(n, mode), L, coerce(0, mode), L, mode=mode)


def heaviside_image(n: int, mode: str = RATIONAL) -> PointStep:
    """Exact image of ``chi_(n, inf)`` on ``[1, inf)`` under ``x -> 1/x``.

    It equals 1 on ``(0, 1/n)`` and 0 on ``[1/n, 1]``; the point ``t = 0``
    (``x = inf``) is outside the base and carries the limit value 1.
    """
    if n < 1:
        raise ValueError("heaviside index starts at 1")
    if n == 1:
        g = PointStep((0, 1), (1,), (1, 0), RATIONAL, lo_open=True)
    else:
        g = PointStep((0, Fraction(1, n), 1), (1, 0), (1, 0, 0), RATIONAL, lo_open=True)
    if mode == FLOAT:
        g = PointStep(tuple(float(x) for x in g.breakpoints), tuple(map(float, g.piece_values)),
                      tuple(map(float, g.point_values)), FLOAT, True)
    return g


def heaviside_compactified(n: int, mode: str = RATIONAL) -> StepFunction:
    """Left-continuous representative of :func:`heaviside_image`: ``chi_(0, 1/n]``."""
    return heaviside_image(n, mode).left_continuous()


def _check_exponents(p, q):
    if p < 2 or q < 1 or q < p - 1:
        raise InvalidExponents(f"need p >= 2, q >= 1 and q >= p - 1; got p={p}, q={q}")


def oscillatory(p: int = 2, q: int = 3, base: Interval | None = None) -> AntiderivativeFunction:
    """``f = F'`` for ``F(x) = x**p sin(x**-q)``, ``F(0) = 0``.

    ``f`` is not Lebesgue integrable near 0 once ``q >= p``.
    """
    _check_exponents(p, q)
    base = Interval(0.0, 1.0) if base is None else base
    if base.lo < 0:
        raise SpecError("oscillatory family lives on [0, inf)")

    def F(x):
        x = np.asarray(x, dtype=float)
        safe = np.where(x == 0, 1.0, x)
        return np.where(x == 0, 0.0, safe ** p * np.sin(safe ** -q))

    def f(x):
        x = np.asarray(x, dtype=float)
        return p * x ** (p - 1) * np.sin(x ** -q) - q * x ** (p - q - 1) * np.cos(x ** -q)

    limits = {}
    if p < q:
        limits["hi"] = 0.0
    elif p == q:
        limits["hi"] = 1.0
    singular = [0.0] if base.lo == 0 else []
    return AntiderivativeFunction(base, F, f, singular, limits,
                                  label=f"x^{p} sin(x^-{q})",
                                  params={"family": "x^p sin(x^-q)", "p": p, "q": q})


def cos_over_x(a: float = 1.0) -> AntiderivativeFunction:
    """``f = F'`` for ``F(x) = cos(x)/x`` on ``[a, inf)``, with ``F(inf) = 0``."""
    if not a > 0:
        raise SpecError("cos(x)/x family needs a > 0")

    def F(x):
        x = np.asarray(x, dtype=float)
        return np.cos(x) / x

    def f(x):
        x = np.asarray(x, dtype=float)
        return -np.sin(x) / x - np.cos(x) / x ** 2

    return AntiderivativeFunction(Interval(float(a), INF), F, f, (), {"hi": 0.0},
                                  label="cos(x)/x", params={"family": "cos(x)/x", "a": a})


def random_step(seed, m_max: int = 50, v_max=1, base: Interval | None = None,
                mode: str = RATIONAL, denominator: int = 1000) -> StepFunction:
    """Seeded canonical step function with at most ``m_max`` pieces.

    Breakpoints sit on the grid ``a + (b - a) * i / denominator``; values
    (including the value at ``a``) are multiples of 1/100 in
    ``[-v_max, v_max]``.
    """
    if m_max < 1:
        raise ValueError("m_max must be at least 1")
    base = Interval(0, 1) if base is None else base
    a, b = Fraction(base.lo), Fraction(base.hi)
    rng = random.Random(seed)
    m = rng.randint(1, min(m_max, denominator))
    cuts = sorted(rng.sample(range(1, denominator), m - 1))
    bps = [a + (b - a) * Fraction(c, denominator) for c in [0, *cuts, denominator]]
    top = int(Fraction(v_max) * 100)

    def value():
        return Fraction(rng.randint(-top, top), 100)

    vals = [value() for _ in range(m)]
    g = StepFunction(tuple(bps), tuple(vals), value(), RATIONAL).canonicalize()
    return _in_mode(g, mode)


def two_piece(base: Interval | None = None, mode: str = RATIONAL) -> StepFunction:
    """1 on the first third of the base, -1 on the rest."""
    base = Interval(0, 1) if base is None else base
    a, b = Fraction(base.lo), Fraction(base.hi)
    g = StepFunction((a, a + (b - a) / 3, b), (1, -1), 0, RATIONAL)
    return _in_mode(g, mode)


def default_family(base: Interval | None = None, mode: str = RATIONAL) -> dict:
    """Indicator of the base, a two-piece step, and x^2 sin(x^-3) when the base is [0, 1]."""
    base = Interval(0, 1) if base is None else base
    a, b = Fraction(base.lo), Fraction(base.hi)
    family = {
        "indicator": _in_mode(StepFunction((a, b), (1,), 0, RATIONAL), mode),
        "two_piece": two_piece(base, mode),
    }
    if a == 0 and b == 1:
        family["oscillatory"] = oscillatory(2, 3)
    return family


# sequences


def _zero_on(base: Interval, mode: str) -> StepFunction:
    return StepFunction.zero(coerce(base.lo, mode) if mode == RATIONAL else float(base.lo),
                             coerce(base.hi, mode) if mode == RATIONAL else float(base.hi),
                             mode=mode, lo_open=base.lo_open)


def typewriter_sequence(mode: str = RATIONAL) -> FunctionSequence:
    return FunctionSequence("typewriter", lambda n: typewriter(n, mode), Interval(0, 1),
                            _zero_on(Interval(0, 1), mode))


def alternating_sequence(mode: str = RATIONAL) -> FunctionSequence:
    return FunctionSequence("alternating", lambda n: alternating(n, mode), Interval(0, 1),
                            alternating(1, mode))


def heaviside_sequence(mode: str = RATIONAL) -> FunctionSequence:
    """Compactified Heaviside sequence on ``(0, 1]``; pointwise limit 0 declared."""
    base = Interval(0, 1, lo_open=True)
    zero = _zero_on(base, mode)
    return FunctionSequence("heaviside", lambda n: heaviside_compactified(n, mode), base,
                            zero, ae_limit=zero)


def heaviside_truncated_sequence(L, mode: str = RATIONAL) -> FunctionSequence:
    L = coerce(L, mode)
    base = Interval(coerce(0, mode), L)
    zero = _zero_on(base, mode)
    return FunctionSequence(f"heaviside[0,{L}]", lambda n: heaviside(n, L, mode), base,
                            zero, ae_limit=zero)


def constant_sequence(g: StepFunction, name: str = "constant") -> FunctionSequence:
    return FunctionSequence(name, lambda n: g, g.base, g, ae_limit=g)


def random_sequence(seed: int, m_max: int = 10, v_max=1, mode: str = RATIONAL) -> FunctionSequence:
    """``g_n = random_step(seed * 1_000_003 + n)``; no declared limit beyond zero."""
    base = Interval(0, 1)
    return FunctionSequence(f"random_step[{seed}]",
                            lambda n: random_step(seed * 1_000_003 + n, m_max, v_max, base, mode),
                            base, _zero_on(base, mode))


@dataclass(frozen=True)
class GallerySpec:
    """Addressable gallery entry: an id and its parameters."""

    id: str
    parameters: dict = field(default_factory=dict)

    def function(self, n: int | None = None, mode: str = RATIONAL):
        p = self.parameters
        if self.id == "typewriter":
            return typewriter(n, mode)
        if self.id == "alternating":
            return alternating(n, mode)
        if self.id == "heaviside":
            if "L" in p:
                return heaviside(n, p["L"], mode)
            return heaviside_compactified(n, mode)
        if self.id == "oscillatory":
            return oscillatory(int(p.get("p", 2)), int(p.get("q", 3)))
        if self.id == "cos_over_x":
            return cos_over_x(float(p.get("a", 1.0)))
        if self.id == "random_step":
            seed = p.get("seed", 0) if n is None else p.get("seed", 0) * 1_000_003 + n
            return random_step(seed, int(p.get("m_max", 50)), p.get("v_max", 1), mode=mode)
        raise SpecError(f"unknown gallery id {self.id!r}")

    def sequence(self, mode: str = RATIONAL) -> FunctionSequence:
        p = self.parameters
        if self.id == "typewriter":
            return typewriter_sequence(mode)
        if self.id == "alternating":
            return alternating_sequence(mode)
        if self.id == "heaviside":
            if "L" in p:
                return heaviside_truncated_sequence(p["L"], mode)
            return heaviside_sequence(mode)
        if self.id == "random_step":
            return random_sequence(int(p.get("seed", 0)), int(p.get("m_max", 10)),
                                   p.get("v_max", 1), mode)
        raise SpecError(f"gallery id {self.id!r} does not name a sequence")


GALLERY_IDS = ("typewriter", "heaviside", "alternating", "oscillatory", "cos_over_x", "random_step")
