"""JSON function descriptions and scalar text encoding.

Scalars travel as strings: ``"num/den"`` in rational mode, decimal floats in
float mode. Step functions::

    {"kind": "step", "base": ["0", "1"], "breakpoints": ["0", "1/4", "1"],
     "values": ["0", "1"], "value_at_a": "0"}

Antiderivative functions name an entry of :data:`FAMILIES`::

    {"kind": "antideriv", "family": "x^p sin(x^-q)", "p": 2, "q": 3, "base": [0, 1]}
"""
from __future__ import annotations

import json
import math
from fractions import Fraction

from .base import FLOAT, RATIONAL, coerce
from .errors import SpecError
from .functions import AntiderivativeFunction
from .gallery import cos_over_x, oscillatory
from .intervals import Interval
from .step import StepFunction


def format_scalar(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, int):
        return str(v)
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return repr(v)


def parse_scalar(s, mode: str = RATIONAL):
    if isinstance(s, str) and s.strip().lower() in ("inf", "+inf", "-inf"):
        return -math.inf if s.strip().startswith("-") else math.inf
    if isinstance(s, bool):
        raise SpecError(f"not a scalar: {s!r}")
    try:
        if mode == RATIONAL and isinstance(s, float):
            return Fraction(repr(s))
        return coerce(s, mode)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise SpecError(f"bad scalar {s!r}: {exc}") from exc


def _parse_base(raw, mode) -> Interval:
    if not isinstance(raw, (list, tuple)) or len(raw) != 2:
        raise SpecError(f"base must be a two-element list, got {raw!r}")
    lo, hi = (parse_scalar(x, mode) for x in raw)
    try:
        return Interval(lo, hi)
    except ValueError as exc:
        raise SpecError(str(exc)) from exc


def _osc_family(spec, base):
    return oscillatory(int(spec.get("p", 2)), int(spec.get("q", 3)), base)


def _cos_family(spec, base):
    if not math.isinf(base.hi):
        raise SpecError("cos(x)/x family is defined on [a, inf)")
    return cos_over_x(float(base.lo))


FAMILIES = {
    "x^p sin(x^-q)": _osc_family,
    "cos(x)/x": _cos_family,
}


def load_function(spec: dict, mode: str | None = None):
    if not isinstance(spec, dict) or "kind" not in spec:
        raise SpecError("function description must be an object with a 'kind'")
    kind = spec["kind"]
    if kind == "step":
        mode = spec.get("mode", mode or RATIONAL)
        if mode not in (RATIONAL, FLOAT):
            raise SpecError(f"unknown mode {mode!r}")
        try:
            bps = [parse_scalar(x, mode) for x in spec["breakpoints"]]
            vals = [parse_scalar(x, mode) for x in spec["values"]]
            at_a = parse_scalar(spec.get("value_at_a", "0"), mode)
            g = StepFunction(tuple(bps), tuple(vals), at_a, mode, bool(spec.get("lo_open", False)))
        except (KeyError, TypeError, ValueError) as exc:
            raise SpecError(f"bad step description: {exc}") from exc
        if "base" in spec:
            base = _parse_base(spec["base"], mode)
            if not base.same_endpoints(g.base):
                raise SpecError(f"base {base} disagrees with breakpoints {g.base}")
        return g
    if kind == "antideriv":
        family = spec.get("family")
        if family not in FAMILIES:
            raise SpecError(f"unknown antiderivative family {family!r}; known: {sorted(FAMILIES)}")
        base = _parse_base(spec.get("base", [0, 1]), FLOAT)
        return FAMILIES[family](spec, base)
    if kind == "zero":
        mode = spec.get("mode", mode or RATIONAL)
        base = _parse_base(spec.get("base", [0, 1]), mode)
        return StepFunction.zero(base.lo, base.hi, mode=mode)
    raise SpecError(f"unknown function kind {kind!r}")


def dump_function(f) -> dict:
    if isinstance(f, StepFunction):
        out = {
            "kind": "step",
            "mode": f.mode,
            "base": [format_scalar(f.a), format_scalar(f.b)],
            "breakpoints": [format_scalar(x) for x in f.breakpoints],
            "values": [format_scalar(v) for v in f.values],
            "value_at_a": format_scalar(f.value_at_a),
        }
        if f.lo_open:
            out["lo_open"] = True
        return out
    if isinstance(f, AntiderivativeFunction) and "family" in f.params:
        out = {"kind": "antideriv", **f.params,
               "base": [format_scalar(f.base.lo), format_scalar(f.base.hi)]}
        out.pop("a", None)
        return out
    raise SpecError(f"{type(f).__name__} has no JSON description")


def load_function_file(path) -> object:
    try:
        with open(path) as fh:
            return load_function(json.load(fh))
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: invalid JSON: {exc}") from exc
    except OSError as exc:
        raise SpecError(f"{path}: {exc}") from exc
