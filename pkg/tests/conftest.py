import os
import re
import sys
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from hkconv.step import StepFunction  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=100,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# acceptance criteria, one line each in the terminal summary
AC_LABELS = {
    1: "typewriter golden table",
    2: "typewriter pointwise non-convergence witness",
    3: "alternating counterexample",
    4: "heaviside counterexample",
    5: "norm equals brute-force subinterval maximum",
    6: "Hoelder-type bound",
    7: "Chebyshev and reverse-triangle inequalities",
    8: "theorem direction consistency",
    9: "FTC cross-check by Riemann sums",
}
_AC_RESULTS: dict = {}
_AC_NAME = re.compile(r"::test_ac(\d+)_")


def pytest_runtest_logreport(report):
    m = _AC_NAME.search(report.nodeid)
    if not m or not (report.when == "call" or report.failed):
        return
    entry = _AC_RESULTS.setdefault(int(m.group(1)), {"ok": True, "seconds": 0.0, "notes": []})
    entry["seconds"] += report.duration
    if hasattr(report, "wasxfail"):
        # a known-unattainable clause still counts against the criterion
        entry["ok"] = False
        entry["notes"].append(f"unattainable clause: {report.wasxfail}")
    elif not report.passed:
        entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _AC_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_AC_RESULTS):
        entry = _AC_RESULTS[key]
        line = f"AC{key} {'PASS' if entry['ok'] else 'FAIL'}  {AC_LABELS.get(key, '')}  [{entry['seconds']:.2f} s]"
        for note in entry["notes"]:
            line += f"; {note}"
        terminalreporter.write_line(line)


fractions = st.fractions(min_value=-5, max_value=5, max_denominator=12)


@st.composite
def step_functions(draw, max_pieces=8, lo=0, hi=1, with_point=True):
    """Rational step functions on [lo, hi] with small denominators."""
    inner = draw(st.lists(st.fractions(min_value=lo, max_value=hi, max_denominator=24),
                          max_size=max_pieces - 1, unique=True))
    bps = sorted({Fraction(lo), Fraction(hi), *(x for x in inner if lo < x < hi)})
    vals = draw(st.lists(fractions, min_size=len(bps) - 1, max_size=len(bps) - 1))
    at_a = draw(fractions) if with_point else Fraction(0)
    return StepFunction(tuple(bps), tuple(vals), at_a)


@st.composite
def step_pairs(draw, max_pieces=8):
    return draw(step_functions(max_pieces)), draw(step_functions(max_pieces))
