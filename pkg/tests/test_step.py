from fractions import Fraction as Fr

import pytest
from conftest import step_functions, step_pairs
from hypothesis import given
from hypothesis import strategies as st
from oracles import refinement_variation

from hkconv.errors import ArithmeticModeError, DomainMismatch, NonpositiveEpsilon, OutOfDomain
from hkconv.intervals import Interval
from hkconv.step import (
    PointStep,
    StepFunction,
    l1_norm,
    measure_exceedance,
    nbv_normalize,
    sup_norm,
    total_variation,
    value_walk,
)

CHI = StepFunction.indicator(Fr(1, 4), Fr(1, 2))
ZERO = StepFunction.zero()


class TestEval:
    def test_half_open_pieces(self):
        assert CHI.eval(Fr(1, 2)) == 1
        assert CHI.eval(Fr(1, 4)) == 0
        assert CHI.eval(Fr(3, 8)) == 1
        assert CHI.eval(Fr(1)) == 0

    def test_zero(self):
        assert ZERO.eval(Fr(3, 10)) == 0

    def test_value_at_a(self):
        g = StepFunction((0, 1), (2,), 7)
        assert g.eval(0) == 7
        assert g(Fr(1, 10)) == 2

    def test_out_of_domain(self):
        with pytest.raises(OutOfDomain):
            CHI.eval(Fr(3, 2))

    def test_bad_construction(self):
        with pytest.raises(ValueError):
            StepFunction((0, 0), (1,))
        with pytest.raises(ValueError):
            StepFunction((0, 1, 2), (1,))
        with pytest.raises(ValueError):
            StepFunction((0, float("inf")), (1.0,))

    def test_float_into_rational_rejected(self):
        with pytest.raises(ArithmeticModeError):
            StepFunction((0, 1), (0.5,), 0, mode="rational")

    def test_mode_inferred(self):
        assert StepFunction((0, 1), (Fr(1, 2),)).mode == "rational"
        assert StepFunction((0.0, 1.0), (0.5,)).mode == "float"


class TestIntegral:
    def test_indicator(self):
        assert CHI.integral(0, 1) == Fr(1, 4)
        assert CHI.integral(Fr(3, 8), 1) == Fr(1, 8)

    def test_value_at_a_is_null(self):
        assert StepFunction((0, 1), (0,), 100).integral(0, 1) == 0

    def test_primitive_values(self):
        g = StepFunction((0, Fr(1, 2), 1), (2, -4))
        assert g.primitive_values() == [0, 1, -1]
        assert g.primitive(Fr(3, 4)) == 0

    def test_bounds_checked(self):
        with pytest.raises(OutOfDomain):
            CHI.integral(-1, 1)
        with pytest.raises(ValueError):
            CHI.integral(1, 0)

    @given(step_functions(), st.fractions(0, 1, max_denominator=30), st.fractions(0, 1, max_denominator=30))
    def test_additive_over_intervals(self, g, c, d):
        c, d = min(c, d), max(c, d)
        assert g.integral(0, c) + g.integral(c, d) + g.integral(d, 1) == g.integral(0, 1)


class TestArithmetic:
    @given(step_pairs(), st.fractions(0, 1, max_denominator=50))
    def test_pointwise(self, pair, x):
        g, h = pair
        assert (g + h).eval(x) == g.eval(x) + h.eval(x)
        assert (g - h).eval(x) == g.eval(x) - h.eval(x)
        assert (g * h).eval(x) == g.eval(x) * h.eval(x)
        assert (3 * g).eval(x) == 3 * g.eval(x)
        assert (-g).eval(x) == -g.eval(x)
        assert abs(g).eval(x) == abs(g.eval(x))

    @given(step_functions(), st.fractions(0, 1, max_denominator=50))
    def test_canonicalize_and_refine_preserve_values(self, g, x):
        c = g.canonicalize()
        assert c.is_canonical()
        assert c.eval(x) == g.eval(x)
        assert g.refine([Fr(1, 3), Fr(2, 7), 5]).eval(x) == g.eval(x)

    def test_mismatches(self):
        with pytest.raises(DomainMismatch):
            CHI + StepFunction.zero(0, 2)
        with pytest.raises(ArithmeticModeError):
            CHI + CHI.as_float()

    def test_restrict(self):
        g = StepFunction((0, 1), (3,), 3)
        r = g.restrict(Fr(1, 4), Fr(1, 2))
        assert r.integral(0, 1) == Fr(3, 4)
        assert r.eval(0) == 0 and r.eval(Fr(1, 2)) == 3 and r.eval(Fr(1, 4)) == 0

    def test_float_round_trip(self):
        assert CHI.as_float().as_rational() == CHI


class TestNorms:
    def test_indicator_values(self):
        assert total_variation(CHI) == 2
        assert sup_norm(CHI) == 1
        assert l1_norm(CHI) == Fr(1, 4)
        assert measure_exceedance(CHI, Fr(1, 2)) == Fr(1, 4)

    def test_zero(self):
        assert total_variation(ZERO) == sup_norm(ZERO) == l1_norm(ZERO) == 0
        assert measure_exceedance(ZERO, Fr(1, 10)) == 0

    def test_truncated_half_line_indicator(self):
        g = StepFunction.indicator(3, 10, 0, 10)
        assert total_variation(g) == 1
        assert measure_exceedance(g, Fr(1, 2)) == 7

    def test_variation_counts_jump_from_value_at_a(self):
        assert total_variation(StepFunction((0, 1), (1,), 0)) == 1
        assert total_variation(StepFunction((0, 1), (1,), 1)) == 0

    def test_variation_on_subinterval(self):
        g = StepFunction((0, Fr(1, 3), Fr(2, 3), 1), (1, 5, 2))
        assert total_variation(g, Interval.closed(Fr(1, 2), 1)) == 3
        assert total_variation(g, Interval.open(Fr(1, 2), Fr(3, 5))) == 0
        assert total_variation(g, Interval.closed(Fr(1, 2), 1), anchor=0) == 8

    def test_value_walk_includes_breakpoint_values(self):
        p = PointStep((0, Fr(1, 2), 1), (0, 0), (0, 1, 0))
        assert value_walk(p) == [0, 0, 1, 0, 0]
        assert total_variation(p) == 2

    def test_sup_counts_value_at_a(self):
        assert sup_norm(StepFunction((0, 1), (1,), -4)) == 4
        assert sup_norm(StepFunction((0, 1), (1,), -4), Interval(0, 1, lo_open=True)) == 1

    def test_nonpositive_eps(self):
        with pytest.raises(NonpositiveEpsilon):
            measure_exceedance(CHI, 0)
        with pytest.raises(NonpositiveEpsilon):
            measure_exceedance(CHI, "-1/2")

    @given(step_functions(max_pieces=12))
    def test_variation_matches_refinement_oracle(self, g):
        assert total_variation(g) == refinement_variation(g)
        assert total_variation(g, anchor=0) == refinement_variation(g, anchor=0)

    @given(step_functions(), st.fractions(Fr(1, 100), 5), st.fractions(Fr(1, 100), 5))
    def test_exceedance_monotone_and_chebyshev(self, g, e1, e2):
        e1, e2 = min(e1, e2), max(e1, e2)
        assert measure_exceedance(g, e1) >= measure_exceedance(g, e2)
        assert measure_exceedance(g, e1) <= l1_norm(g) / e1

    @given(step_functions())
    def test_l1_bounds(self, g):
        assert abs(g.integral(0, 1)) <= l1_norm(g) <= sup_norm(g)

    @given(step_pairs())
    def test_variation_subadditive(self, pair):
        g, h = pair
        assert total_variation(g + h) <= total_variation(g) + total_variation(h)


class TestNormalize:
    def test_already_normalized(self):
        rep = nbv_normalize(StepFunction((0, 1), (1,), 0))
        assert rep.shift == 0 and rep.changed_points == ()
        assert rep.normalized == StepFunction((0, 1), (1,), 0)

    def test_constant(self):
        rep = nbv_normalize(StepFunction.constant(1))
        assert rep.shift == 1
        assert rep.normalized == ZERO

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_alternating_constant(self, n):
        rep = nbv_normalize(StepFunction.constant((-1) ** n))
        assert rep.shift == (-1) ** n
        assert total_variation(rep.normalized) == 0

    def test_point_values_reset(self):
        p = PointStep((0, Fr(1, 2), 1), (1, 1), (1, 5, 1))
        rep = nbv_normalize(p)
        assert rep.changed_points == (Fr(1, 2),)
        assert rep.normalized == ZERO
        assert rep.shift == 1

    @given(step_functions(), st.fractions(0, 1, max_denominator=50))
    def test_normalized_is_shift(self, g, x):
        rep = nbv_normalize(g)
        assert rep.normalized.value_at_a == 0
        assert rep.normalized.is_canonical()
        assert rep.normalized.eval(x) == g.eval(x) - rep.shift
