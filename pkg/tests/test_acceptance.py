"""Acceptance criteria AC1-AC9; ``pytest`` prints one PASS/FAIL line per criterion."""
import math
import time
from fractions import Fraction as Fr

import pytest
from oracles import brute_subinterval_max, riemann_midpoint

from hkconv.cli import main
from hkconv.convergence import (
    CONVERGES,
    DIVERGES,
    alexiewicz_product_trend,
    chebyshev_failures,
    condition_report,
    pairing_trend,
    product_norm_trend,
    reverse_triangle_failures,
    verify_theorem,
)
from hkconv.errors import MissingCertificate
from hkconv.functions import alexiewicz_norm, compactify, hk_integral, multiply_step
from hkconv.gallery import (
    alternating_sequence,
    cos_over_x,
    default_family,
    heaviside,
    heaviside_image,
    heaviside_sequence,
    oscillatory,
    random_sequence,
    random_step,
    typewriter,
    typewriter_indices,
    typewriter_sequence,
)
from hkconv.intervals import Interval
from hkconv.step import measure_exceedance, nbv_normalize, sup_norm, total_variation

SEEDS = range(500)


def test_ac1_typewriter_golden_table():
    start = time.perf_counter()
    for n in range(1, 65):
        g = typewriter(n)
        width = Fr(1, 2 ** typewriter_indices(n)[0])
        assert alexiewicz_norm(g) == width
        for eps in ("9/10", "1/2", "1/10"):
            lam = measure_exceedance(g, eps)
            assert lam == width and lam < Fr(2, n)
        assert sup_norm(g) == 1
        assert total_variation(g) <= 2
    assert time.perf_counter() - start < 1.0


def test_ac2_typewriter_has_no_pointwise_limit():
    grid = [Fr(i, 17) for i in range(1, 18)]
    terms = [typewriter(n) for n in range(1, 65)]
    for x in grid:
        seen = {g.eval(x) for g in terms}
        assert seen == {0, 1}


class TestAC3:
    SEQ = alternating_sequence()

    @pytest.mark.parametrize("name", ["indicator", "two_piece", "oscillatory"])
    def test_ac3_product_trends(self, name):
        f = default_family()[name]
        norm = alexiewicz_norm(f)
        assert norm > 0
        alex = alexiewicz_product_trend(f, self.SEQ, N=20)
        for n, v in alex.points:
            assert v == (0 if n % 2 else 2 * norm)
        assert all(v == 0 for v in product_norm_trend(f, self.SEQ, N=20).values)

    def test_ac3_no_certificate(self, capsys):
        with pytest.raises(MissingCertificate):
            verify_theorem("T5", self.SEQ, family=default_family(), N=20)
        assert main(["verify", "T5", "--gallery", "alternating", "--N", "20"]) == 5
        capsys.readouterr()


class TestAC4:
    F = compactify(cos_over_x())
    PAIRING = pairing_trend(F, heaviside_sequence("float"), N=30)

    def test_ac4_variation_of_each_compactified_term(self):
        for n in range(1, 65):
            assert total_variation(heaviside_image(n)) == 1

    def test_ac4_pairing_tracks_tail_integral(self):
        for n, v in self.PAIRING.points:
            assert abs(v - abs(math.cos(n) / n)) <= 1e-6
        assert self.PAIRING.verdict.kind == CONVERGES

    @pytest.mark.xfail(strict=True, reason="|int_30^inf cos(x)/x dx| = |cos 30|/30 ~ 5.1e-3 > 1e-6")
    def test_ac4_pairing_within_1e6_of_zero_by_30(self):
        assert self.PAIRING.value_at(30) <= 1e-6

    def test_ac4_truncated_exceedance(self):
        L = 1000
        for n in [*range(1, 65), 500, 999, 1000, 1001]:
            assert measure_exceedance(heaviside(n, L), Fr(1, 2)) == max(L - n, 0)


def test_ac5_norm_matches_brute_force():
    start = time.perf_counter()
    for seed in SEEDS:
        g = random_step(seed, m_max=50)
        assert alexiewicz_norm(g) == brute_subinterval_max(g)
    assert time.perf_counter() - start < 10.0


def test_ac6_hoelder_bound_exact():
    for seed in SEEDS:
        f = random_step(2 * seed, m_max=50)
        g = nbv_normalize(random_step(2 * seed + 1, m_max=50)).normalized
        assert abs(hk_integral(multiply_step(f, g))) <= alexiewicz_norm(f) * total_variation(g)


def test_ac6_hoelder_bound_oscillatory():
    f = oscillatory(2, 3)
    norm = alexiewicz_norm(f)
    for seed in range(50):
        g = nbv_normalize(random_step(seed, m_max=50)).normalized.as_float()
        assert abs(hk_integral(multiply_step(f, g))) <= norm * total_variation(g) + 1e-9


def _inequality_failures(seq, family, N):
    report = condition_report(seq, N=N)
    bad = list(chebyshev_failures(report.in_measure, report.l1, tol=0))
    for f in family.values():
        alex = alexiewicz_product_trend(f, seq, N=N)
        pnorm = product_norm_trend(f, seq, N=N)
        bad += reverse_triangle_failures(alex, pnorm, tol=1e-9)
    return bad


@pytest.mark.parametrize("seq", [typewriter_sequence(), alternating_sequence(), heaviside_sequence(),
                                 *(random_sequence(s) for s in range(4))],
                         ids=["typewriter", "alternating", "heaviside", *(f"random{s}" for s in range(4))])
def test_ac7_inequalities_hold_pointwise(seq):
    family = {k: v for k, v in default_family(seq.base).items() if k != "oscillatory"}
    assert _inequality_failures(seq, family, 32) == []


def test_ac7_inequalities_with_antiderivative():
    fam = {"oscillatory": oscillatory(2, 3)}
    assert _inequality_failures(typewriter_sequence(), fam, 32) == []
    assert _inequality_failures(alternating_sequence(), fam, 20) == []


def test_ac8_direction_consistency():
    start = time.perf_counter()
    fam = default_family()
    for tid in ("T1", "T2", "T3", "T4"):
        tw = verify_theorem(tid, typewriter_sequence(), family=fam, N=64)
        assert all(tw.conditions_hold.values())
        for per_f in tw.conclusions.values():
            assert all(s.verdict.kind == CONVERGES for s in per_f.values())
        assert tw.anomalies == ()

        alt = verify_theorem(tid, alternating_sequence(), family=fam, N=64)
        assert alt.condition_status["in_measure"] == "fails"
        for c in alt.conclusion_holds:
            assert all(alt.conclusions[f][c].verdict.kind == DIVERGES for f in fam)
        assert alt.anomalies == ()
    assert time.perf_counter() - start < 60.0


def test_ac9_ftc_riemann_sums():
    f = oscillatory(2, 3)
    exact = hk_integral(f, Interval(0.5, 1.0))
    assert exact == pytest.approx(math.sin(1) - 0.25 * math.sin(8), abs=1e-15)
    levels = [2 ** k for k in range(8, 21, 2)]
    errs = [abs(riemann_midpoint(f.f, 0.5, 1.0, m) - exact) / abs(exact) for m in levels]
    assert errs[-1] < 1e-6
    assert all(b <= a for a, b in zip(errs[2:], errs[3:]))
