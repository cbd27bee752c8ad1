"""Finite-horizon evidence for the convergence hypotheses and conclusions.

Every quantity is tracked as a :class:`TrendSeries` of ``(n, value)`` points
whose verdict comes from a declared :class:`Schedule`. Theorem checks combine
those verdicts and record any direction that fails at the tested horizon as
an :class:`Anomaly`.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .base import RATIONAL, coerce
from .errors import DomainMismatch, EmptyFamily, MissingCertificate, OutOfDomain
from .functions import DEFAULT_GRID, HKFunction, alexiewicz_norm, hk_integral, multiply_step
from .intervals import Interval
from .step import StepFunction, l1_norm, measure_exceedance, nbv_normalize, sup_norm, total_variation

CONVERGES = "converges"
DIVERGES = "diverges"
INCONCLUSIVE = "inconclusive"

DEFAULT_N = 64
DEFAULT_EPS = ("9/10", "1/2", "1/10", "1/100")
DEFAULT_PROBE_DEPTH = 4
THEOREMS = ("T1", "T2", "T3", "T4", "T5")


@dataclass(frozen=True)
class Schedule:
    """Decision rule for :func:`judge`.

    ``window=None`` compares the dyadic blocks ``[N/2, N]`` and
    ``[N/4, N/2)``; an integer compares the last ``window`` points with the
    ``window`` before them.
    """

    tol: float = 1e-9
    window: int | None = None
    ratio: float = 0.75


@dataclass(frozen=True)
class Verdict:
    kind: str
    limit: object = None
    achieved: object = None

    @property
    def converges(self) -> bool:
        return self.kind == CONVERGES


def _windows(ns: Sequence[int], schedule: Schedule):
    if schedule.window is None:
        top = ns[-1]
        last = [i for i, n in enumerate(ns) if 2 * n >= top]
        prev = [i for i, n in enumerate(ns) if 4 * n >= top > 2 * n]
        return last, prev
    w = schedule.window
    last = list(range(max(len(ns) - w, 0), len(ns)))
    prev = list(range(max(len(ns) - 2 * w, 0), max(len(ns) - w, 0)))
    return last, prev


def _is_exact(values, limit) -> bool:
    return isinstance(limit, (int, Fraction)) and all(isinstance(v, Fraction) for v in values)


def judge(points: Sequence[tuple], limit=0, schedule: Schedule = Schedule()) -> Verdict:
    """Converges when the final window is within ``tol`` of ``limit`` or its
    worst deviation is at most ``ratio`` times the previous window's; Diverges
    when the worst deviation has not decreased at all; else Inconclusive.

    Exact (rational) series use ``tol = 0``.
    """
    if not points:
        return Verdict(INCONCLUSIVE, limit)
    values = [v for _, v in points]
    exact = _is_exact(values, limit)
    tol = 0 if exact else schedule.tol
    ratio = Fraction(schedule.ratio) if exact else schedule.ratio
    dev = [abs(v - limit) for v in values]
    last, prev = _windows([n for n, _ in points], schedule)
    if not last:
        return Verdict(INCONCLUSIVE, limit)
    worst = max(dev[i] for i in last)
    if worst <= tol:
        return Verdict(CONVERGES, limit, worst)
    if not prev:
        return Verdict(INCONCLUSIVE, limit, worst)
    before = max(dev[i] for i in prev)
    if worst <= ratio * before:
        return Verdict(CONVERGES, limit, worst)
    if worst >= before:
        return Verdict(DIVERGES, limit, worst)
    return Verdict(INCONCLUSIVE, limit, worst)


def _plain(v):
    return v if isinstance(v, Fraction) else float(v)


@dataclass(frozen=True)
class TrendSeries:
    name: str
    points: tuple
    limit: object = 0
    schedule: Schedule = Schedule()

    def __post_init__(self):
        pts = tuple((int(n), _plain(v)) for n, v in self.points)
        for (n0, _), (n1, _) in zip(pts, pts[1:]):
            if not n0 < n1:
                raise ValueError("trend points must be strictly increasing in n")
        object.__setattr__(self, "points", pts)

    @property
    def ns(self) -> list[int]:
        return [n for n, _ in self.points]

    @property
    def values(self) -> list:
        return [v for _, v in self.points]

    @property
    def verdict(self) -> Verdict:
        return judge(self.points, self.limit, self.schedule)

    def value_at(self, n: int):
        return dict(self.points)[n]

    def extend(self, points) -> "TrendSeries":
        return replace(self, points=self.points + tuple(points))

    def to_csv(self) -> str:
        from .serialize import format_scalar
        rows = ["n,value"] + [f"{n},{format_scalar(v)}" for n, v in self.points]
        return "\n".join(rows) + "\n"


@dataclass(frozen=True)
class FunctionSequence:
    """A pure map ``n -> g_n`` of step functions on a shared base.

    ``ae_limit`` is set only when the pointwise a.e. limit is known
    analytically; it is the stand-in certificate for a.e. convergence.
    """

    name: str
    generator: Callable[[int], StepFunction]
    base: Interval
    declared_limit: StepFunction
    ae_limit: StepFunction | None = None

    def __call__(self, n: int) -> StepFunction:
        if n < 1:
            raise ValueError("sequences are indexed from n = 1")
        g = self.generator(n)
        if not g.base.same_endpoints(self.base):
            raise DomainMismatch(f"{self.name}: g_{n} has base {g.base}, expected {self.base}")
        return g

    def terms(self, N: int) -> list[StepFunction]:
        return [self(n) for n in range(1, N + 1)]


def _bounded(series: TrendSeries) -> bool:
    """No growth: the second half of the horizon never exceeds the first half's max."""
    top = series.ns[-1]
    early = [v for n, v in series.points if 2 * n <= top]
    late = [v for n, v in series.points if 2 * n > top]
    if not early:
        return True
    return max(late) <= max(early)


@dataclass(frozen=True)
class ConditionReport:
    N: int
    variation_sup: object
    supnorm_sup: object
    variation: TrendSeries
    supnorm: TrendSeries
    in_measure: dict = field(default_factory=dict)
    l1: TrendSeries | None = None
    interval_means: dict = field(default_factory=dict)

    @property
    def uniformly_bounded(self) -> bool:
        return _bounded(self.variation) and _bounded(self.supnorm)


def _limit_of(seq: FunctionSequence, g: StepFunction | None) -> StepFunction:
    return seq.declared_limit if g is None else g


def _compact(seq: FunctionSequence, I: Interval | None) -> Interval:
    I = seq.base if I is None else I
    if not I.bounded:
        raise OutOfDomain(f"{I} is not compact")
    return I


def _differences(seq, g, N):
    g = _limit_of(seq, g)
    return [seq(n) - g for n in range(1, N + 1)]


def _series(name, values, schedule, limit=0) -> TrendSeries:
    return TrendSeries(name, tuple(enumerate(values, start=1)), limit, schedule)


def uniform_bv_report(seq: FunctionSequence, N: int = DEFAULT_N,
                      schedule: Schedule = Schedule(), terms=None) -> ConditionReport:
    """Variation of each NBV-normalised ``g_n`` and sup norm of ``g_n``."""
    if N < 1:
        raise ValueError("horizon N must be at least 1")
    terms = seq.terms(N) if terms is None else terms
    variations = [total_variation(nbv_normalize(t).normalized) for t in terms]
    sups = [sup_norm(t) for t in terms]
    return ConditionReport(N, max(variations), max(sups),
                           _series("variation", variations, schedule),
                           _series("supnorm", sups, schedule))


def in_measure_trend(seq, g=None, eps_grid=DEFAULT_EPS, I=None, N=DEFAULT_N,
                     schedule: Schedule = Schedule(), diffs=None) -> dict:
    I = _compact(seq, I)
    diffs = _differences(seq, g, N) if diffs is None else diffs
    mode = diffs[0].mode
    out = {}
    for eps in eps_grid:
        eps = coerce(eps, mode)
        vals = [measure_exceedance(d, eps, I) for d in diffs]
        out[eps] = _series(f"in_measure[eps={eps}]", vals, schedule)
    return out


def l1_trend(seq, g=None, I=None, N=DEFAULT_N, schedule: Schedule = Schedule(),
             diffs=None) -> TrendSeries:
    I = _compact(seq, I)
    diffs = _differences(seq, g, N) if diffs is None else diffs
    return _series("l1", [l1_norm(d, I) for d in diffs], schedule)


def dyadic_probes(base: Interval, depth: int = DEFAULT_PROBE_DEPTH) -> list[Interval]:
    """Open dyadic subintervals of a compact base, levels 0..depth."""
    a, b = base.lo, base.hi
    probes = []
    for level in range(depth + 1):
        parts = 1 << level
        for j in range(parts):
            probes.append(Interval.open(a + (b - a) * Fraction(j, parts),
                                        a + (b - a) * Fraction(j + 1, parts)))
    return probes


def interval_mean_trend(seq, g=None, probes=None, N=DEFAULT_N,
                        schedule: Schedule = Schedule(), diffs=None) -> dict:
    probes = dyadic_probes(seq.base) if probes is None else probes
    diffs = _differences(seq, g, N) if diffs is None else diffs
    mode = diffs[0].mode
    out = {}
    for probe in probes:
        probe = Interval(coerce(probe.lo, mode), coerce(probe.hi, mode), probe.lo_open, probe.hi_open)
        vals = [abs(hk_integral(d, probe)) for d in diffs]
        out[probe] = _series(f"interval_mean[{probe}]", vals, schedule)
    return out


def pairing_trend(f: HKFunction, seq, g=None, N=DEFAULT_N, schedule: Schedule = Schedule(),
                  diffs=None) -> TrendSeries:
    """``n -> |int f g_n - int f g|`` over the base."""
    diffs = _differences(seq, g, N) if diffs is None else diffs
    vals = [abs(hk_integral(multiply_step(f, d))) for d in diffs]
    return _series("pairing", vals, schedule)


def alexiewicz_product_trend(f, seq, g=None, N=DEFAULT_N, schedule: Schedule = Schedule(),
                             diffs=None, grid=DEFAULT_GRID) -> TrendSeries:
    """``n -> ||f (g_n - g)||``."""
    diffs = _differences(seq, g, N) if diffs is None else diffs
    vals = [alexiewicz_norm(multiply_step(f, d), grid) for d in diffs]
    return _series("alexiewicz_product", vals, schedule)


def product_norm_trend(f, seq, g=None, N=DEFAULT_N, schedule: Schedule = Schedule(),
                       terms=None, grid=DEFAULT_GRID) -> TrendSeries:
    """``n -> | ||f g_n|| - ||f g|| |``."""
    terms = seq.terms(N) if terms is None else terms
    target = alexiewicz_norm(multiply_step(f, _limit_of(seq, g)), grid)
    vals = [abs(alexiewicz_norm(multiply_step(f, t), grid) - target) for t in terms]
    return _series("product_norm", vals, schedule)


def _slack(values, tol):
    return 0 if all(isinstance(v, Fraction) for v in values) else tol


def reverse_triangle_failures(alex: TrendSeries, pnorm: TrendSeries, tol=1e-9) -> list[int]:
    slack = _slack(alex.values + pnorm.values, tol)
    return [n for (n, lhs), (_, rhs) in zip(alex.points, pnorm.points) if lhs < rhs - slack]


def reverse_triangle_check(f, seq, g=None, N=DEFAULT_N, tol=1e-9) -> bool:
    """``||f (g_n - g)|| >= | ||f g_n|| - ||f g|| |`` for every ``n <= N``."""
    alex = alexiewicz_product_trend(f, seq, g, N)
    pnorm = product_norm_trend(f, seq, g, N)
    return not reverse_triangle_failures(alex, pnorm, tol)


def chebyshev_failures(in_measure: Mapping, l1: TrendSeries, tol=1e-9) -> list[tuple]:
    bad = []
    for eps, series in in_measure.items():
        slack = _slack(series.values + l1.values, tol)
        for (n, meas), (_, mass) in zip(series.points, l1.points):
            if meas > mass / eps + slack:
                bad.append((n, eps))
    return bad


def holder_failures(f: HKFunction, pairing: TrendSeries, diffs, tol=1e-9) -> list[int]:
    """Indices where ``|int f d_n| > ||f|| V(d_n)``, ``d_n`` anchored to 0 at the left end."""
    norm_f = alexiewicz_norm(f)
    bad = []
    for (n, value), d in zip(pairing.points, diffs):
        bound = norm_f * total_variation(d, anchor=0)
        slack = _slack([value, bound], tol)
        if value > bound + slack:
            bad.append(n)
    return bad


def condition_report(seq, g=None, N=DEFAULT_N, eps_grid=DEFAULT_EPS, probes=None, I=None,
                     schedule: Schedule = Schedule(), terms=None, diffs=None) -> ConditionReport:
    terms = seq.terms(N) if terms is None else terms
    g = _limit_of(seq, g)
    diffs = [t - g for t in terms] if diffs is None else diffs
    bv = uniform_bv_report(seq, N, schedule, terms)
    return replace(bv,
                   in_measure=in_measure_trend(seq, g, eps_grid, I, N, schedule, diffs),
                   l1=l1_trend(seq, g, I, N, schedule, diffs),
                   interval_means=interval_mean_trend(seq, g, probes, N, schedule, diffs))


# theorem verification


@dataclass(frozen=True)
class Anomaly:
    n: int | None
    f: str | None
    detail: str


@dataclass(frozen=True)
class TheoremVerdict:
    theorem_id: str
    conditions_hold: dict
    conclusion_holds: dict
    anomalies: tuple
    condition_status: dict = field(default_factory=dict)
    report: ConditionReport | None = None
    conclusions: dict = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return not self.anomalies


def _status(series_list) -> str:
    kinds = [s.verdict.kind for s in series_list]
    if all(k == CONVERGES for k in kinds):
        return "holds"
    if any(k == DIVERGES for k in kinds):
        return "fails"
    return "inconclusive"


REQUIRED_CONDITIONS = {
    "T1": ("interval_means", "nbv", "uniform_bv"),
    "T2": ("in_measure", "nbv", "uniform_bv"),
    "T3": ("in_measure", "nbv", "uniform_bv"),
    "T4": (),
    "T5": ("certificate",),
}

CONCLUSIONS = {
    "T1": ("pairing",),
    "T2": ("pairing",),
    "T3": ("alexiewicz_product",),
    "T4": ("pairing", "alexiewicz_product"),
    "T5": ("product_norm", "alexiewicz_product"),
}


def _ae_certified(seq: FunctionSequence, g: StepFunction) -> bool:
    if seq.ae_limit is None:
        return False
    return l1_norm(seq.ae_limit - g) == 0


def verify_theorem(theorem_id: str, seq: FunctionSequence, g: StepFunction | None = None,
                   family: Mapping[str, HKFunction] | Sequence[HKFunction] | None = None,
                   N: int = DEFAULT_N, schedule: Schedule = Schedule(),
                   eps_grid=DEFAULT_EPS, probes=None, I: Interval | None = None,
                   grid: int = DEFAULT_GRID) -> TheoremVerdict:
    """Evaluate one theorem's hypotheses and conclusions on ``seq`` up to ``N``.

    Anomalies: hypotheses all hold but a conclusion does not converge; every
    conclusion converges while a hypothesis fails; the two sides of an
    equivalence disagree over the family; or a pointwise inequality
    (Chebyshev, Hoelder, reverse triangle) is violated at some ``n``.
    """
    if theorem_id not in THEOREMS:
        raise ValueError(f"unknown theorem id {theorem_id!r}")
    if not family:
        raise EmptyFamily("a nonempty family of test functions is required")
    if not isinstance(family, Mapping):
        family = {f"f{i}": f for i, f in enumerate(family)}
    g = _limit_of(seq, g)
    terms = seq.terms(N)
    diffs = [t - g for t in terms]
    report = condition_report(seq, g, N, eps_grid, probes, I, schedule, terms, diffs)
    tol = schedule.tol
    anomalies = []

    status = {
        "interval_means": _status(report.interval_means.values()),
        "in_measure": _status(report.in_measure.values()),
        "l1": _status([report.l1]),
        "nbv": "holds",
        "uniform_bv": "holds" if report.uniformly_bounded else "fails",
    }
    if theorem_id == "T5":
        certified = status["in_measure"] == "holds" or _ae_certified(seq, g)
        if not certified:
            raise MissingCertificate(
                f"{seq.name}: no in-measure convergence and no declared a.e. limit equal to g")
        status["certificate"] = "holds"

    for n, eps in chebyshev_failures(report.in_measure, report.l1, tol):
        anomalies.append(Anomaly(n, None, f"Chebyshev bound fails at eps={eps}"))
    if report.uniformly_bounded and {status["in_measure"], status["l1"]} == {"holds", "fails"}:
        anomalies.append(Anomaly(None, None, "in-measure and L1 verdicts disagree under a uniform bound"))

    needed = set(CONCLUSIONS[theorem_id])
    if theorem_id in ("T3", "T4", "T5"):
        needed |= {"alexiewicz_product", "product_norm"}
    conclusions = {}
    for name, f in family.items():
        trends = {}
        if "pairing" in needed:
            trends["pairing"] = pairing_trend(f, seq, g, N, schedule, diffs)
            for n in holder_failures(f, trends["pairing"], diffs, tol):
                anomalies.append(Anomaly(n, name, "Hoelder bound |int f g| <= ||f|| V g fails"))
        if "alexiewicz_product" in needed:
            trends["alexiewicz_product"] = alexiewicz_product_trend(f, seq, g, N, schedule, diffs, grid)
        if "product_norm" in needed:
            trends["product_norm"] = product_norm_trend(f, seq, g, N, schedule, terms, grid)
            for n in reverse_triangle_failures(trends["alexiewicz_product"], trends["product_norm"], tol):
                anomalies.append(Anomaly(n, name, "reverse triangle inequality fails"))
        conclusions[name] = trends

    conclusion_holds = {
        c: {name: conclusions[name][c].verdict.converges for name in family}
        for c in CONCLUSIONS[theorem_id]
    }
    required = REQUIRED_CONDITIONS[theorem_id]
    conditions_hold = {c: status[c] == "holds" for c in required}
    if theorem_id == "T4":
        conditions_hold = {c: status[c] == "holds" for c in REQUIRED_CONDITIONS["T2"]}

    every_conclusion = all(all(v.values()) for v in conclusion_holds.values())
    if theorem_id != "T5":
        if all(conditions_hold.values()):
            for c, per_f in conclusion_holds.items():
                for name, ok in per_f.items():
                    if not ok:
                        kind = conclusions[name][c].verdict.kind
                        anomalies.append(Anomaly(None, name, f"conditions hold but {c} verdict is {kind}"))
        if every_conclusion and any(status[c] == "fails" for c in conditions_hold):
            anomalies.append(Anomaly(None, None, "every conclusion converges while a condition fails"))
    if theorem_id in ("T4", "T5"):
        left, right = CONCLUSIONS[theorem_id]
        if all(conclusion_holds[left].values()) != all(conclusion_holds[right].values()):
            anomalies.append(Anomaly(None, None, f"{left} and {right} disagree over the family"))

    return TheoremVerdict(theorem_id, conditions_hold, conclusion_holds, tuple(anomalies),
                          status, report, conclusions)
