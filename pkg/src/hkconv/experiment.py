"""Experiment configurations, run manifests and deterministic report files.

A configuration is a JSON object::

    {"sequence": {"id": "typewriter"},
     "limit": "declared",                  # or "zero", "first", or a step description
     "family": ["indicator", "two_piece", "oscillatory"],
     "N": 64, "eps": ["9/10", "1/2", "1/10", "1/100"], "probes": "dyadic:4",
     "schedule": {"tol": 1e-9, "window": null, "ratio": 0.75},
     "mode": "rational", "trends": ["in_measure", "pairing"], "theorem": "T2"}

Every key except ``sequence`` is optional.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from .base import FLOAT, MODES, RATIONAL
from .convergence import (
    DEFAULT_EPS,
    DEFAULT_N,
    THEOREMS,
    FunctionSequence,
    Schedule,
    TheoremVerdict,
    TrendSeries,
    alexiewicz_product_trend,
    condition_report,
    dyadic_probes,
    pairing_trend,
    product_norm_trend,
    verify_theorem,
)
from .errors import SpecError
from .functions import compactify
from .gallery import (
    GallerySpec,
    alternating,
    constant_sequence,
    cos_over_x,
    default_family,
    oscillatory,
    two_piece,
)
from .intervals import Interval
from .serialize import format_scalar, load_function, parse_scalar
from .step import StepFunction

ALL_TRENDS = ("variation", "supnorm", "in_measure", "l1", "interval_means",
              "pairing", "alexiewicz_product", "product_norm")
SEQUENCE_IDS = ("typewriter", "alternating", "heaviside", "random_step", "constant")


@dataclass(frozen=True)
class ExperimentConfig:
    sequence: dict
    limit: object = "declared"
    family: tuple | None = None
    N: int = DEFAULT_N
    eps: tuple = DEFAULT_EPS
    probes: object = "dyadic:4"
    schedule: Schedule = Schedule()
    mode: str = RATIONAL
    trends: tuple = ALL_TRENDS
    theorem: str | None = None

    def to_dict(self) -> dict:
        out = asdict(self)
        out["family"] = list(self.family) if self.family is not None else None
        out["eps"] = [str(e) for e in self.eps]
        out["trends"] = list(self.trends)
        return out

    def checksum(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"), default=str)
        return hashlib.sha256(blob.encode()).hexdigest()


def parse_schedule(raw) -> Schedule:
    """From a dict or the CLI text ``"tol,window[,ratio]"`` (window may be ``dyadic``)."""
    if raw is None:
        return Schedule()
    if isinstance(raw, Schedule):
        return raw
    try:
        if isinstance(raw, str):
            parts = [p.strip() for p in raw.split(",")]
            tol = float(parts[0])
            window = None if len(parts) < 2 or parts[1] in ("", "dyadic", "none") else int(parts[1])
            ratio = float(parts[2]) if len(parts) > 2 else Schedule.ratio
            return Schedule(tol, window, ratio)
        if isinstance(raw, dict):
            return Schedule(float(raw.get("tol", Schedule.tol)),
                            None if raw.get("window") is None else int(raw["window"]),
                            float(raw.get("ratio", Schedule.ratio)))
    except (ValueError, TypeError) as exc:
        raise SpecError(f"bad schedule {raw!r}: {exc}") from exc
    raise SpecError(f"bad schedule {raw!r}")


def config_from_dict(raw: dict) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise SpecError("configuration must be a JSON object")
    unknown = set(raw) - {"sequence", "limit", "family", "N", "eps", "probes", "schedule",
                          "mode", "trends", "theorem"}
    if unknown:
        raise SpecError(f"unknown configuration keys: {sorted(unknown)}")
    seq = raw.get("sequence")
    if isinstance(seq, str):
        seq = {"id": seq}
    if not isinstance(seq, dict) or seq.get("id") not in SEQUENCE_IDS:
        raise SpecError(f"sequence must name one of {SEQUENCE_IDS}")
    mode = raw.get("mode", RATIONAL)
    if mode not in MODES:
        raise SpecError(f"mode must be one of {MODES}")
    try:
        N = int(raw.get("N", DEFAULT_N))
    except (TypeError, ValueError) as exc:
        raise SpecError(f"bad horizon: {exc}") from exc
    if N < 1:
        raise SpecError("horizon N must be at least 1")
    trends = tuple(raw.get("trends", ALL_TRENDS))
    bad = set(trends) - set(ALL_TRENDS)
    if bad:
        raise SpecError(f"unknown trends {sorted(bad)}")
    theorem = raw.get("theorem")
    if theorem is not None and theorem not in THEOREMS:
        raise SpecError(f"theorem must be one of {THEOREMS}")
    eps = tuple(str(e) for e in raw.get("eps", DEFAULT_EPS))
    for e in eps:
        if not parse_scalar(e, mode) > 0:
            raise SpecError(f"eps values must be positive, got {e}")
    family = raw.get("family")
    return ExperimentConfig(seq, raw.get("limit", "declared"),
                            tuple(family) if family is not None else None,
                            N, eps, raw.get("probes", "dyadic:4"),
                            parse_schedule(raw.get("schedule")), mode, trends, theorem)


def load_config(path) -> ExperimentConfig:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: invalid JSON: {exc}") from exc
    except OSError as exc:
        raise SpecError(f"{path}: {exc}") from exc
    return config_from_dict(raw)


# building the objects a configuration names


def build_sequence(cfg: ExperimentConfig) -> FunctionSequence:
    spec = dict(cfg.sequence)
    sid = spec.pop("id")
    if sid == "constant":
        g = load_function(spec.get("function", {"kind": "zero"}), cfg.mode)
        if not isinstance(g, StepFunction):
            raise SpecError("constant sequences need a step function")
        return constant_sequence(g)
    return GallerySpec(sid, spec).sequence(cfg.mode)


def build_limit(cfg: ExperimentConfig, seq: FunctionSequence) -> StepFunction:
    lim = cfg.limit
    if lim == "declared":
        return seq.declared_limit
    if lim == "zero":
        return seq.declared_limit - seq.declared_limit
    if lim == "first":
        return seq(1)
    if isinstance(lim, dict):
        g = load_function(lim, cfg.mode)
        if not isinstance(g, StepFunction):
            raise SpecError("limit must be a step function")
        return g
    raise SpecError(f"bad limit {lim!r}")


def _family_member(item, base: Interval, mode: str):
    if isinstance(item, dict) and "kind" in item:
        f = load_function(item, mode)
    else:
        spec = {"id": item} if isinstance(item, str) else dict(item)
        fid = spec.pop("id", None)
        if fid == "indicator":
            f = default_family(base, mode)["indicator"]
        elif fid == "two_piece":
            f = two_piece(base, mode)
        elif fid == "oscillatory":
            f = oscillatory(int(spec.get("p", 2)), int(spec.get("q", 3)))
        elif fid == "cos_over_x":
            f = cos_over_x(float(spec.get("a", 1.0)))
        else:
            raise SpecError(f"unknown family id {fid!r}")
    if not f.base.bounded:
        f = compactify(f)
    return f


def _family_name(item) -> str:
    if isinstance(item, str):
        return item
    if isinstance(item, dict) and "id" in item:
        extras = "_".join(f"{k}{v}" for k, v in sorted(item.items()) if k != "id")
        return item["id"] + (f"_{extras}" if extras else "")
    return hashlib.sha256(json.dumps(item, sort_keys=True).encode()).hexdigest()[:10]


def build_family(cfg: ExperimentConfig, seq: FunctionSequence) -> dict:
    if cfg.family is None:
        family = default_family(seq.base, cfg.mode)
        if cfg.sequence.get("id") == "heaviside" and "L" not in cfg.sequence:
            family["cos_over_x"] = compactify(cos_over_x(1.0))
        return family
    if not cfg.family:
        return {}
    return {_family_name(item): _family_member(item, seq.base, cfg.mode) for item in cfg.family}


def build_probes(cfg: ExperimentConfig, seq: FunctionSequence) -> list[Interval]:
    raw = cfg.probes
    if isinstance(raw, str) and raw.startswith("dyadic:"):
        try:
            depth = int(raw.split(":", 1)[1])
        except ValueError as exc:
            raise SpecError(f"bad probes {raw!r}") from exc
        return dyadic_probes(seq.base, depth)
    if isinstance(raw, list):
        out = []
        for pair in raw:
            if not isinstance(pair, list) or len(pair) != 2:
                raise SpecError(f"probe must be [lo, hi], got {pair!r}")
            lo, hi = (parse_scalar(x, cfg.mode) for x in pair)
            out.append(Interval.open(lo, hi))
        return out
    raise SpecError(f"bad probes {raw!r}")


# running


@dataclass(frozen=True)
class RunManifest:
    config_checksum: str
    version: str
    mode: str
    N: int
    schedule: dict
    outputs: list = field(default_factory=list)


def manifest_for(cfg: ExperimentConfig, outputs=()) -> RunManifest:
    return RunManifest(cfg.checksum(), __version__, cfg.mode, cfg.N, asdict(cfg.schedule),
                       sorted(outputs))


def _slug(text: str) -> str:
    keep = [c if c.isalnum() or c in "-_." else "_" for c in text]
    return "".join(keep).strip("_")


def run_trends(cfg: ExperimentConfig) -> dict[str, TrendSeries]:
    """All requested trend series, keyed by their output file stem."""
    seq = build_sequence(cfg)
    g = build_limit(cfg, seq)
    terms = seq.terms(cfg.N)
    diffs = [t - g for t in terms]
    probes = build_probes(cfg, seq)
    want = set(cfg.trends)
    out: dict[str, TrendSeries] = {}
    report = condition_report(seq, g, cfg.N, cfg.eps, probes, None, cfg.schedule, terms, diffs)
    if "variation" in want:
        out["variation"] = report.variation
    if "supnorm" in want:
        out["supnorm"] = report.supnorm
    if "in_measure" in want:
        for eps, series in report.in_measure.items():
            out[_slug(f"in_measure_eps_{format_scalar(eps)}")] = series
    if "l1" in want:
        out["l1"] = report.l1
    if "interval_means" in want:
        for i, series in enumerate(report.interval_means.values()):
            out[f"interval_mean_p{i:02d}"] = series
    family = build_family(cfg, seq) if want & {"pairing", "alexiewicz_product", "product_norm"} else {}
    for name, f in family.items():
        if "pairing" in want:
            out[_slug(f"pairing_{name}")] = pairing_trend(f, seq, g, cfg.N, cfg.schedule, diffs)
        if "alexiewicz_product" in want:
            out[_slug(f"alexiewicz_product_{name}")] = alexiewicz_product_trend(
                f, seq, g, cfg.N, cfg.schedule, diffs)
        if "product_norm" in want:
            out[_slug(f"product_norm_{name}")] = product_norm_trend(
                f, seq, g, cfg.N, cfg.schedule, terms)
    return out


def verdict_dict(v) -> dict:
    return {"kind": v.kind,
            "limit": None if v.limit is None else format_scalar(v.limit),
            "achieved": None if v.achieved is None else format_scalar(v.achieved)}


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def write_trend_outputs(cfg: ExperimentConfig, series: dict, out_dir) -> dict:
    """One ``n,value`` CSV per series plus ``summary.json``; returns the summary."""
    out_dir = Path(out_dir)
    files = []
    for stem, s in series.items():
        _write(out_dir / f"{stem}.csv", s.to_csv())
        files.append(f"{stem}.csv")
    summary = {
        "manifest": asdict(manifest_for(cfg, files + ["summary.json"])),
        "config": cfg.to_dict(),
        "series": {stem: {"name": s.name, "points": len(s.points), "verdict": verdict_dict(s.verdict)}
                   for stem, s in series.items()},
    }
    _write(out_dir / "summary.json", dump_json(summary))
    return summary


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=str) + "\n"


def run_verify(cfg: ExperimentConfig, theorem: str) -> tuple[TheoremVerdict, dict]:
    seq = build_sequence(cfg)
    g = build_limit(cfg, seq)
    family = build_family(cfg, seq)
    verdict = verify_theorem(theorem, seq, g, family, cfg.N, cfg.schedule, cfg.eps,
                             build_probes(cfg, seq))
    return verdict, theorem_verdict_dict(verdict, seq, cfg)


def theorem_verdict_dict(v: TheoremVerdict, seq: FunctionSequence, cfg: ExperimentConfig) -> dict:
    conclusions = {
        f"{kind}_{name}": verdict_dict(series.verdict)
        for name, trends in v.conclusions.items() for kind, series in trends.items()
    }
    report = v.report
    return {
        "theorem": v.theorem_id,
        "sequence": seq.name,
        "conditions_hold": v.conditions_hold,
        "condition_status": v.condition_status,
        "conclusion_holds": v.conclusion_holds,
        "conclusion_verdicts": conclusions,
        "variation_sup": format_scalar(report.variation_sup),
        "supnorm_sup": format_scalar(report.supnorm_sup),
        "anomalies": [{"n": a.n, "f": a.f, "detail": a.detail} for a in v.anomalies],
        "consistent": v.consistent,
        "manifest": asdict(manifest_for(cfg)),
    }


def write_verify_outputs(v: TheoremVerdict, doc: dict, out_dir):
    out_dir = Path(out_dir)
    for name, trends in v.conclusions.items():
        for kind, series in trends.items():
            _write(out_dir / f"{_slug(f'{kind}_{name}')}.csv", series.to_csv())
    _write(out_dir / "verdict.json", dump_json(doc))
