"""``hkconv`` command line: ``norm``, ``trend`` and ``verify``.

Exit codes:

=====  =========================================================
0      success, no anomalies
1      ``verify`` recorded a direction-consistency anomaly
2      malformed input (bad config, function description or flag)
3      unbounded base without a declared limit of the primitive
4      domain mismatch between functions
5      missing convergence certificate (``verify T5``)
=====  =========================================================
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import asdict, replace

from .base import MODES, RATIONAL
from .convergence import THEOREMS
from .errors import (
    DomainMismatch,
    HKError,
    MissingCertificate,
    SpecError,
    UnboundedWithoutLimit,
)
from .experiment import (
    config_from_dict,
    dump_json,
    load_config,
    manifest_for,
    parse_schedule,
    run_trends,
    run_verify,
    verdict_dict,
    write_trend_outputs,
    write_verify_outputs,
)
from .functions import alexiewicz_estimate, as_step, hk_integral
from .gallery import GALLERY_IDS, GallerySpec
from .serialize import dump_function, format_scalar, load_function_file
from .step import StepFunction, l1_norm, sup_norm, total_variation

EXIT_OK = 0
EXIT_ANOMALY = 1
EXIT_MALFORMED = 2
EXIT_UNBOUNDED = 3
EXIT_DOMAIN = 4
EXIT_CERTIFICATE = 5


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, UnboundedWithoutLimit):
        return EXIT_UNBOUNDED
    if isinstance(exc, DomainMismatch):
        return EXIT_DOMAIN
    if isinstance(exc, MissingCertificate):
        return EXIT_CERTIFICATE
    return EXIT_MALFORMED


def _gallery_params(args) -> dict:
    params = {}
    for key in ("p", "q", "L", "seed", "a"):
        v = getattr(args, key, None)
        if v is not None:
            params[key] = v
    return params


def _norm_function(args):
    if args.zero:
        return StepFunction.zero(0, 1, mode=args.mode)
    if args.spec:
        f = load_function_file(args.spec)
        if isinstance(f, StepFunction) and args.mode != f.mode:
            f = f.as_float() if args.mode != RATIONAL else f.as_rational()
        return f
    if args.gallery:
        spec = GallerySpec(args.gallery, _gallery_params(args))
        needs_n = args.gallery in ("typewriter", "alternating", "heaviside")
        if needs_n and args.n is None:
            raise SpecError(f"--n is required for gallery id {args.gallery!r}")
        return spec.function(args.n, args.mode)
    raise SpecError("one of --gallery, --spec or --zero is required")


def cmd_norm(args) -> int:
    f = _norm_function(args)
    est = alexiewicz_estimate(f)
    step = as_step(f)
    doc = {
        "base": str(f.base),
        "mode": f.mode,
        "integral": format_scalar(hk_integral(f)),
        "alexiewicz": format_scalar(est.value),
        "alexiewicz_exact": est.exact,
    }
    if not est.exact:
        doc["alexiewicz_bracket_width"] = format_scalar(est.bracket)
    if step is not None:
        doc.update({
            "function": dump_function(step),
            "l1": format_scalar(l1_norm(step)),
            "sup": format_scalar(sup_norm(step)),
            "variation": format_scalar(total_variation(step)),
        })
    else:
        doc.update({"l1": None, "sup": None, "variation": None})
        try:
            doc["function"] = dump_function(f)
        except SpecError:
            pass
    sys.stdout.write(dump_json(doc))
    return EXIT_OK


def _split(text):
    return [t.strip() for t in text.split(",") if t.strip()]


def _config(args) -> dict:
    """Configuration dict from ``--config`` and ``--gallery`` plus overriding flags."""
    if args.config:
        cfg = load_config(args.config)
        raw = cfg.to_dict()
    elif args.gallery:
        raw = {"sequence": {"id": args.gallery, **_gallery_params(args)}}
    else:
        raise SpecError("a configuration file or --gallery is required")
    if args.N is not None:
        raw["N"] = args.N
    if args.eps is not None:
        raw["eps"] = _split(args.eps)
    if args.mode is not None:
        raw["mode"] = args.mode
    if args.family is not None:
        raw["family"] = _split(args.family)
    if args.schedule is not None:
        s = parse_schedule(args.schedule)
        raw["schedule"] = {"tol": s.tol, "window": s.window, "ratio": s.ratio}
    return raw


def cmd_trend(args) -> int:
    cfg = config_from_dict(_config(args))
    series = run_trends(cfg)
    if args.out:
        summary = write_trend_outputs(cfg, series, args.out)
    else:
        summary = {
            "manifest": asdict(manifest_for(cfg)),
            "series": {k: {"name": s.name, "verdict": verdict_dict(s.verdict),
                           "values": [format_scalar(v) for v in s.values]}
                       for k, s in series.items()},
        }
    sys.stdout.write(dump_json(summary))
    return EXIT_OK


def cmd_verify(args) -> int:
    raw = _config(args)
    cfg = config_from_dict(raw)
    theorem = args.theorem
    if cfg.theorem is not None and cfg.theorem != theorem:
        cfg = replace(cfg, theorem=theorem)
    verdict, doc = run_verify(cfg, theorem)
    if args.out:
        write_verify_outputs(verdict, doc, args.out)
    sys.stdout.write(dump_json(doc))
    return EXIT_OK if verdict.consistent else EXIT_ANOMALY


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_MALFORMED)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hkconv", description=__doc__.splitlines()[0],
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gallery = _Parser(add_help=False)
    gallery.add_argument("--gallery", choices=GALLERY_IDS)
    gallery.add_argument("--p", type=int)
    gallery.add_argument("--q", type=int)
    gallery.add_argument("--L", type=int, help="truncate the heaviside sequence to [0, L]")
    gallery.add_argument("--seed", type=int)
    gallery.add_argument("--a", type=float, help="left end of cos(x)/x")

    norm = sub.add_parser("norm", parents=[gallery], help="norms and variation of one function")
    norm.add_argument("--n", type=int, help="sequence index for gallery sequences")
    norm.add_argument("--spec", help="JSON function description")
    norm.add_argument("--zero", action="store_true", help="the zero step function on [0, 1]")
    norm.add_argument("--mode", choices=MODES, default=RATIONAL)
    norm.set_defaults(func=cmd_norm)

    run = _Parser(add_help=False)
    run.add_argument("--config", help="experiment configuration (JSON)")
    run.add_argument("--N", type=int, help="horizon")
    run.add_argument("--eps", help="comma separated exceedance levels, e.g. 1/2,1/10")
    run.add_argument("--mode", choices=MODES)
    run.add_argument("--out", help="output directory")
    run.add_argument("--family", help="comma separated family ids")
    run.add_argument("--schedule", help="tol,window[,ratio]; window may be 'dyadic'")

    trend = sub.add_parser("trend", parents=[gallery, run], help="trend series to CSV")
    trend.add_argument("config_file", nargs="?", help="experiment configuration (JSON)")
    trend.set_defaults(func=cmd_trend)

    verify = sub.add_parser("verify", parents=[gallery, run], help="check one theorem's directions")
    verify.add_argument("theorem", choices=THEOREMS)
    verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config_file", None):
        if args.config:
            parser.error("give the configuration once")
        args.config = args.config_file
    try:
        return args.func(args)
    except (HKError, ValueError) as exc:
        sys.stderr.write(f"hkconv: {type(exc).__name__}: {exc}\n")
        return exit_code_for(exc)


if __name__ == "__main__":
    raise SystemExit(main())
