"""``archzeta`` command line.

JSON goes to stdout (or ``--out``); human-readable notes go to stderr.
Exit status: 0 success, 1 verification failure, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

import jsonschema

from . import __version__
from .algebra import PolynomialSyntaxError, DegeneratePolynomialError, format_rational, parse_polynomial, parse_rational
from .bfunction import UnknownCorpusEntry, bfunction_for, minimal_exponent, reduce
from .newton import NewtonError, denef_sargos_report
from .sampling import Region, SamplePlan
from .schemas import validate
from .snc import ResolutionData, ResolutionDataError, candidate_poles, check_cor17, lct_snc, min_exponent_lower_bound
from .verify import load_suite_config, run_suite, verify_min_exponent
from .zeta_numeric import (
    DEFAULT_WINDOW,
    detect_poles,
    eval_zeta_direct,
    ladder_from_bfunction,
    reduce_by_gamma,
)

log = logging.getLogger("archzeta")
DEFAULT_SEED = 20240601


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{message}\n{self.format_usage()}")


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}")


def _window(text: str) -> tuple[float, float]:
    lo, hi = (float(v) for v in text.split(","))
    return lo, hi


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="archzeta", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    z = sub.add_parser("zeta", help="numeric zeta function")
    zsub = z.add_subparsers(dest="action", required=True, parser_class=_Parser)
    ev = zsub.add_parser("eval", help="Monte-Carlo Z_f(s)")
    _sampling_args(ev)
    ev.add_argument("--s", type=_complex, required=True)
    ev.add_argument("--region", help="c1,...,cn,r (complex center coordinates, radius)")
    po = zsub.add_parser("poles", help="detect poles from the level-set mass")
    _sampling_args(po)
    po.add_argument("--ladder", default="auto", help="'auto' (from b-function data) or a JSON file [[alpha, max_logpow], ...]")
    po.add_argument("--bfun", help="corpus entry used to build the automatic ladder")
    po.add_argument("--window", type=_window, default=DEFAULT_WINDOW, help="quantiles qlo,qhi")
    po.add_argument("--reduced", action="store_true", help="report poles of Z_f / Gamma(s+1)")
    po.add_argument("--region", help="c1,...,cn,r")
    po.add_argument("--out")
    po.add_argument("--csv", help="write t, F_empirical, F_model rows")

    s = sub.add_parser("snc", help="resolution data")
    ssub = s.add_subparsers(dest="action", required=True, parser_class=_Parser)
    an = ssub.add_parser("analyze")
    an.add_argument("file")
    an.add_argument("--floor", type=_rational)
    an.add_argument("--alpha", type=_rational)
    an.add_argument("--mult", type=int)
    an.add_argument("--out")

    n = sub.add_parser("newton", help="Newton polyhedron")
    nsub = n.add_subparsers(dest="action", required=True, parser_class=_Parser)
    na = nsub.add_parser("analyze")
    na.add_argument("--f", required=True)
    na.add_argument("--assume-nondegenerate", action="store_true")
    na.add_argument("--assume-stable", action="store_true")
    na.add_argument("--out")

    b = sub.add_parser("bfun", help="Bernstein-Sato root data")
    b.add_argument("--f", required=True)
    b.add_argument("--name", help="corpus entry name")
    b.add_argument("--corpus", help="alternative corpus JSON file")
    b.add_argument("--out")

    v = sub.add_parser("verify", help="cross-checks")
    vsub = v.add_subparsers(dest="action", required=True, parser_class=_Parser)
    su = vsub.add_parser("suite")
    su.add_argument("--config", required=True)
    su.add_argument("--workers", type=int, default=1)
    su.add_argument("--out")
    me = vsub.add_parser("min-exponent")
    _sampling_args(me)
    me.add_argument("--bfun", help="corpus entry name")
    me.add_argument("--window", type=_window, default=DEFAULT_WINDOW)
    me.add_argument("--out")
    return p


def _sampling_args(p):
    p.add_argument("--f", required=True, help="polynomial, e.g. 'x^2 - y^2*z'")
    p.add_argument("--samples", type=int, default=10**6)
    p.add_argument("--seed", type=int)
    p.add_argument("--sampler", choices=("pseudo", "sobol"), default="pseudo")


def _plan(args, region=None) -> SamplePlan:
    seed = args.seed
    if seed is None:
        seed = DEFAULT_SEED
        log.warning("no --seed given; using %d", seed)
    return SamplePlan(args.samples, seed, args.sampler, region)


def _emit(obj, schema: str, out=None):
    validate(obj, schema)
    text = json.dumps(obj, indent=2, sort_keys=False)
    if out:
        Path(out).write_text(text + "\n")
        log.info("wrote %s", out)
    else:
        sys.stdout.write(text + "\n")


def cmd_zeta(args) -> int:
    f = parse_polynomial(args.f)
    region = Region.parse(args.region) if args.region else None
    plan = _plan(args, region)
    if args.action == "eval":
        est = eval_zeta_direct(f, plan, args.s)
        log.info("Z(%s) = %s +- %.3g", args.s, est.value, est.stderr)
        _emit({"f": str(f), "s": [args.s.real, args.s.imag], "plan": plan.to_json(), **est.to_json()}, "zeta_eval")
        return 0
    if args.ladder == "auto":
        b, route = bfunction_for(f, args.bfun)
        from .verify import default_alpha_max

        ladder = ladder_from_bfunction(b, default_alpha_max(b, f.nvars))
        log.info("ladder from %s", route)
    else:
        ladder = [(parse_rational(a), int(k)) for a, k in json.loads(Path(args.ladder).read_text())]
    det = detect_poles(f, plan, ladder, window_q=args.window)
    report = reduce_by_gamma(det.report) if args.reduced else det.report
    if args.csv:
        edges = det.model.edges[1:]
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "F_empirical", "F_model"])
            for t, fm in zip(edges, det.model.evaluate(edges)):
                w.writerow([repr(float(t)), repr(det.cdf.mass_below(float(t))), repr(float(fm))])
    for p in report.poles:
        log.info("pole %s order %d", format_rational(p.location), p.order)
    _emit({"f": str(f), "ladder": [[format_rational(a), k] for a, k in det.ladder], **report.to_json(),
           "model": det.model.to_json()}, "pole_report", args.out)
    return 0


def cmd_snc(args) -> int:
    validate(json.loads(Path(args.file).read_text()), "resolution")
    res = ResolutionData.load(args.file)
    floor = args.floor if args.floor is not None else Fraction(-(max(len(res.divisors), 1) + 1))
    raw = json.loads(Path(args.file).read_text())
    if args.floor is None and "polynomial" in raw:
        floor = Fraction(-(parse_polynomial(raw["polynomial"]).nvars + 1))
    out = {
        "candidates": [c.to_json() for c in candidate_poles(res, floor)],
        "floor": format_rational(floor),
        "lct": format_rational(lct_snc(res)),
    }
    lb = min_exponent_lower_bound(res)
    out["min_exponent_lower_bound"] = "inf" if lb is None else format_rational(lb)
    status = 0
    if args.alpha is not None or args.mult is not None:
        if args.alpha is None or args.mult is None:
            raise UsageError("--alpha and --mult go together")
        rep = check_cor17(res, args.alpha, args.mult)
        out["cor17"] = rep.to_json()
        log.info("dual complex check: %s (dim %s, need %s)", rep.status, rep.dim, rep.required)
        status = 1 if rep.status == "fail" else 0
    _emit(out, "snc", args.out)
    return status


def cmd_newton(args) -> int:
    f = parse_polynomial(args.f)
    rep = denef_sargos_report(f, assume_nondegenerate=args.assume_nondegenerate, assume_stable=args.assume_stable)
    _emit({"f": str(f), **rep.to_json()}, "newton", args.out)
    return 0


def cmd_bfun(args) -> int:
    f = parse_polynomial(args.f)
    b, route = bfunction_for(f, args.name, args.corpus)
    me = minimal_exponent(reduce(b))
    _emit({"f": str(f), "route": route, "bfunction": b.to_json(), "reduced": reduce(b).to_json(),
           "minimal_exponent": me.to_json()}, "bfun", args.out)
    return 0


def cmd_verify(args) -> int:
    if args.action == "suite":
        cfg_path = Path(args.config)
        cfg = json.loads(cfg_path.read_text())
        validate(cfg, "suite_config")
        cases = load_suite_config(cfg, base_dir=cfg_path.parent)
        reports = run_suite(cases, workers=args.workers)
    else:
        f = parse_polynomial(args.f)
        b, route = bfunction_for(f, args.bfun)
        reports = [verify_min_exponent(f, reduce(b), _plan(args), window_q=args.window)]
    for r in reports:
        log.info("%-22s %-14s %s", r.case or args.__dict__.get("f", ""), r.claim, r.status)
    _emit([r.to_json() for r in reports], "verification", args.out)
    return 0 if all(r.ok for r in reports) else 1


_COMMANDS = {"zeta": cmd_zeta, "snc": cmd_snc, "newton": cmd_newton, "bfun": cmd_bfun, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"archzeta: {exc}")
        return 2
    # bind to the current stderr on every call so embedding callers can redirect it
    for h in list(log.handlers):
        log.removeHandler(h)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.INFO if args.verbose else logging.WARNING)
    log.propagate = False
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"archzeta: {exc}\n")
        return 2
    except jsonschema.ValidationError as exc:
        where = "/".join(str(k) for k in exc.absolute_path) or "<root>"
        sys.stderr.write(f"archzeta: error: invalid document at {where}: {exc.message}\n")
        return 2
    except (PolynomialSyntaxError, DegeneratePolynomialError, UnknownCorpusEntry, ResolutionDataError,
            NewtonError, ValueError, OSError) as exc:
        sys.stderr.write(f"archzeta: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
