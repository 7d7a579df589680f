"""Pass/fail checks that run the exact and numeric pipelines against each other."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebra import Polynomial, classify_shape, format_rational, parse_polynomial, parse_rational
from .bfunction import BFunction, bfunction_for, minimal_exponent, reduce
from .newton import denef_sargos_report
from .sampling import Region, SamplePlan
from .snc import ResolutionData, candidate_poles, check_cor17
from .zeta_numeric import (
    DEFAULT_DEPTH,
    DEFAULT_WINDOW,
    Detection,
    EmpiricalCDF,
    PoleReport,
    detect_poles,
    eval_zeta_direct,
    exact_monomial_report,
    ladder_from_bfunction,
    reduce_by_gamma,
    sample_abs_f,
)

CLAIMS = (
    "min_exponent_pole",
    "largest_pole_is_lct",
    "gamma_reduction",
    "shift_identity",
    "cor17",
    "snc_consistency",
    "newton_consistency",
)


@dataclass(frozen=True)
class VerificationReport:
    claim: str
    status: str  # pass | fail | inapplicable
    details: dict = field(default_factory=dict)
    case: str = ""

    @property
    def ok(self) -> bool:
        return self.status in ("pass", "inapplicable")

    def to_json(self) -> dict:
        return {"case": self.case, "claim": self.claim, "status": self.status, "details": _jsonable(self.details)}


def _jsonable(x):
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, dict):
        return {str(k) if not isinstance(k, Fraction) else format_rational(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


def seed_pair(plan: SamplePlan) -> tuple[SamplePlan, SamplePlan]:
    """The plan and an independent sibling (seed + 1), used for every statistical claim."""
    return plan, plan.with_seed((plan.seed + 1) % 2**64)


def default_alpha_max(b: BFunction, nvars: int) -> Fraction:
    lowest = min(b.roots) if b.roots else Fraction(1)
    return lowest + nvars + 1


class _DetectionCache:
    """Memoises samples and fits within one suite run; keyed by canonical inputs."""

    def __init__(self):
        self._cdf: dict = {}
        self._det: dict = {}

    def cdf(self, f: Polynomial, plan: SamplePlan) -> EmpiricalCDF:
        key = (f, plan)
        if key not in self._cdf:
            self._cdf[key] = sample_abs_f(f, plan)
        return self._cdf[key]

    def detect(self, f, plan, ladder, window_q, depth) -> Detection:
        key = (f, plan, tuple(ladder), tuple(window_q), depth)
        if key not in self._det:
            self._det[key] = detect_poles(f, plan, ladder, window_q=window_q, depth=depth, cdf=self.cdf(f, plan))
        return self._det[key]



def _cache(cache):
    return cache if cache is not None else _DetectionCache()


def _summary(r: PoleReport) -> list:
    return [[format_rational(p.location), p.order] for p in r.poles]


def verify_min_exponent(
    f: Polynomial,
    b_reduced: BFunction,
    plan: SamplePlan,
    *,
    window_q=DEFAULT_WINDOW,
    depth=DEFAULT_DEPTH,
    cache=None,
) -> VerificationReport:
    """Largest pole of the reduced zeta function sits at ``-alpha~`` with order ``mult alpha~`` in ``b~``."""
    me = minimal_exponent(b_reduced)
    if me.is_infinite:
        return VerificationReport("min_exponent_pole", "inapplicable",
                                  {"reason": "minimal exponent is +inf (smooth f); reduced zeta is entire"})
    cache = _cache(cache)
    b_full = b_reduced.adjoin_one()
    ladder = ladder_from_bfunction(b_full, default_alpha_max(b_full, f.nvars))
    expected_loc, expected_order = -me.alpha_tilde, me.multiplicity
    runs = []
    for p in seed_pair(plan):
        det = cache.detect(f, p, ladder, window_q, depth)
        red = reduce_by_gamma(det.report)
        top = red.largest()
        ok = top is not None and top.location == expected_loc and top.order == expected_order and det.adequate
        # the largest reduced pole dominates every other detected one by construction of the sort
        assert top is None or all(q.location <= top.location for q in red.poles)
        runs.append({"seed": p.seed, "unreduced": _summary(det.report), "reduced": _summary(red),
                     "deep_tail_z": det.deep_tail, "adequate": det.adequate, "pass": ok})
    status = "pass" if all(r["pass"] for r in runs) else "fail"
    return VerificationReport("min_exponent_pole", status, {
        "expected": {"location": expected_loc, "order": expected_order},
        "runs": runs,
        "bfunction_complete": b_reduced.complete,
    })


def verify_largest_pole_lct(
    f: Polynomial,
    lct,
    plan: SamplePlan,
    ladder,
    *,
    window_q=DEFAULT_WINDOW,
    depth=DEFAULT_DEPTH,
    cache=None,
) -> VerificationReport:
    """Largest unreduced detected pole equals ``-lct`` under both seeds."""
    lct = parse_rational(lct)
    cache = _cache(cache)
    runs = []
    for p in seed_pair(plan):
        det = cache.detect(f, p, ladder, window_q, depth)
        top = det.report.largest()
        ok = top is not None and top.location == -lct and det.adequate
        lead = det.model.leading_term()
        runs.append({
            "seed": p.seed,
            "largest": None if top is None else [top.location, top.order],
            "leading_coeff": None if lead is None else [lead.coeff, lead.coeff_stderr],
            "deep_tail_z": det.deep_tail,
            "adequate": det.adequate,
            "pass": ok,
        })
    status = "pass" if all(r["pass"] for r in runs) else "fail"
    return VerificationReport("largest_pole_is_lct", status, {"expected": -lct, "runs": runs})


def _bounded_below(cdf: EmpiricalCDF, t_lo: float, q_lo: float, alpha_max: float) -> bool:
    """True when the smallest sample is too large for any power law ``F ~ t^{2 alpha}``, ``alpha <= alpha_max``.

    Extrapolating such a law down from ``F(t_lo) = q_lo`` would put at
    least 10 expected samples below the observed minimum.
    """
    vmin = float(cdf.sorted_values[0])
    expected = cdf.ess * q_lo * (vmin / t_lo) ** (2.0 * alpha_max)
    return expected >= 10


def detect_in_region(f, plan, ladder, *, window_q=DEFAULT_WINDOW, depth=DEFAULT_DEPTH, cache=None):
    """Region-mode detection; ``None`` when ``|f|`` is bounded away from 0 on the region."""
    cache = _cache(cache)
    cdf = cache.cdf(f, plan)
    t_lo = cdf.quantile(window_q[0])
    alpha_max = float(max(a for a, _ in ladder))
    if _bounded_below(cdf, t_lo, window_q[0], alpha_max):
        return None
    return cache.detect(f, plan, ladder, window_q, depth)


# restricted samples are fewer per unit mass, so the fit needs a deeper, narrower window
REGION_WINDOW = (1e-3, 1e-2)


def verify_region_localization(
    f: Polynomial,
    regions: Sequence[tuple[Region, bool]],
    plan: SamplePlan,
    ladder,
    target,
    *,
    window_q=REGION_WINDOW,
    depth=DEFAULT_DEPTH,
    cache=None,
) -> VerificationReport:
    """Order at ``target`` is maximal on regions meeting the designated locus, smaller elsewhere.

    ``regions`` pairs each ball with a flag saying whether it meets the locus.
    """
    if len(regions) < 2 or all(m for _, m in regions) or not any(m for _, m in regions):
        raise ValueError("need at least one region meeting the locus and one missing it")
    target = parse_rational(target)
    cache = _cache(cache)
    rows = []
    for region, meets in regions:
        orders = []
        for p in seed_pair(SamplePlan(plan.nsamples, plan.seed, plan.sampler, region, plan.workers)):
            det = detect_in_region(f, p, ladder, window_q=window_q, depth=depth, cache=cache)
            orders.append(0 if det is None else det.report.order_at(target))
        rows.append({"center": [[c.real, c.imag] for c in region.center], "radius": region.radius,
                     "meets_locus": meets, "orders": orders})
    inside = [o for r in rows if r["meets_locus"] for o in r["orders"]]
    outside = [o for r in rows if not r["meets_locus"] for o in r["orders"]]
    top = max(inside)
    ok = all(o == top for o in inside) and all(o < top for o in outside)
    return VerificationReport("region_localization", "pass" if ok else "fail",
                              {"target": target, "regions": rows})


def verify_shift_identity(f: Polynomial, plan: SamplePlan, s_values=(0.0, 0.5, 1.0), k: float = 3.0) -> VerificationReport:
    """``E|f|^{2(s+1)}`` against ``E[|f|^2 |f|^{2s}]`` on the same samples."""
    rows = []
    for s in s_values:
        a = eval_zeta_direct(f, plan, complex(s) + 1)
        b = eval_zeta_direct(f, plan, complex(s), multiplier=f)
        comb = math.hypot(a.stderr, b.stderr)
        diff = abs(a.value - b.value)
        rows.append({"s": s, "shifted": [a.value.real, a.value.imag, a.stderr],
                     "multiplied": [b.value.real, b.value.imag, b.stderr], "diff": diff,
                     "tolerance": k * comb, "pass": diff <= k * comb})
    return VerificationReport("shift_identity", "pass" if all(r["pass"] for r in rows) else "fail", {"points": rows})


def verify_gamma_reduction(f: Polynomial, det: Detection | None = None, floor=None) -> VerificationReport:
    """Dividing by ``Gamma(s+1)`` lowers the order by one exactly at negative integers.

    Monomials are checked on their exact report (poles of ``prod Gamma(a_i s + 1)``)
    against an independent count; a numeric detection, when given, is checked
    for the same bookkeeping.
    """
    checks = []
    shape = classify_shape(f)
    if shape.kind == "monomial":
        a = [e for e in shape.a if e]
        floor = parse_rational(floor) if floor is not None else Fraction(-(f.nvars + 1))
        exact = exact_monomial_report(a, floor)
        red = reduce_by_gamma(exact)
        for p in exact.poles:
            # Z~ = prod Gamma(a_i s + 1) / Gamma(s + 1): count Gamma factors with a pole at p
            expect = sum(1 for ai in a if (ai * p.location).denominator == 1) - (1 if p.location.denominator == 1 else 0)
            checks.append({"source": "exact", "location": p.location, "unreduced": p.order,
                           "reduced": red.order_at(p.location), "expected": expect,
                           "pass": red.order_at(p.location) == expect})
        checks.append({"source": "exact", "no_new_poles": set(red.as_dict()) <= set(exact.as_dict()),
                       "pass": set(red.as_dict()) <= set(exact.as_dict())})
    if det is not None:
        unred = det.report
        red = reduce_by_gamma(unred)
        for p in unred.poles:
            expect = p.order - 1 if p.location.denominator == 1 else p.order
            checks.append({"source": "numeric", "location": p.location, "unreduced": p.order,
                           "reduced": red.order_at(p.location), "expected": expect,
                           "pass": red.order_at(p.location) == expect})
    if not checks:
        return VerificationReport("gamma_reduction", "inapplicable", {"reason": "no exact or numeric report"})
    return VerificationReport("gamma_reduction", "pass" if all(c["pass"] for c in checks) else "fail",
                              {"checks": checks})


def verify_snc_consistency(res: ResolutionData, dets: Sequence[Detection], floor) -> VerificationReport:
    """Numeric poles lie among the resolution candidates with orders within the bounds."""
    floor = parse_rational(floor)
    cands = {c.location: c.order_bound for c in candidate_poles(res, floor)}
    rows = []
    for det in dets:
        for p in det.report.poles:
            if p.location < floor:
                continue
            bound = cands.get(p.location)
            rows.append({"location": p.location, "order": p.order, "bound": bound,
                         "pass": bound is not None and p.order <= bound})
    return VerificationReport("snc_consistency", "pass" if all(r["pass"] for r in rows) else "fail",
                              {"detected": rows, "candidates": {k: v for k, v in cands.items()}})


def verify_newton_consistency(f: Polynomial, b: BFunction | None) -> VerificationReport:
    """``-1/t0`` against ``-alpha~``; when ``1/t0`` is not an integer also ``codim tau0`` against the multiplicity."""
    rep = denef_sargos_report(f)
    if b is None or not b.roots:
        return VerificationReport("newton_consistency", "inapplicable", {"reason": "no b-function data"})
    me = minimal_exponent(reduce(b))
    details = {"candidate_pole": rep.candidate_pole, "expected_order": rep.expected_order,
               "alpha_tilde": me.alpha_tilde, "multiplicity": me.multiplicity}
    if me.is_infinite:
        return VerificationReport("newton_consistency", "inapplicable", details)
    ok = rep.candidate_pole == -me.alpha_tilde
    if ok and rep.t0_nonintegral_reciprocal:
        # off the integers Gamma(s+1) does not touch the pole, so orders compare directly
        details["order_compared"] = True
        ok = rep.expected_order == me.multiplicity
    return VerificationReport("newton_consistency", "pass" if ok else "fail", details)


# -- suite ----------------------------------------------------------------------


@dataclass
class SuiteCase:
    f: str
    name: str = ""
    bfun: str | None = None
    bfun_override: dict | None = None
    resolution: str | None = None
    plan: dict = field(default_factory=dict)
    claims: list = field(default_factory=list)
    floor: str | None = None
    window: tuple[float, float] = DEFAULT_WINDOW


def _plan_from(d: dict) -> SamplePlan:
    region = None
    if d.get("region"):
        r = d["region"]
        region = Region(tuple(complex(a, b) for a, b in r["center"]), float(r["radius"]))
    return SamplePlan(int(d.get("nsamples", 10**6)), int(d["seed"]), d.get("sampler", "pseudo"), region,
                      d.get("workers"))


def run_case(case: SuiteCase, cache=None) -> list[VerificationReport]:
    cache = _cache(cache)
    f = parse_polynomial(case.f)
    name = case.name or case.f
    if case.bfun_override is not None:
        b, route = BFunction.from_json(case.bfun_override), "override"
    else:
        try:
            b, route = bfunction_for(f, case.bfun)
        except KeyError:
            b, route = None, "unknown"
    plan = _plan_from(case.plan) if case.plan else None
    res = ResolutionData.load(case.resolution) if case.resolution else None
    floor = parse_rational(case.floor) if case.floor else Fraction(-(f.nvars + 1))
    out = []
    for claim in case.claims:
        if claim not in CLAIMS:
            out.append(VerificationReport(claim, "fail", {"error": f"unknown claim {claim!r}"}, name))
            continue
        try:
            rep = _run_claim(claim, f, b, plan, res, floor, case, cache)
        except Exception as exc:  # failures are reports, not crashes
            rep = VerificationReport(claim, "fail", {"error": f"{type(exc).__name__}: {exc}"})
        out.append(VerificationReport(rep.claim, rep.status, {"bfunction_route": route, **rep.details}, name))
    return out


def _needs(what, value):
    if value is None:
        raise ValueError(f"claim requires {what}")
    return value


def _run_claim(claim, f, b, plan, res, floor, case, cache) -> VerificationReport:
    wq = tuple(case.window)
    if claim == "min_exponent_pole":
        return verify_min_exponent(f, reduce(_needs("b-function", b)), _needs("plan", plan), window_q=wq, cache=cache)
    if claim == "largest_pole_is_lct":
        b = _needs("b-function", b)
        lct = minimal_exponent(reduce(b)).lct
        ladder = ladder_from_bfunction(b, default_alpha_max(b, f.nvars))
        return verify_largest_pole_lct(f, lct, _needs("plan", plan), ladder, window_q=wq, cache=cache)
    if claim == "gamma_reduction":
        det = None
        if plan is not None and b is not None:
            ladder = ladder_from_bfunction(b, default_alpha_max(b, f.nvars))
            det = cache.detect(f, plan, ladder, wq, DEFAULT_DEPTH)
        return verify_gamma_reduction(f, det, floor)
    if claim == "shift_identity":
        return verify_shift_identity(f, _needs("plan", plan))
    if claim == "cor17":
        b = _needs("b-function", b)
        me = minimal_exponent(reduce(b))
        rep = check_cor17(_needs("resolution data", res), me.alpha_tilde,
                          b.multiplicity(me.alpha_tilde) if not me.is_infinite else 0)
        return VerificationReport("cor17", rep.status, rep.to_json())
    if claim == "snc_consistency":
        b = _needs("b-function", b)
        ladder = ladder_from_bfunction(b, default_alpha_max(b, f.nvars))
        dets = [cache.detect(f, p, ladder, wq, DEFAULT_DEPTH) for p in seed_pair(_needs("plan", plan))]
        return verify_snc_consistency(_needs("resolution data", res), dets, floor)
    if claim == "newton_consistency":
        return verify_newton_consistency(f, b)
    raise AssertionError(claim)


def load_suite_config(data: dict, base_dir=None) -> list[SuiteCase]:
    from pathlib import Path

    cases = []
    for i, c in enumerate(data.get("cases", [])):
        resolution = c.get("resolution")
        if resolution and base_dir is not None and not Path(resolution).is_absolute():
            resolution = str(Path(base_dir) / resolution)
        if resolution and not Path(resolution).exists():
            raise FileNotFoundError(f"case {i}: resolution file {resolution} not found")
        parse_polynomial(c["f"])  # fail at load, not mid-run
        if c.get("plan") and "seed" not in c["plan"]:
            raise ValueError(f"case {i}: plan.seed is required in suite mode")
        cases.append(SuiteCase(
            f=c["f"], name=c.get("name", ""), bfun=c.get("bfun"), bfun_override=c.get("bfun_override"),
            resolution=resolution, plan=c.get("plan", {}), claims=list(c.get("claims", [])),
            floor=c.get("floor"), window=tuple(c.get("window", DEFAULT_WINDOW)),
        ))
    return cases


def run_suite(cases: Sequence[SuiteCase], *, workers: int = 1) -> list[VerificationReport]:
    """Run every case; report order follows case order, then claim order."""
    if not cases:
        return []
    if workers <= 1:
        cache = _DetectionCache()
        return [r for case in cases for r in run_case(case, cache)]
    with ThreadPoolExecutor(workers) as pool:
        chunks = list(pool.map(lambda c: run_case(c, _DetectionCache()), cases))
    return [r for chunk in chunks for r in chunk]
