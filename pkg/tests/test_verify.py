import json
from fractions import Fraction
from importlib import resources

import pytest

from archzeta.algebra import parse_polynomial
from archzeta.bfunction import BFunction, bfun_brieskorn_pham, bfunction_for, load_corpus_entry, reduce
from archzeta.sampling import Region, SamplePlan
from archzeta.snc import ResolutionData
from archzeta.verify import (
    SuiteCase,
    default_alpha_max,
    detect_in_region,
    load_suite_config,
    run_suite,
    seed_pair,
    verify_gamma_reduction,
    verify_largest_pole_lct,
    verify_min_exponent,
    verify_newton_consistency,
    verify_region_localization,
    verify_shift_identity,
    verify_snc_consistency,
)
from archzeta.zeta_numeric import detect_poles, ladder_from_bfunction

F = Fraction
WHITNEY = str(resources.files("archzeta") / "data" / "fixtures" / "whitney.json")


def _ladder(f):
    b, _ = bfunction_for(f)
    return ladder_from_bfunction(b, default_alpha_max(b, f.nvars))


def test_seed_pair():
    a, b = seed_pair(SamplePlan(10**5, 41))
    assert (a.seed, b.seed) == (41, 42)


def test_min_exponent_cusp():
    f = parse_polynomial("x^2 + y^3")
    r = verify_min_exponent(f, bfun_brieskorn_pham((2, 3)), SamplePlan(2_000_000, 10))
    assert r.status == "pass", r.details
    assert r.details["expected"] == {"location": F(-5, 6), "order": 1}
    assert len(r.details["runs"]) == 2


def test_min_exponent_smooth_inapplicable():
    f = parse_polynomial("x")
    b, _ = bfunction_for(f)
    assert verify_min_exponent(f, reduce(b), SamplePlan(10**5, 1)).status == "inapplicable"


def test_min_exponent_corrupted_multiplicity_fails_with_both_sides():
    f = parse_polynomial("x^2 + y^3")
    corrupt = BFunction({F(5, 6): 2, F(7, 6): 1})
    r = verify_min_exponent(f, corrupt, SamplePlan(1_000_000, 11))
    assert r.status == "fail"
    assert r.details["expected"] == {"location": F(-5, 6), "order": 2}
    assert all(run["reduced"][0] == ["-5/6", 1] for run in r.details["runs"])


@pytest.mark.slow
def test_min_exponent_missing_true_exponent_caught_by_deep_tail():
    # a ladder without 5/6 can mimic t^{5/3} inside the window; below it the fit extrapolates wrongly
    f = parse_polynomial("x^2 + y^3")
    r = verify_min_exponent(f, BFunction({F(2, 3): 1, F(7, 6): 1}), SamplePlan(20_000_000, 1))
    assert r.status == "fail"
    assert not any(run["adequate"] for run in r.details["runs"])


@pytest.mark.parametrize("text, lct", [("x*y", 1), ("x^2", F(1, 2)), ("x", 1)])
def test_largest_pole_lct(text, lct):
    f = parse_polynomial(text)
    r = verify_largest_pole_lct(f, lct, SamplePlan(1_000_000, 3), _ladder(f))
    assert r.status == "pass", r.details
    assert all(run["leading_coeff"][0] > 3 * run["leading_coeff"][1] for run in r.details["runs"])


def test_region_localization_xy():
    f = parse_polynomial("x*y")
    regions = [(Region((0j, 0j), 1.0), True), (Region((1.5 + 0j, 1.5 + 0j), 0.5), False)]
    r = verify_region_localization(f, regions, SamplePlan(1_000_000, 5, "sobol"), _ladder(f), -1)
    assert r.status == "pass", r.details
    assert [row["orders"] for row in r.details["regions"]] == [[2, 2], [0, 0]]


def test_region_far_from_zero_set_is_bounded_below():
    f = parse_polynomial("x*y")
    plan = SamplePlan(200_000, 1, region=Region((2 + 0j, 2 + 0j), 0.5))
    assert detect_in_region(f, plan, _ladder(f)) is None


def test_region_requires_both_kinds():
    f = parse_polynomial("x*y")
    with pytest.raises(ValueError):
        verify_region_localization(f, [(Region((0j, 0j), 1.0), True)], SamplePlan(10**5, 1), _ladder(f), -1)


def test_shift_identity():
    r = verify_shift_identity(parse_polynomial("x^2 + y^3"), SamplePlan(200_000, 4))
    assert r.status == "pass"
    assert [row["s"] for row in r.details["points"]] == [0.0, 0.5, 1.0]


def test_gamma_reduction_exact_and_numeric():
    r = verify_gamma_reduction(parse_polynomial("x*y^2"), floor=-3)
    assert r.status == "pass"
    f = parse_polynomial("x^2 - y^2*z")
    det = detect_poles(f, SamplePlan(1_000_000, 2, "sobol"), _ladder(f))
    r = verify_gamma_reduction(f, det)
    assert r.status == "pass"
    assert verify_gamma_reduction(f).status == "inapplicable"


def test_snc_consistency_whitney():
    f = parse_polynomial("x^2 - y^2*z")
    res = ResolutionData.load(WHITNEY)
    dets = [detect_poles(f, p, _ladder(f)) for p in seed_pair(SamplePlan(1_000_000, 6, "sobol"))]
    r = verify_snc_consistency(res, dets, -4)
    assert r.status == "pass", r.details
    assert r.details["detected"]


def test_snc_consistency_flags_uncovered_pole():
    f = parse_polynomial("x^2 - y^2*z")
    res = ResolutionData.from_json({"divisors": [{"id": "E", "a": 2, "k": 2}]})
    det = detect_poles(f, SamplePlan(500_000, 6), _ladder(f))
    assert verify_snc_consistency(res, [det], -4).status == "fail"


@pytest.mark.parametrize("text, name, status", [
    ("z2^2*z3^3*z4 + z1^2*z3*z4^3 + z1^2*z2^2*z3*z4", "example_1_9", "pass"),
    ("x^2 + y^3", None, "pass"),
    ("x^2 - y^2*z", None, "pass"),
    ("x", None, "inapplicable"),
])
def test_newton_consistency(text, name, status):
    f = parse_polynomial(text)
    b, _ = bfunction_for(f, name)
    r = verify_newton_consistency(f, b)
    assert r.status == status
    if name:
        assert r.details["order_compared"]


def test_newton_consistency_detects_wrong_multiplicity():
    f = parse_polynomial("z2^2*z3^3*z4 + z1^2*z3*z4^3 + z1^2*z2^2*z3*z4")
    b = load_corpus_entry("example_1_9").__class__({F(2, 3): 1, F(1): 1})
    assert verify_newton_consistency(f, b).status == "fail"


# -- suite ----------------------------------------------------------------------

def test_empty_suite():
    assert run_suite([]) == []
    assert load_suite_config({"cases": []}) == []


def test_suite_config_validation(tmp_path):
    with pytest.raises(ValueError):
        load_suite_config({"cases": [{"f": "x^2", "plan": {"nsamples": 100000}, "claims": []}]})
    with pytest.raises(FileNotFoundError):
        load_suite_config({"cases": [{"f": "x^2", "resolution": "missing.json", "claims": []}]}, base_dir=tmp_path)
    with pytest.raises(Exception):
        load_suite_config({"cases": [{"f": "x +", "claims": []}]})


def test_suite_exact_claims_and_unknown_claim():
    cases = [SuiteCase(f="x^2 - y^2*z", name="whitney", resolution=WHITNEY, claims=["cor17", "newton_consistency", "bogus"])]
    reps = run_suite(cases)
    assert [(r.claim, r.status) for r in reps] == [("cor17", "pass"), ("newton_consistency", "pass"), ("bogus", "fail")]
    assert all(r.case == "whitney" for r in reps)
    assert reps[0].details["bfunction_route"] == "corpus:whitney_umbrella"


def test_suite_corrupted_entry_fails():
    plan = {"nsamples": 1_000_000, "seed": 12}
    cases = [SuiteCase(f="x^2 + y^3", bfun_override={"roots": [["1", 1], ["5/6", 2], ["7/6", 1]]}, plan=plan,
                       claims=["min_exponent_pole"])]
    (rep,) = run_suite(cases)
    assert rep.status == "fail"
    assert rep.details["expected"] == {"location": F(-5, 6), "order": 2}
    assert rep.details["bfunction_route"] == "override"


def test_suite_missing_inputs_are_failures_not_crashes():
    (rep,) = run_suite([SuiteCase(f="x*y", claims=["shift_identity"])])
    assert rep.status == "fail" and "plan" in rep.details["error"]


def test_suite_reproducible_and_parallel_order():
    plan = {"nsamples": 300_000, "seed": 3}
    cases = [SuiteCase(f="x*y", plan=plan, claims=["largest_pole_is_lct", "gamma_reduction"]),
             SuiteCase(f="x^2", plan=plan, claims=["largest_pole_is_lct"])]
    a = [json.dumps(r.to_json()) for r in run_suite(cases)]
    b = [json.dumps(r.to_json()) for r in run_suite(cases, workers=2)]
    assert a == b
