import json
from fractions import Fraction
from importlib import resources

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from archzeta.snc import (
    DivisorDatum,
    ResolutionData,
    ResolutionDataError,
    candidate_poles,
    check_cor17,
    dual_complex_dim_at,
    lct_snc,
    min_exponent_lower_bound,
)
from archzeta.zeta_numeric import exact_monomial_report

F = Fraction


@pytest.fixture
def whitney():
    return ResolutionData.load(resources.files("archzeta") / "data" / "fixtures" / "whitney.json")


def test_whitney_candidates(whitney):
    c = {p.location: p.order_bound for p in candidate_poles(whitney, -3)}
    assert c == {F(-1): 2, F(-3, 2): 1, F(-2): 2, F(-5, 2): 1, F(-3): 2}


def test_whitney_thresholds(whitney):
    assert lct_snc(whitney) == 1
    assert min_exponent_lower_bound(whitney) == 1
    assert dual_complex_dim_at(whitney, 1) == 1
    assert dual_complex_dim_at(whitney, F(3, 2)) == 0
    assert dual_complex_dim_at(whitney, F(1, 3)) == -1


def test_whitney_cor17(whitney):
    rep = check_cor17(whitney, F(1), 2)
    assert (rep.status, rep.dim, rep.required, rep.branch) == ("pass", 1, 1, "other")
    # a hypothetical multiplicity 3 would need a 2-simplex
    assert check_cor17(whitney, F(1), 3).status == "fail"
    assert check_cor17(whitney, None, 1).status == "inapplicable"
    assert check_cor17(whitney, float("inf"), 1).status == "inapplicable"


def test_cor17_integer_branch():
    res = ResolutionData([DivisorDatum("E", 1, 1), DivisorDatum("F", 1, 1)], [["E", "F"]])
    rep = check_cor17(res, F(2), 2)
    assert rep.branch == "integer>=2" and rep.required == 2 and rep.status == "fail"
    assert check_cor17(res, F(2), 1).status == "pass"


def test_witnesses(whitney):
    top = candidate_poles(whitney, -1)[0]
    assert top.witnesses == ((("Dt", "E"), (0, 0)),)
    assert top.to_json()["location"] == "-1"


def test_smooth_has_no_exceptional_bound():
    res = ResolutionData([DivisorDatum("D", 1, 0, True)])
    assert min_exponent_lower_bound(res) is None
    assert lct_snc(res) == 1


@pytest.mark.parametrize("bad", [
    {"divisors": [{"id": "E", "a": 0, "k": 0}]},
    {"divisors": [{"id": "E", "a": 1, "k": -1}]},
    {"divisors": [{"id": "E", "a": 1, "k": 0}, {"id": "E", "a": 2, "k": 0}]},
    {"divisors": [{"id": "E", "a": 1, "k": 0}], "simplices": [["E", "G"]]},
])
def test_rejects_bad_data(bad):
    with pytest.raises(ResolutionDataError):
        ResolutionData.from_json(bad)


def test_empty_and_floor():
    with pytest.raises(ResolutionDataError):
        candidate_poles(ResolutionData([]), -2)
    with pytest.raises(ValueError):
        candidate_poles(ResolutionData([DivisorDatum("D", 1, 0)]), 0)


def test_json_round_trip(whitney):
    again = ResolutionData.from_json(json.loads(json.dumps(whitney.to_json())))
    assert again == whitney


@settings(max_examples=200)
@given(st.lists(st.integers(1, 6), min_size=1, max_size=4))
def test_normal_crossing_monomial_matches_gamma_product(a):
    # the coordinate hyperplanes already resolve a monomial
    divs = [DivisorDatum(f"D{i}", ai, 0, True) for i, ai in enumerate(a)]
    res = ResolutionData(divs, [[d.id for d in divs]])
    cands = {c.location: c.order_bound for c in candidate_poles(res, -2)}
    assert cands == exact_monomial_report(a, -2).as_dict()


@st.composite
def resolutions(draw):
    n = draw(st.integers(1, 5))
    divs = [DivisorDatum(f"E{i}", draw(st.integers(1, 6)), draw(st.integers(0, 4))) for i in range(n)]
    simp = draw(st.lists(st.sets(st.sampled_from([d.id for d in divs]), min_size=1, max_size=3), max_size=4))
    return ResolutionData(divs, [sorted(s) for s in simp])


@settings(max_examples=200)
@given(resolutions(), st.integers(1, 4))
def test_candidate_invariants(res, depth):
    cands = candidate_poles(res, -depth)
    top = max(len(s) for s in res.simplices)
    assert [c.location for c in cands] == sorted((c.location for c in cands), reverse=True)
    for c in cands:
        assert -depth <= c.location < 0
        assert 1 <= c.order_bound <= top
        for ids, shifts in c.witnesses:
            assert frozenset(ids) in res.simplices
            divs = res.by_id()
            assert all(F(divs[i].k + 1 + l, divs[i].a) == -c.location for i, l in zip(ids, shifts))
    lead = min(d.ratio() for d in res.divisors)
    if lead > depth:
        assert not cands
        return
    # largest candidate is minus the smallest ratio
    assert cands[0].location == -min(d.ratio() for d in res.divisors)
    assert dual_complex_dim_at(res, -cands[0].location) == cands[0].order_bound - 1
