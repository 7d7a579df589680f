"""Pole prediction from the numerical data of a log resolution.

Resolution data is supplied, not computed: a list of divisors with their
multiplicity ``a`` in the pullback of ``div(f)`` and discrepancy ``k``,
plus the simplices of the incidence complex (sets of divisors with a
common point).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path

from .algebra import format_rational, parse_rational


class ResolutionDataError(ValueError):
    pass


@dataclass(frozen=True)
class DivisorDatum:
    id: str
    a: int
    k: int
    strict_transform: bool = False

    def __post_init__(self):
        if self.a < 1:
            raise ResolutionDataError(f"divisor {self.id}: a must be >= 1")
        if self.k < 0:
            raise ResolutionDataError(f"divisor {self.id}: k must be >= 0")

    def ratio(self) -> Fraction:
        return Fraction(self.k + 1, self.a)

    def shift_at(self, alpha: Fraction) -> int | None:
        """The ``ell >= 0`` with ``alpha == (k + 1 + ell)/a``, if there is one."""
        ell = alpha * self.a - self.k - 1
        if ell.denominator == 1 and ell >= 0:
            return int(ell)
        return None


@dataclass(frozen=True)
class ResolutionData:
    divisors: tuple[DivisorDatum, ...]
    simplices: frozenset[frozenset[str]] = field(default_factory=frozenset)

    def __init__(self, divisors, simplices=()):
        divisors = tuple(divisors)
        ids = [d.id for d in divisors]
        if len(set(ids)) != len(ids):
            raise ResolutionDataError("duplicate divisor ids")
        known = set(ids)
        closed: set[frozenset[str]] = {frozenset([i]) for i in ids}
        for s in simplices:
            s = frozenset(s)
            if not s:
                continue
            missing = s - known
            if missing:
                raise ResolutionDataError(f"simplex refers to unknown divisors {sorted(missing)}")
            for r in range(1, len(s) + 1):
                closed.update(frozenset(c) for c in combinations(sorted(s), r))
        object.__setattr__(self, "divisors", divisors)
        object.__setattr__(self, "simplices", frozenset(closed))

    def by_id(self) -> dict[str, DivisorDatum]:
        return {d.id: d for d in self.divisors}

    def maximal_simplices(self) -> list[frozenset[str]]:
        return [s for s in self.simplices if not any(s < t for t in self.simplices)]

    @classmethod
    def from_json(cls, data: dict) -> ResolutionData:
        divs = [
            DivisorDatum(str(d["id"]), int(d["a"]), int(d["k"]), bool(d.get("strict_transform", False)))
            for d in data["divisors"]
        ]
        return cls(divs, [list(s) for s in data.get("simplices", [])])

    @classmethod
    def load(cls, path) -> ResolutionData:
        return cls.from_json(json.loads(Path(path).read_text()))

    def to_json(self) -> dict:
        return {
            "divisors": [
                {"id": d.id, "a": d.a, "k": d.k, "strict_transform": d.strict_transform} for d in self.divisors
            ],
            "simplices": sorted(sorted(s) for s in self.maximal_simplices() if len(s) > 1),
        }


@dataclass(frozen=True)
class CandidatePole:
    location: Fraction
    order_bound: int
    witnesses: tuple[tuple[tuple[str, ...], tuple[int, ...]], ...]

    def to_json(self) -> dict:
        return {
            "location": format_rational(self.location),
            "order_bound": self.order_bound,
            "witnesses": [{"simplex": list(s), "shifts": list(l)} for s, l in self.witnesses],
        }


def _require_divisors(res: ResolutionData):
    if not res.divisors:
        raise ResolutionDataError("empty divisor list")


def candidate_poles(res: ResolutionData, floor) -> list[CandidatePole]:
    """Candidates ``-(k+1+ell)/a`` down to ``floor``, with simplex-wise order bounds.

    The order bound at ``beta`` is the largest number of divisors in one
    simplex that all produce ``beta``.  Sorted by descending location.
    """
    floor = parse_rational(floor)
    if floor >= 0:
        raise ValueError("floor must be negative")
    _require_divisors(res)
    locs: set[Fraction] = set()
    for d in res.divisors:
        ell = 0
        while -(d.ratio() + Fraction(ell, d.a)) >= floor:
            locs.add(-(d.ratio() + Fraction(ell, d.a)))
            ell += 1
    divs = res.by_id()
    out = []
    for beta in sorted(locs, reverse=True):
        alpha = -beta
        best: list[tuple[tuple[str, ...], tuple[int, ...]]] = []
        best_n = 0
        for s in sorted(res.simplices, key=lambda s: sorted(s)):
            hits = [(i, divs[i].shift_at(alpha)) for i in sorted(s)]
            hits = [(i, ell) for i, ell in hits if ell is not None]
            if len(hits) != len(s):
                continue
            if len(hits) > best_n:
                best_n, best = len(hits), []
            if len(hits) == best_n:
                best.append((tuple(i for i, _ in hits), tuple(ell for _, ell in hits)))
        out.append(CandidatePole(beta, best_n, tuple(best)))
    return out


def lct_snc(res: ResolutionData) -> Fraction:
    _require_divisors(res)
    return min(min(d.ratio() for d in res.divisors), Fraction(1))


def min_exponent_lower_bound(res: ResolutionData) -> Fraction | None:
    """``min (k+1)/a`` over exceptional divisors; ``None`` stands for +infinity."""
    ratios = [d.ratio() for d in res.divisors if not d.strict_transform]
    return min(ratios) if ratios else None


def dual_complex_dim_at(res: ResolutionData, alpha) -> int:
    """Dimension of the subcomplex on divisors whose numerics give ``alpha``; -1 if none do."""
    alpha = parse_rational(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    divs = res.by_id()
    J = {i for i, d in divs.items() if d.shift_at(alpha) is not None}
    if not J:
        return -1
    return max(len(s) for s in res.simplices if s <= J) - 1


@dataclass(frozen=True)
class Cor17Report:
    status: str  # pass | fail | inapplicable
    dim: int | None
    required: int | None
    branch: str | None

    def to_json(self) -> dict:
        return {"claim": "cor17", "status": self.status, "dual_complex_dim": self.dim,
                "required_dim": self.required, "branch": self.branch}


def check_cor17(res: ResolutionData, alpha_tilde, mult_bf: int) -> Cor17Report:
    """Compare ``dim N(pi, alpha)`` with the multiplicity of ``-alpha`` in the full b-function.

    ``alpha_tilde`` of ``None`` (or ``math.inf``) means a smooth f and yields ``inapplicable``.
    """
    if alpha_tilde is None or (isinstance(alpha_tilde, float) and math.isinf(alpha_tilde)):
        return Cor17Report("inapplicable", None, None, None)
    alpha = parse_rational(alpha_tilde)
    dim = dual_complex_dim_at(res, alpha)
    if alpha.denominator == 1 and alpha >= 2:
        required, branch = mult_bf, "integer>=2"
    else:
        required, branch = mult_bf - 1, "other"
    return Cor17Report("pass" if dim >= required else "fail", dim, required, branch)
