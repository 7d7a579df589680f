"""Newton polyhedron of a polynomial at the origin, in exact rational arithmetic.

The polyhedron is ``conv(supp f) + R_{>=0}^n``.  Facets are found by
enumerating hyperplanes spanned by support points and coordinate rays and
keeping those that support every generator; the recession cone forces
every facet normal to be non-negative.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Sequence

from .algebra import Polynomial, format_rational, support


class NewtonError(ValueError):
    pass


def _nullspace_vector(rows: list[list[Fraction]], n: int) -> list[Fraction] | None:
    """A basis vector of the kernel when it is exactly one-dimensional, else None."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(n) if c not in pivots]
    if len(free) != 1:
        return None
    fc = free[0]
    v = [Fraction(0)] * n
    v[fc] = Fraction(1)
    for i, pc in enumerate(pivots):
        v[pc] = -m[i][fc]
    return v


def rank(vectors: Sequence[Sequence[Fraction]]) -> int:
    m = [[Fraction(x) for x in v] for v in vectors]
    if not m:
        return 0
    n = len(m[0])
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, len(m)):
            if m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def _primitive(v: list[Fraction]) -> tuple[int, ...]:
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return tuple(x // g for x in ints)


@dataclass(frozen=True)
class Facet:
    normal: tuple[int, ...]  # primitive, non-negative
    offset: int

    def value(self, point) -> Fraction:
        return sum(Fraction(w) * Fraction(p) for w, p in zip(self.normal, point))

    def to_json(self) -> dict:
        return {"normal": list(self.normal), "offset": self.offset}


@dataclass(frozen=True)
class NewtonPolyhedron:
    nvars: int
    generators: frozenset[tuple[int, ...]]
    facets: tuple[Facet, ...]

    def contains(self, point) -> bool:
        return all(f.value(point) >= f.offset for f in self.facets)


def _minimal_points(points):
    pts = sorted(set(points))
    return [p for p in pts if not any(q != p and all(a <= b for a, b in zip(q, p)) for q in pts)]


def build_polyhedron(supp) -> NewtonPolyhedron:
    """Exact facet description of ``conv(supp) + R_{>=0}^n``."""
    supp = [tuple(int(e) for e in m) for m in supp]
    if not supp:
        raise NewtonError("empty support")
    n = len(supp[0])
    if any(len(m) != n for m in supp):
        raise NewtonError("support points of different lengths")
    if any(e < 0 for m in supp for e in m):
        raise NewtonError("negative exponent in support")
    if (0,) * n in supp:
        raise NewtonError("support contains the origin: f(0) != 0, no singularity at 0")
    verts = _minimal_points(supp)
    rays = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    found: dict[tuple[int, ...], int] = {}
    for k in range(1, min(n, len(verts)) + 1):
        for pts in combinations(verts, k):
            base = pts[0]
            diffs = [[Fraction(p[j] - base[j]) for j in range(n)] for p in pts[1:]]
            for rsel in combinations(range(n), n - k):
                rows = diffs + [rays[i] for i in rsel]
                v = _nullspace_vector(rows, n) if rows else ([Fraction(1)] if n == 1 else None)
                if v is None:
                    continue
                if all(x <= 0 for x in v):
                    v = [-x for x in v]
                if any(x < 0 for x in v):
                    continue
                normal = _primitive(v)
                if normal in found:
                    continue
                offset = sum(w * b for w, b in zip(normal, base))
                if all(sum(w * b for w, b in zip(normal, p)) >= offset for p in verts):
                    found[normal] = offset
    facets = tuple(Facet(nm, off) for nm, off in sorted(found.items(), key=lambda t: (t[0], t[1])))
    poly = NewtonPolyhedron(n, frozenset(supp), facets)
    _check_supporting(poly, verts)
    return poly


def _check_supporting(poly: NewtonPolyhedron, verts):
    for f in poly.facets:
        if not any(f.value(p) == f.offset for p in verts):
            raise NewtonError(f"facet {f} is not attained by any generator")


def diagonal_point(poly: NewtonPolyhedron) -> tuple[Fraction, list[int]]:
    """Where ``(t, ..., t)`` first meets the polyhedron, and the facets tight there."""
    ratios = []
    for f in poly.facets:
        s = sum(f.normal)
        if s == 0:
            raise NewtonError("facet with zero normal sum")
        ratios.append(Fraction(f.offset, s))
    t0 = max(ratios)
    return t0, [i for i, r in enumerate(ratios) if r == t0]


def tau0_codim(poly: NewtonPolyhedron, t0: Fraction, active: list[int]) -> int:
    """Codimension of the smallest face through the diagonal point: rank of the tight normals."""
    point = [t0] * poly.nvars
    tight = [f.normal for f in poly.facets if f.value(point) == f.offset]
    if sorted(active) != [i for i, f in enumerate(poly.facets) if f.value(point) == f.offset]:
        raise NewtonError("active facet list does not match the tight facets at the diagonal point")
    return rank(tight)


@dataclass(frozen=True)
class NewtonReport:
    t0: Fraction
    tau0_codim: int
    tau0_active_facets: tuple[int, ...]
    facets: tuple[Facet, ...]
    assumed_nondegenerate: bool = False
    assumed_stable: bool = False

    @property
    def expected_order(self) -> int:
        return self.tau0_codim

    @property
    def candidate_pole(self) -> Fraction:
        return -1 / self.t0

    @property
    def t0_nonintegral_reciprocal(self) -> bool:
        return (1 / self.t0).denominator != 1

    def to_json(self) -> dict:
        return {
            "t0": format_rational(self.t0),
            "inv_t0": format_rational(1 / self.t0),
            "t0_nonintegral_reciprocal": self.t0_nonintegral_reciprocal,
            "candidate_pole": format_rational(self.candidate_pole),
            "codim": self.tau0_codim,
            "expected_order": self.expected_order,
            "tau0_active_facets": list(self.tau0_active_facets),
            "facets": [f.to_json() for f in self.facets],
            "assumed_nondegenerate": self.assumed_nondegenerate,
            "assumed_stable": self.assumed_stable,
        }


def denef_sargos_report(f: Polynomial, *, assume_nondegenerate=False, assume_stable=False) -> NewtonReport:
    """Diagonal data of ``Gamma_+(f)``; nondegeneracy and stability are recorded caller claims."""
    f.require_nonconstant()
    poly = build_polyhedron(support(f))
    t0, active = diagonal_point(poly)
    codim = tau0_codim(poly, t0, active)
    return NewtonReport(t0, codim, tuple(active), poly.facets, assume_nondegenerate, assume_stable)
