"""Numerical zeta functions ``Z_f(s) = E|f(X)|^{2s}`` under the standard complex Gaussian.

Poles are read off the small-``t`` expansion of the level-set mass
``F(t) = P(|f(X)| <= t)``: a term ``c * t^{2 alpha} (-log t)^k`` belongs
to a pole at ``-alpha`` of order ``k + 1``.  The exponents are never fitted
freely; they come from a discrete ladder of candidates.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
import numpy as np
from scipy.stats import chi2 as chi2_dist

from . import _core
from .algebra import Polynomial, format_rational, parse_rational
from .bfunction import BFunction
from .sampling import SamplePlan, map_chunks, normalize_log_weights

MIN_ESS = 100
MIN_CELL_SAMPLES = 50
MAX_CONDITION = 1e12


class IllConditionedFit(ValueError):
    pass


class ConvergenceStripError(ValueError):
    pass


class ReductionError(ValueError):
    pass


# -- sampling -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class EmpiricalCDF:
    """Sorted ``|f|`` samples and their weights (``None`` means equal weights)."""

    sorted_values: np.ndarray
    weights: np.ndarray | None = None
    ess: float = 0.0
    plan: SamplePlan | None = None

    def __len__(self):
        return len(self.sorted_values)

    def weight_array(self) -> np.ndarray:
        if self.weights is None:
            return np.full(len(self), 1.0 / len(self))
        return self.weights

    def quantile(self, q: float) -> float:
        if self.weights is None:
            idx = min(len(self) - 1, max(0, int(math.ceil(q * len(self))) - 1))
            return float(self.sorted_values[idx])
        cw = np.cumsum(self.weights)
        idx = min(len(self) - 1, int(np.searchsorted(cw, q)))
        return float(self.sorted_values[idx])

    def mass_below(self, t: float) -> float:
        """Empirical ``F(t)`` (inclusive)."""
        k = int(np.searchsorted(self.sorted_values, t, side="right"))
        if self.weights is None:
            return k / len(self)
        return float(np.sum(self.weights[:k]))

    def cell_sums(self, edges: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Weight, squared weight and raw count in ``[edges[i], edges[i+1])``.

        The first edge may be 0, giving the cell of all mass below ``edges[1]``.
        """
        idx = np.searchsorted(self.sorted_values, edges, side="left")
        counts = np.diff(idx)
        if self.weights is None:
            n = len(self)
            return counts / n, counts / n**2, counts
        cw = np.concatenate([[0.0], np.cumsum(self.weights)])
        cw2 = np.concatenate([[0.0], np.cumsum(self.weights**2)])
        return np.diff(cw[idx]), np.diff(cw2[idx]), counts


def _abs_f_chunk(f: Polynomial):
    exps, cre, cim = f.packed()

    def fn(re, im, logw):
        return _core.abs_poly(re, im, exps, cre, cim), logw

    return fn


def sample_abs_f(f: Polynomial, plan: SamplePlan) -> EmpiricalCDF:
    """Draw ``|f(x_j)|`` for Gaussian ``x_j`` and sort them.

    In region mode the points are uniform on the ball and carry Gaussian
    importance weights; ``ess`` records the effective sample size.
    """
    f.require_nonconstant()
    parts = map_chunks(plan, f.nvars, _abs_f_chunk(f))
    vals = np.concatenate([p[0] for p in parts])
    if plan.region is None:
        vals.sort(kind="stable")
        return EmpiricalCDF(vals, None, float(len(vals)), plan)
    w, ess = normalize_log_weights([p[1] for p in parts])
    if ess < MIN_ESS:
        raise ValueError(f"effective sample size {ess:.1f} < {MIN_ESS} in region mode")
    order = np.argsort(vals, kind="stable")
    return EmpiricalCDF(vals[order], w[order], ess, plan)


# -- direct evaluation --------------------------------------------------------


@dataclass(frozen=True)
class ZetaEstimate:
    value: complex
    stderr: float
    nsamples: int
    variance_blowup: bool

    def to_json(self) -> dict:
        return {
            "re": self.value.real,
            "im": self.value.imag,
            "stderr": self.stderr,
            "nsamples": self.nsamples,
            "variance_blowup": self.variance_blowup,
        }


def _power(absval: np.ndarray, s: complex) -> np.ndarray:
    with np.errstate(divide="ignore"):
        logv = np.log(absval)
    if s.imag == 0:
        return np.exp(2.0 * s.real * logv)
    return np.exp(2.0 * s * logv)


def eval_zeta_direct(
    f: Polynomial,
    plan: SamplePlan,
    s: complex,
    *,
    multiplier: Polynomial | None = None,
    lct_hint=None,
) -> ZetaEstimate:
    """Monte-Carlo ``E[|g|^2 |f|^{2s}]`` with ``g = multiplier`` (default 1), and its standard error.

    With ``lct_hint``, ``s`` outside the convergence strip raises and
    ``2 Re s <= -lct`` (infinite variance) sets ``variance_blowup``.
    """
    f.require_nonconstant()
    s = complex(s)
    if lct_hint is not None and not s.real > -float(parse_rational(lct_hint)):
        raise ConvergenceStripError(f"Re s = {s.real} is not > -lct = {-float(parse_rational(lct_hint))}")
    if multiplier is not None and multiplier.nvars != f.nvars:
        raise ValueError("multiplier lives in a different number of variables")
    fexp, fre, fim = f.packed()
    gpack = multiplier.packed() if multiplier is not None else None

    def fn(re, im, logw):
        v = _power(_core.abs_poly(re, im, fexp, fre, fim), s)
        if gpack is not None:
            g = _core.abs_poly(re, im, *gpack)
            v = v * (g * g)
        if logw is not None:
            return v, logw
        return (np.sum(v.real), np.sum(v.imag), np.sum(v.real**2 + v.imag**2), len(v))

    parts = map_chunks(plan, f.nvars, fn)
    if plan.region is None:
        n = sum(p[3] for p in parts)
        mre = math.fsum(p[0] for p in parts) / n
        mim = math.fsum(p[1] for p in parts) / n
        m2 = math.fsum(p[2] for p in parts) / n
        var = max(m2 - (mre * mre + mim * mim), 0.0)
        mean = complex(mre, mim)
        se = math.sqrt(var / (n - 1))
    else:
        v = np.concatenate([p[0] for p in parts])
        w, ess = normalize_log_weights([p[1] for p in parts])
        if ess < MIN_ESS:
            raise ValueError(f"effective sample size {ess:.1f} < {MIN_ESS} in region mode")
        mean = complex(np.dot(w, v))
        d = v - mean
        se = math.sqrt(float(np.dot(w * w, (d * np.conj(d)).real)))
        n = len(v)
    if not (math.isfinite(mean.real) and math.isfinite(mean.imag) and math.isfinite(se)):
        return ZetaEstimate(mean, math.inf, n, True)
    blowup = abs(mean) == 0 or se / abs(mean) > 0.5
    if lct_hint is not None and not 2 * s.real > -float(parse_rational(lct_hint)):
        # E|f|^{4 Re s} diverges: the sample variance means nothing here
        blowup = True
    return ZetaEstimate(mean, se, n, blowup)


# -- asymptotic model fitting -------------------------------------------------


def _basis(t: np.ndarray, alpha: float, k: int) -> np.ndarray:
    """``t^{2 alpha} (-log t)^k`` with the value 0 at ``t = 0``."""
    t = np.asarray(t, dtype=np.float64)
    out = np.zeros_like(t)
    pos = t > 0
    tp = t[pos]
    out[pos] = tp ** (2.0 * alpha) * (-np.log(tp)) ** k
    return out


@dataclass(frozen=True)
class ModelTerm:
    alpha: Fraction
    logpow: int
    coeff: float
    coeff_stderr: float

    @property
    def z(self) -> float:
        return abs(self.coeff) / self.coeff_stderr if self.coeff_stderr > 0 else math.inf

    def to_json(self) -> dict:
        return {
            "alpha": format_rational(self.alpha),
            "logpow": self.logpow,
            "coeff": self.coeff,
            "coeff_stderr": self.coeff_stderr,
        }


@dataclass(frozen=True)
class AsymptoticModel:
    terms: tuple[ModelTerm, ...]
    window: tuple[float, float]
    chi2: float = math.nan
    dof: int = 0
    dropped: tuple[tuple[Fraction, int], ...] = ()
    edges: np.ndarray | None = field(default=None, compare=False, repr=False)
    threshold: float = 3.0
    gof: tuple[tuple[int, float], ...] = ()

    def __post_init__(self):
        lo, hi = self.window
        if not 0 < lo < hi:
            raise ValueError(f"invalid window {self.window}")

    def evaluate(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        out = np.zeros_like(t)
        for term in self.terms:
            out += term.coeff * _basis(t, float(term.alpha), term.logpow)
        return out

    def leading_term(self) -> ModelTerm | None:
        """Dominant term as ``t -> 0``: smallest exponent, highest log power."""
        return min(self.terms, key=lambda m: (m.alpha, -m.logpow), default=None)

    def term(self, alpha, logpow) -> ModelTerm | None:
        alpha = parse_rational(alpha)
        return next((m for m in self.terms if m.alpha == alpha and m.logpow == logpow), None)

    def to_json(self) -> dict:
        return {
            "terms": [t.to_json() for t in self.terms],
            "window": list(self.window),
            "chi2": self.chi2,
            "dof": self.dof,
            "dropped": [[format_rational(a), k] for a, k in self.dropped],
            "threshold": self.threshold,
            "gof": [[r, p] for r, p in self.gof],
        }


Ladder = Sequence[tuple[Fraction, int]]


def quantile_window(cdf: EmpiricalCDF, qlo: float, qhi: float) -> tuple[float, float]:
    if not 0 < qlo < qhi < 1:
        raise ValueError("window quantiles must satisfy 0 < qlo < qhi < 1")
    return cdf.quantile(qlo), cdf.quantile(qhi)


def _design(edges: np.ndarray, basis: list[tuple[Fraction, int]]) -> np.ndarray:
    cols = []
    for alpha, k in basis:
        g = _basis(edges, float(alpha), k)
        cols.append(np.diff(g))
    return np.column_stack(cols)


def _wls(X, y, var):
    w = 1.0 / np.sqrt(var)
    A = X * w[:, None]
    scale = np.linalg.norm(A, axis=0)
    scale[scale == 0] = 1.0
    As = A / scale
    cond = np.linalg.cond(As)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise IllConditionedFit(
            f"design condition number {cond:.3g} exceeds {MAX_CONDITION:.0e}; "
            "narrow the ladder (fewer rungs or log powers) or widen the window"
        )
    coef_s, *_ = np.linalg.lstsq(As, y * w, rcond=None)
    cov_s = np.linalg.inv(As.T @ As)
    coef = coef_s / scale
    cov = cov_s / np.outer(scale, scale)
    resid = (y - X @ coef) * w
    return coef, cov, float(resid @ resid)


def _fit_once(X, y, obs_var, wscale):
    """Two-pass WLS: observed variances first, then model-predicted ones."""
    coef, cov, chi2 = _wls(X, y, obs_var)
    pred = X @ coef
    var = np.where(pred > 0, pred * wscale, obs_var)
    var = np.maximum(var, obs_var * 1e-3)
    coef, cov, chi2 = _wls(X, y, var)
    dof = max(len(y) - X.shape[1], 1)
    inflate = math.sqrt(max(1.0, chi2 / dof))
    d = np.diag(cov)
    if np.any(d <= 0) or not np.all(np.isfinite(d)):
        raise IllConditionedFit("coefficient covariance is not positive definite")
    return coef, np.sqrt(d) * inflate, chi2, dof


def fit_tail(
    cdf: EmpiricalCDF,
    ladder: Ladder,
    window: tuple[float, float],
    *,
    nbins: int = 128,
    threshold: float = 3.0,
    gof_pvalue: float | None = 0.01,
) -> AsymptoticModel:
    """Weighted least squares of ``F`` against ``sum c t^{2 alpha} (-log t)^k`` on ``window``.

    The data are the empirical masses of disjoint cells: ``[0, t_lo)``
    followed by ``nbins`` geometric bins covering ``[t_lo, t_hi)``.  Cells
    are (nearly) independent, so the weights are inverse multinomial
    variances, taken from the fitted model after a first pass.

    Rungs enter in ascending ``alpha``; with ``gof_pvalue`` set, the ladder
    is cut at the shortest prefix whose full fit passes a chi-square
    goodness-of-fit test at that level and which no longer (still
    well-conditioned) prefix improves on by a likelihood-ratio test at the
    same level, extended by one rung when its last rung carries log powers
    (so a log term always competes with the next power).  Inside it, terms with
    ``|c| < threshold * stderr`` are dropped one at a time (least
    significant first, higher log power first on ties) until every survivor
    is significant.  Elimination is hierarchical: only the highest active
    log power of a rung is eligible, so an order is never carried by a log
    term whose lower powers were removed.  Standard errors are inflated by ``sqrt(chi2/dof)``
    when that exceeds 1.
    """
    t_lo, t_hi = (float(window[0]), float(window[1]))
    if not 0 < t_lo < t_hi:
        raise ValueError(f"empty or invalid window {window}")
    if not ladder:
        raise ValueError("empty ladder")
    alphas = [parse_rational(a) for a, _ in ladder]
    if len(set(alphas)) != len(alphas):
        raise ValueError("ladder alphas must be distinct")
    rungs = sorted(zip(alphas, (int(k) for _, k in ladder)))
    basis: list[tuple[Fraction, int]] = []
    rung_of: list[int] = []
    for r, (a, kmax) in enumerate(rungs):
        if a <= 0 or kmax < 0:
            raise ValueError("ladder entries need alpha > 0 and max_logpow >= 0")
        basis.extend((a, k) for k in range(kmax + 1))
        rung_of.extend([r] * (kmax + 1))
    n_in = int(np.searchsorted(cdf.sorted_values, t_hi, side="left"))
    if n_in < MIN_CELL_SAMPLES * len(basis):
        raise ValueError(
            f"window holds {n_in} samples; need >= {MIN_CELL_SAMPLES} per term ({len(basis)} terms)"
        )
    edges = np.concatenate([[0.0], np.geomspace(t_lo, t_hi, nbins + 1)])
    y, y2, counts = cdf.cell_sums(edges)
    keep = counts > 0
    X_full = _design(edges, basis)[keep]
    y = y[keep]
    obs_var = y2[keep]
    # per-sample weight scale, to turn model-predicted mass into a variance
    wscale = np.where(y > 0, obs_var / np.maximum(y, 1e-300), 0.0)

    nrungs = len(rungs)
    gof: list[tuple[int, float]] = []
    if gof_pvalue is not None:
        fits = []  # (rungs, nparams, chi2, dof)
        for r in range(1, len(rungs) + 1):
            cols = [j for j in range(len(basis)) if rung_of[j] < r]
            try:
                _c, _se, chi2, dof = _fit_once(X_full[:, cols], y, obs_var, wscale)
            except IllConditionedFit:
                if r == 1:
                    raise
                break
            fits.append((r, len(cols), chi2, dof))
            gof.append((r, float(chi2_dist.sf(chi2, dof))))
        nrungs = fits[-1][0]
        for i, (r, k, chi2, dof) in enumerate(fits):
            if chi2_dist.sf(chi2, dof) < gof_pvalue:
                continue
            # no longer prefix may improve the fit significantly
            if all(chi2 - c2 < chi2_dist.isf(gof_pvalue, k2 - k) for _r2, k2, c2, _d2 in fits[i + 1:]):
                nrungs = r
                break
        # a log power can mimic the next rung over a finite window; judge it only with that rung present
        if rungs[nrungs - 1][1] > 0 and nrungs < fits[-1][0]:
            nrungs += 1
    active = [j for j in range(len(basis)) if rung_of[j] < nrungs]
    dropped: list[tuple[Fraction, int]] = [basis[j] for j in range(len(basis)) if rung_of[j] >= nrungs]
    while True:
        coef, se, chi2, dof = _fit_once(X_full[:, active], y, obs_var, wscale)
        z = np.abs(coef) / se
        # only the top log power of a rung may go: a log term never outlives the powers below it
        top = {}
        for i, j in enumerate(active):
            a, k = basis[j]
            if a not in top or k > basis[active[top[a]]][1]:
                top[a] = i
        weak = [i for i in top.values() if z[i] < threshold]
        if not weak or len(active) == 1:
            break
        worst = min(weak, key=lambda i: (z[i], -basis[active[i]][1]))
        dropped.append(basis[active[worst]])
        del active[worst]
    terms = tuple(
        ModelTerm(basis[j][0], basis[j][1], float(coef[i]), float(se[i])) for i, j in enumerate(active)
    )
    return AsymptoticModel(terms, (t_lo, t_hi), chi2, dof, tuple(dropped), edges, threshold, tuple(gof))


# -- pole reports -------------------------------------------------------------


@dataclass(frozen=True)
class Pole:
    location: Fraction
    order: int
    leading: float = math.nan
    leading_stderr: float = math.nan

    def to_json(self) -> dict:
        return {
            "location": format_rational(self.location),
            "order": self.order,
            "leading": None if math.isnan(self.leading) else self.leading,
            "leading_stderr": None if math.isnan(self.leading_stderr) else self.leading_stderr,
        }


@dataclass(frozen=True)
class PoleReport:
    poles: tuple[Pole, ...]
    reduced: bool = False
    provenance: str = "numeric"  # numeric | exact
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        ps = tuple(sorted(self.poles, key=lambda p: p.location, reverse=True))
        for p in ps:
            if p.location >= 0 or p.order < 1:
                raise ValueError(f"invalid pole {p}")
        object.__setattr__(self, "poles", ps)

    def order_at(self, location) -> int:
        loc = parse_rational(location)
        return next((p.order for p in self.poles if p.location == loc), 0)

    def largest(self) -> Pole | None:
        return self.poles[0] if self.poles else None

    def as_dict(self) -> dict[Fraction, int]:
        return {p.location: p.order for p in self.poles}

    def to_json(self) -> dict:
        return {
            "poles": [p.to_json() for p in self.poles],
            "reduced": self.reduced,
            "provenance": self.provenance,
            "meta": self.meta,
        }


def poles_from_model(m: AsymptoticModel) -> PoleReport:
    """Pole at ``-alpha`` of order ``1 + max surviving log power`` for every rung with a surviving term."""
    by_alpha: dict[Fraction, ModelTerm] = {}
    for t in m.terms:
        cur = by_alpha.get(t.alpha)
        if cur is None or t.logpow > cur.logpow:
            by_alpha[t.alpha] = t
    poles = tuple(Pole(-a, t.logpow + 1, t.coeff, t.coeff_stderr) for a, t in by_alpha.items())
    return PoleReport(poles, reduced=False, provenance="numeric", meta={"model": m.to_json()})


def reduce_by_gamma(r: PoleReport) -> PoleReport:
    """Divide by ``Gamma(s+1)``: one order less at every negative integer."""
    if r.reduced:
        raise ReductionError("report is already reduced")
    out = []
    for p in r.poles:
        if p.location.denominator == 1:
            if p.order > 1:
                out.append(replace(p, order=p.order - 1))
        else:
            out.append(p)
    return PoleReport(tuple(out), True, r.provenance, dict(r.meta))


def exact_monomial_report(a: Sequence[int], floor) -> PoleReport:
    """Exact poles of ``prod Gamma(a_i s + 1)`` down to ``floor``."""
    floor = parse_rational(floor)
    counts: dict[Fraction, int] = {}
    for ai in a:
        j = 1
        while Fraction(-j, ai) >= floor:
            loc = Fraction(-j, ai)
            counts[loc] = counts.get(loc, 0) + 1
            j += 1
    return PoleReport(tuple(Pole(loc, m) for loc, m in counts.items()), provenance="exact")


# -- ladders ------------------------------------------------------------------


def bernstein_multiplicities(b: BFunction, alpha_max) -> dict[Fraction, int]:
    """Multiplicity of ``-alpha`` as a root of ``prod_{i>=0} b(s+i)`` for every rung ``alpha <= alpha_max``."""
    alpha_max = parse_rational(alpha_max)
    mult: dict[Fraction, int] = {}
    for a, m in b.roots.items():
        x = a
        while x <= alpha_max:
            mult[x] = mult.get(x, 0) + m
            x += 1
    return dict(sorted(mult.items()))


def ladder_from_bfunction(b: BFunction, alpha_max, *, slack: dict | None = None) -> list[tuple[Fraction, int]]:
    """Rungs allowed by Bernstein's bound, log powers up to ``multiplicity - 1`` plus optional slack."""
    slack = {parse_rational(k): v for k, v in (slack or {}).items()}
    return [(a, m - 1 + slack.get(a, 0)) for a, m in bernstein_multiplicities(b, alpha_max).items()]


def ladder_from_candidates(cands: Iterable, alpha_max=None) -> list[tuple[Fraction, int]]:
    out = []
    for c in cands:
        a = -c.location
        if alpha_max is None or a <= parse_rational(alpha_max):
            out.append((a, c.order_bound - 1))
    return sorted(out)


def grid_ladder(nvars: int, max_den: int = 12, max_logpow: int = 0) -> list[tuple[Fraction, int]]:
    vals = {Fraction(p, q) for q in range(1, max_den + 1) for p in range(1, nvars * q + 1)}
    return [(a, max_logpow) for a in sorted(vals)]


def truncate_ladder(ladder: Ladder, t_hi: float, rel: float) -> list[tuple[Fraction, int]]:
    """Keep rungs whose size relative to the leading rung at ``t_hi`` is at least ``rel``."""
    ladder = sorted((parse_rational(a), k) for a, k in ladder)
    a0 = ladder[0][0]
    return [(a, k) for a, k in ladder if t_hi ** (2 * float(a - a0)) >= rel]


DEEP_TAIL_RATIOS = (2, 4, 8)
DEEP_TAIL_Z = 4.0
MIN_DEEP_EXPECTED = 50


def deep_tail_check(model: AsymptoticModel, cdf: EmpiricalCDF, ratios=DEEP_TAIL_RATIOS) -> dict[int, float]:
    """Held-out check below the window: observed vs predicted mass of ``[0, t_lo / rho)``.

    The fit only sees ``[0, t_lo)`` as one lumped cell, so the shape of the
    model further down is a prediction.  A ladder missing the true leading
    exponent can mimic it inside the window but extrapolates wrongly.
    Returns a z-score per ratio with at least ``MIN_DEEP_EXPECTED`` expected samples.
    """
    out = {}
    for rho in ratios:
        t = model.window[0] / rho
        pred = float(model.evaluate(np.array([t]))[0])
        k = int(np.searchsorted(cdf.sorted_values, t, side="left"))
        if cdf.weights is None:
            obs, per = k / len(cdf), 1.0 / len(cdf)
        else:
            w = cdf.weights[:k]
            obs = float(w.sum())
            per = float((w * w).sum() / obs) if obs > 0 else 1.0 / cdf.ess
        if pred <= 0 or pred / per < MIN_DEEP_EXPECTED:
            continue
        out[rho] = (obs - pred) / math.sqrt(pred * per)
    return out


@dataclass(frozen=True)
class Detection:
    report: PoleReport
    model: AsymptoticModel
    cdf: EmpiricalCDF
    ladder: tuple[tuple[Fraction, int], ...]
    deep_tail: dict = field(default_factory=dict, compare=False)

    @property
    def adequate(self) -> bool:
        """Model predicts the held-out tail below the window (``|z| < DEEP_TAIL_Z`` at every ratio)."""
        return all(abs(z) < DEEP_TAIL_Z for z in self.deep_tail.values())


DEFAULT_WINDOW = (0.001, 0.05)
DEFAULT_DEPTH = 1e-3


def detect_poles(
    f: Polynomial,
    plan: SamplePlan,
    ladder: Ladder,
    *,
    window_q: tuple[float, float] = DEFAULT_WINDOW,
    depth: float = DEFAULT_DEPTH,
    nbins: int = 128,
    cdf: EmpiricalCDF | None = None,
) -> Detection:
    """Sample, fit on the quantile window and read off the unreduced pole report.

    ``ladder`` is truncated to rungs still visible in the window (relative
    size ``>= depth`` at the upper window edge).
    """
    if cdf is None:
        cdf = sample_abs_f(f, plan)
    window = quantile_window(cdf, *window_q)
    lad = truncate_ladder(ladder, window[1], depth)
    model = fit_tail(cdf, lad, window, nbins=nbins)
    report = poles_from_model(model)
    deep = deep_tail_check(model, cdf)
    report.meta.update({"plan": plan.to_json(), "window_q": list(window_q), "ess": cdf.ess,
                        "deep_tail_z": {str(k): v for k, v in deep.items()}})
    return Detection(report, model, cdf, tuple(lad), deep)


# -- special functions and oracles ---------------------------------------------

_LANCZOS_G = 7
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma_eval(s: complex) -> complex:
    """Lanczos approximation of ``Gamma(s)`` with reflection for ``Re s < 1/2``."""
    s = complex(s)
    if s.imag == 0 and s.real <= 0 and s.real == math.floor(s.real):
        raise ValueError(f"Gamma has a pole at {s.real:g}")
    if s.real < 0.5:
        return cmath.pi / (cmath.sin(cmath.pi * s) * gamma_eval(1 - s))
    z = s - 1
    x = _LANCZOS[0]
    for i in range(1, _LANCZOS_G + 2):
        x += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return cmath.sqrt(2 * cmath.pi) * t ** (z + 0.5) * cmath.exp(-t) * x


def radial_oracle_monomial(a: Sequence[int], s: complex, precision: float = 1e-12) -> complex:
    """``prod_i int_0^inf u^{a_i s} e^{-u} du`` by tanh-sinh quadrature (no gamma-function call)."""
    a = [int(v) for v in a]
    s = complex(s)
    if not a or any(v < 1 for v in a):
        raise ValueError("monomial exponents must be >= 1")
    for ai in a:
        if not (ai * s).real > -1:
            raise ConvergenceStripError(f"Re({ai}*s) = {(ai * s).real} is not > -1")
    dps = max(20, int(-math.log10(precision)) + 8)
    total = mpmath.mpc(1)
    with mpmath.workdps(dps):
        for ai in a:
            c = mpmath.mpc(ai * s.real, ai * s.imag)
            val = mpmath.quad(lambda u: mpmath.power(u, c) * mpmath.exp(-u), [0, 1, 10, mpmath.inf])
            total *= val
    return complex(total)
