"""Bernstein-Sato root data for a tractable corpus of polynomials.

A b-function is stored as the multiset of its roots, keyed by the positive
number ``alpha`` for the root ``-alpha``.  Nothing here expands polynomials
in ``s``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from itertools import product
from pathlib import Path
from typing import Mapping

from .algebra import Polynomial, classify_shape, format_rational, parse_polynomial, parse_rational

ONE = Fraction(1)


class CorruptBFunctionError(ValueError):
    pass


class UnknownCorpusEntry(KeyError):
    pass


@dataclass(frozen=True)
class BFunction:
    """Root multiset ``{alpha: multiplicity}`` standing for ``prod (s + alpha)^m``.

    ``complete`` is False for entries that only pin down some roots; the
    verification layer then treats unlisted roots as unknown.
    """

    roots: Mapping[Fraction, int] = field(default_factory=dict)
    complete: bool = True

    def __post_init__(self):
        clean = {}
        for a, m in dict(self.roots).items():
            a = parse_rational(a)
            m = int(m)
            if a <= 0:
                raise ValueError(f"b-function roots are negative rationals; got root {-a}")
            if m < 1:
                raise ValueError(f"multiplicity must be positive, got {m} at {a}")
            clean[a] = clean.get(a, 0) + m
        object.__setattr__(self, "roots", dict(sorted(clean.items())))

    def multiplicity(self, alpha) -> int:
        return self.roots.get(parse_rational(alpha), 0)

    def degree(self) -> int:
        return sum(self.roots.values())

    def __eq__(self, other):
        return isinstance(other, BFunction) and self.roots == other.roots

    def __hash__(self):
        return hash(tuple(self.roots.items()))

    def __repr__(self):
        body = ", ".join(f"{format_rational(a)}:{m}" for a, m in self.roots.items())
        return f"BFunction({{{body}}})"

    def adjoin_one(self) -> BFunction:
        r = dict(self.roots)
        r[ONE] = r.get(ONE, 0) + 1
        return BFunction(r, self.complete)

    def to_json(self) -> dict:
        return {
            "roots": [[format_rational(a), m] for a, m in self.roots.items()],
            "complete": self.complete,
        }

    @classmethod
    def from_json(cls, data) -> BFunction:
        return cls({parse_rational(a): int(m) for a, m in data["roots"]}, bool(data.get("complete", True)))


@dataclass(frozen=True)
class MinimalExponentReport:
    alpha_tilde: Fraction | None  # None encodes +infinity (smooth f)
    multiplicity: int
    lct: Fraction

    @property
    def is_infinite(self) -> bool:
        return self.alpha_tilde is None

    def to_json(self) -> dict:
        return {
            "alpha_tilde": "inf" if self.alpha_tilde is None else format_rational(self.alpha_tilde),
            "multiplicity": self.multiplicity,
            "lct": format_rational(self.lct),
        }


def bfun_monomial(a) -> BFunction:
    """b-function of ``prod x_i^{a_i}``: roots ``j/a_i`` for ``1 <= j <= a_i``, coincidences add up."""
    a = [int(v) for v in a]
    if not a:
        raise ValueError("empty exponent vector")
    if any(v < 1 for v in a):
        raise ValueError("monomial exponents must be >= 1")
    roots: dict[Fraction, int] = {}
    for ai in a:
        for j in range(1, ai + 1):
            q = Fraction(j, ai)
            roots[q] = roots.get(q, 0) + 1
    return BFunction(roots)


def bfun_brieskorn_pham(a) -> BFunction:
    """Reduced b-function of ``sum x_i^{a_i}``.

    Roots are the sums ``sum (m_i + 1)/a_i`` with ``0 <= m_i <= a_i - 2``,
    each simple even when several multi-indices give the same sum.
    """
    a = [int(v) for v in a]
    if not a:
        raise ValueError("empty exponent vector")
    if any(v < 2 for v in a):
        raise ValueError("Brieskorn-Pham exponents must all be >= 2")
    sums = {sum(Fraction(m + 1, ai) for m, ai in zip(ms, a)) for ms in product(*(range(ai - 1) for ai in a))}
    return BFunction({q: 1 for q in sums})


def reduce(b: BFunction) -> BFunction:
    """Divide out one factor ``(s + 1)``."""
    m = b.multiplicity(ONE)
    if m < 1:
        raise CorruptBFunctionError("b(-1) != 0: every nonconstant f has (s+1) dividing b_f")
    r = dict(b.roots)
    if m == 1:
        del r[ONE]
    else:
        r[ONE] = m - 1
    return BFunction(r, b.complete)


def minimal_exponent(b_reduced: BFunction) -> MinimalExponentReport:
    if not b_reduced.roots:
        return MinimalExponentReport(None, 0, ONE)
    alpha = min(b_reduced.roots)
    return MinimalExponentReport(alpha, b_reduced.roots[alpha], min(alpha, ONE))


def shift_graph_generator(b_reduced: BFunction, ell: int) -> BFunction:
    """Roots of ``(s + 1) * b_reduced(s - ell)``."""
    if ell < 0:
        raise ValueError("shift must be non-negative")
    r = {a + ell: m for a, m in b_reduced.roots.items()}
    r[ONE] = r.get(ONE, 0) + 1
    return BFunction(r, b_reduced.complete)


def _default_corpus_path():
    return resources.files("archzeta") / "data" / "corpus.json"


@lru_cache(maxsize=8)
def _load_corpus(path: str | None) -> dict:
    if path is None:
        text = _default_corpus_path().read_text()
    else:
        text = Path(path).read_text()
    data = json.loads(text)
    return {name: entry for name, entry in data.items()}


def corpus_names(path: str | None = None) -> list[str]:
    return sorted(_load_corpus(path))


def load_corpus_entry(name: str, path: str | None = None) -> BFunction:
    """Full b-function ``b_f`` of a named corpus entry."""
    corpus = _load_corpus(None if path is None else str(path))
    if name not in corpus:
        raise UnknownCorpusEntry(name)
    return BFunction.from_json(corpus[name])


def find_corpus_entry(f: Polynomial, path: str | None = None) -> str | None:
    """Name of the corpus entry whose polynomial has the same canonical form as ``f``."""
    corpus = _load_corpus(None if path is None else str(path))
    for name, entry in corpus.items():
        text = entry.get("polynomial")
        if not text:
            continue
        g = parse_polynomial(text)
        if g.nvars == f.nvars and g.terms == f.terms:
            return name
    return None


def bfunction_for(f: Polynomial, name: str | None = None, corpus_path: str | None = None) -> tuple[BFunction, str]:
    """Full b-function of ``f`` and the route used to obtain it.

    Exact formulas are used for monomials and Brieskorn-Pham sums; other
    polynomials need a corpus entry, either named or found by canonical form.
    """
    if name is not None:
        return load_corpus_entry(name, corpus_path), f"corpus:{name}"
    shape = classify_shape(f)
    if shape.kind == "monomial":
        a = [e for e in shape.a if e]
        if not a:
            raise ValueError("constant monomial has no b-function roots")
        return bfun_monomial(a), "exact:monomial"
    if shape.kind == "brieskorn_pham":
        return bfun_brieskorn_pham(shape.a).adjoin_one(), "exact:brieskorn_pham"
    found = find_corpus_entry(f, corpus_path)
    if found is None:
        raise UnknownCorpusEntry(f"no exact route or corpus entry for {f}")
    return load_corpus_entry(found, corpus_path), f"corpus:{found}"
