"""Exact sparse multivariate polynomials over Q(i).

Coefficients are stored as pairs of :class:`fractions.Fraction` (real and
imaginary part).  Terms are kept in graded-lexicographic order so printing,
hashing and JSON serialisation are deterministic.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

MAX_EXPONENT = 10_000

Coeff = tuple[Fraction, Fraction]


class PolynomialSyntaxError(ValueError):
    """Raised by :func:`parse_polynomial`; ``offset`` is the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownVariableError(PolynomialSyntaxError):
    pass


class DegeneratePolynomialError(ValueError):
    """Zero or constant polynomial handed to a zeta-facing routine."""


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an int into a reduced Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        raise TypeError("floats are not accepted where an exact rational is required")
    return Fraction(str(text).strip())


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _grlex_key(exp: tuple[int, ...]):
    return (-sum(exp), tuple(-e for e in exp))


@dataclass(frozen=True)
class Polynomial:
    """Immutable sparse polynomial in ``nvars`` variables.

    ``terms`` maps exponent tuples to ``(re, im)`` Fraction pairs; zero
    coefficients are never stored.
    """

    nvars: int
    terms: tuple[tuple[tuple[int, ...], Coeff], ...]
    names: tuple[str, ...] = ()

    def __init__(self, nvars: int, terms: Mapping[Sequence[int], object] | Iterable = (), names=()):
        if nvars < 1:
            raise ValueError("nvars must be positive")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple[int, ...], list[Fraction]] = {}
        for exp, c in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars:
                raise ValueError(f"exponent {exp} has length {len(exp)}, expected {nvars}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            re_, im_ = _as_coeff(c)
            slot = acc.setdefault(exp, [Fraction(0), Fraction(0)])
            slot[0] += re_
            slot[1] += im_
        clean = [(e, (c[0], c[1])) for e, c in acc.items() if c[0] != 0 or c[1] != 0]
        clean.sort(key=lambda t: _grlex_key(t[0]))
        names = tuple(names) if names else default_names(nvars)
        if len(names) != nvars:
            raise ValueError("names must have nvars entries")
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", tuple(clean))
        object.__setattr__(self, "names", names)

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, self.terms))

    @property
    def term_dict(self) -> dict[tuple[int, ...], Coeff]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e, _ in self.terms)

    def constant_term(self) -> Coeff:
        return self.term_dict.get((0,) * self.nvars, (Fraction(0), Fraction(0)))

    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=-1)

    def __add__(self, other: Polynomial) -> Polynomial:
        _check_same_ring(self, other)
        return Polynomial(self.nvars, list(self.terms) + list(other.terms), self.names)

    def __neg__(self) -> Polynomial:
        return Polynomial(self.nvars, [(e, (-a, -b)) for e, (a, b) in self.terms], self.names)

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + (-other)

    def __mul__(self, other: Polynomial) -> Polynomial:
        _check_same_ring(self, other)
        out = []
        for e1, (a1, b1) in self.terms:
            for e2, (a2, b2) in other.terms:
                exp = tuple(x + y for x, y in zip(e1, e2))
                out.append((exp, (a1 * a2 - b1 * b2, a1 * b2 + a2 * b1)))
        return Polynomial(self.nvars, out, self.names)

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"Polynomial({to_text(self)!r}, nvars={self.nvars})"

    def require_nonconstant(self) -> None:
        if self.is_zero() or self.is_constant():
            raise DegeneratePolynomialError("zero or constant polynomial has no zeta-function singularities")

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "terms": [
                {"exp": list(e), "re": format_rational(a), "im": format_rational(b)}
                for e, (a, b) in self.terms
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> Polynomial:
        terms = [
            (t["exp"], (parse_rational(t.get("re", "0")), parse_rational(t.get("im", "0"))))
            for t in data["terms"]
        ]
        return cls(int(data["nvars"]), terms)

    def packed(self):
        """Exponent matrix and float coefficient vectors, the form the sampling kernels consume."""
        exps = np.array([e for e, _ in self.terms], dtype=np.int64).reshape(len(self.terms), self.nvars)
        cre = np.array([float(a) for _, (a, _b) in self.terms], dtype=np.float64)
        cim = np.array([float(b) for _, (_a, b) in self.terms], dtype=np.float64)
        return exps, cre, cim


def _as_coeff(c) -> Coeff:
    if isinstance(c, tuple):
        return Fraction(c[0]), Fraction(c[1])
    if isinstance(c, complex):
        raise TypeError("complex floats are not exact; pass a (re, im) pair of rationals")
    return Fraction(c), Fraction(0)


def _check_same_ring(p: Polynomial, q: Polynomial):
    if p.nvars != q.nvars:
        raise ValueError(f"variable count mismatch: {p.nvars} vs {q.nvars}")


def default_names(n: int) -> tuple[str, ...]:
    if n <= 4:
        return ("x", "y", "z", "w")[:n]
    return tuple(f"x{i}" for i in range(1, n + 1))


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^()]))"
)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            off = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise PolynomialSyntaxError(f"unexpected character {text[off]!r}", _byte_offset(text, off))
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    return out


def _byte_offset(text: str, char_offset: int) -> int:
    return len(text[:char_offset].encode("utf-8"))


def _infer_variables(names: set[str]) -> list[str]:
    names = set(names) - {"i"}
    std = ["x", "y", "z", "w"]
    if names <= set(std):
        # smallest prefix of the default alphabet covering every name
        k = max((std.index(v) + 1 for v in names), default=1)
        return std[:k]
    indexed = {}
    prefixes = set()
    for v in names:
        m = re.fullmatch(r"([A-Za-z_]+)(\d+)", v)
        if not m:
            return sorted(names)
        prefixes.add(m.group(1))
        indexed[v] = int(m.group(2))
    if len(prefixes) == 1:
        prefix = prefixes.pop()
        top = max(indexed.values())
        lo = 0 if min(indexed.values()) == 0 else 1
        return [f"{prefix}{j}" for j in range(lo, top + 1)]
    return sorted(names, key=lambda v: (re.sub(r"\d+$", "", v), indexed[v]))


def parse_polynomial(text: str, variables: Sequence[str] | None = None, *, permissive: bool = False) -> Polynomial:
    """Parse a polynomial in the ``3*x^2*y - 1/2*z + i*w`` grammar.

    Terms are joined by ``+``/``-``; a term is an optional integer or
    rational coefficient followed by ``*``-joined factors ``var`` or
    ``var^exp``.  ``i`` is the imaginary unit.  Without ``variables`` the
    alphabet is ``x,y,z,w`` (prefix actually used) or ``x1..xn``-style
    indexed names.

    Zero and constant polynomials raise :class:`DegeneratePolynomialError`
    unless ``permissive`` is set.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise PolynomialSyntaxError("empty expression", 0)
    seen = {tok for kind, tok, _ in tokens if kind == "name"}
    if variables is None:
        varlist = _infer_variables(seen)
    else:
        varlist = list(variables)
        if "i" in varlist:
            raise ValueError("'i' is reserved for the imaginary unit")
        for kind, tok, off in tokens:
            if kind == "name" and tok != "i" and tok not in varlist:
                raise UnknownVariableError(f"unknown variable {tok!r}", _byte_offset(text, off))
    index = {v: j for j, v in enumerate(varlist)}
    n = max(len(varlist), 1)

    terms = []
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def fail(msg, tok=None):
        off = tok[2] if tok else len(text)
        raise PolynomialSyntaxError(msg, _byte_offset(text, off))

    while pos < len(tokens):
        sign = 1
        tok = peek()
        if tok[0] == "op" and tok[1] in "+-":
            sign = -1 if tok[1] == "-" else 1
            pos += 1
        elif terms:
            fail("expected '+' or '-'", tok)
        if peek() is None:
            fail("dangling sign")
        coeff = (Fraction(sign), Fraction(0))
        exp = [0] * n
        expect_factor = True
        while expect_factor:
            tok = peek()
            if tok is None:
                fail("expected a factor")
            kind, val, _off = tok
            if kind == "num":
                pos += 1
                q = Fraction(val)
                coeff = (coeff[0] * q, coeff[1] * q)
                if peek() is not None and peek()[0] == "op" and peek()[1] == "^":
                    fail("exponent on a numeric literal is not supported", peek())
            elif kind == "name":
                pos += 1
                power = 1
                if peek() is not None and peek()[0] == "op" and peek()[1] == "^":
                    pos += 1
                    etok = peek()
                    if etok is None or etok[0] != "num" or "/" in etok[1]:
                        fail("expected a non-negative integer exponent", etok)
                    power = int(etok[1])
                    if power > MAX_EXPONENT:
                        raise PolynomialSyntaxError(f"exponent {power} exceeds {MAX_EXPONENT}", _byte_offset(text, etok[2]))
                    pos += 1
                if val == "i":
                    for _ in range(power % 4):
                        coeff = (-coeff[1], coeff[0])
                else:
                    exp[index[val]] += power
                    if exp[index[val]] > MAX_EXPONENT:
                        raise PolynomialSyntaxError(f"exponent exceeds {MAX_EXPONENT}", _byte_offset(text, tok[2]))
            else:
                fail(f"unexpected {val!r}", tok)
            nxt = peek()
            if nxt is not None and nxt[0] == "op" and nxt[1] == "*":
                pos += 1
            else:
                expect_factor = False
        terms.append((tuple(exp), coeff))

    p = Polynomial(n, terms, varlist if varlist else None)
    if not permissive:
        p.require_nonconstant()
    return p


def to_text(p: Polynomial) -> str:
    """Canonical printer; :func:`parse_polynomial` inverts it given the same variable names."""
    if p.is_zero():
        return "0"
    parts = []
    for exp, (a, b) in p.terms:
        mono = "*".join(
            v if e == 1 else f"{v}^{e}" for v, e in zip(p.names, exp) if e
        )
        if b == 0:
            sign, body = ("-" if a < 0 else "+"), _coeff_mono(abs(a), mono)
        elif a == 0:
            sign, body = ("-" if b < 0 else "+"), _coeff_mono(abs(b), mono, imag=True)
        else:
            # mixed coefficient prints as two terms sharing the monomial
            s1, b1 = ("-" if a < 0 else "+"), _coeff_mono(abs(a), mono)
            parts.append((s1, b1))
            sign, body = ("-" if b < 0 else "+"), _coeff_mono(abs(b), mono, imag=True)
        parts.append((sign, body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def _coeff_mono(c: Fraction, mono: str, imag: bool = False) -> str:
    factors = []
    if c != 1 or (not mono and not imag):
        factors.append(format_rational(c))
    if imag:
        factors.append("i")
    if mono:
        factors.append(mono)
    return "*".join(factors)


def evaluate(p: Polynomial, x: Sequence[complex]) -> complex:
    """Sparse term-by-term evaluation at a single complex point."""
    if len(x) != p.nvars:
        raise ValueError(f"point has {len(x)} coordinates, polynomial has {p.nvars} variables")
    xs = [complex(v) for v in x]
    if not all(np.isfinite(v.real) and np.isfinite(v.imag) for v in xs):
        raise ValueError("non-finite coordinate")
    total = 0j
    for exp, (a, b) in p.terms:
        term = complex(float(a), float(b))
        for v, e in zip(xs, exp):
            if e:
                term *= v**e
        total += term
    return total


def support(p: Polynomial) -> set[tuple[int, ...]]:
    return {e for e, _ in p.terms}


@dataclass(frozen=True)
class Shape:
    kind: str  # "monomial" | "brieskorn_pham" | "other"
    a: tuple[int, ...] = ()


def classify_shape(p: Polynomial) -> Shape:
    """Tag ``p`` as a monomial, a Brieskorn-Pham sum or anything else."""
    if len(p.terms) == 1:
        return Shape("monomial", p.terms[0][0])
    if len(p.terms) != p.nvars:
        return Shape("other")
    a = [0] * p.nvars
    for exp, _ in p.terms:
        nz = [j for j, e in enumerate(exp) if e]
        if len(nz) != 1 or exp[nz[0]] < 2 or a[nz[0]]:
            return Shape("other")
        a[nz[0]] = exp[nz[0]]
    return Shape("brieskorn_pham", tuple(a))
