"""Exact scalars and polynomials over the rationals.

Scalars are ``gmpy2.mpq`` values. ``LinPoly`` holds affine-linear polynomials
(hyperplane equations, shifted poles) and ``SparsePoly`` holds arbitrary
multivariate polynomials, used when clearing denominators.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from gmpy2 import mpq, mpz

from .errors import ParseError

Rational = type(mpq(0))
ZERO = mpq(0)
ONE = mpq(1)
MAX_VARS = 8

_RAT_RE = re.compile(r"^\s*([-+]?\d+)(?:\s*/\s*(\d+))?\s*$")


def Q(value) -> Rational:
    """Coerce an int, Fraction, mpq or "p/q" string to an exact rational.

    Floats and complex numbers are rejected: nothing in the package may round.
    """
    if isinstance(value, Rational):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, type(mpz(0)))):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def parse_rational(text: str, path: str = "") -> Rational:
    if not isinstance(text, str):
        if isinstance(text, int) and not isinstance(text, bool):
            return mpq(text)
        raise ParseError(f"{path or 'value'}: expected rational string, got {text!r}")
    m = _RAT_RE.match(text)
    if not m:
        raise ParseError(f"{path or 'value'}: malformed rational {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ParseError(f"{path or 'value'}: zero denominator in {text!r}")
    return mpq(num, den)


def fmt(r) -> str:
    """Serialize as "p/q", or "p" when the denominator is 1."""
    return str(Q(r))


def is_integer(r: Rational) -> bool:
    return r.denominator == 1


@dataclass(frozen=True)
class LinPoly:
    """const + sum(coeffs[i] * x_i), variables indexed from 0."""

    const: Rational
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "const", Q(self.const))
        object.__setattr__(self, "coeffs", tuple(Q(c) for c in self.coeffs))
        if len(self.coeffs) > MAX_VARS:
            raise ValueError(f"at most {MAX_VARS} variables are supported")

    @classmethod
    def zero(cls, n: int) -> "LinPoly":
        return cls(ZERO, (ZERO,) * n)

    @classmethod
    def constant(cls, n: int, c) -> "LinPoly":
        return cls(Q(c), (ZERO,) * n)

    @classmethod
    def var(cls, n: int, i: int, coeff=1, const=0) -> "LinPoly":
        cs = [ZERO] * n
        cs[i] = Q(coeff)
        return cls(Q(const), tuple(cs))

    @classmethod
    def from_terms(cls, n: int, terms: dict, const=0) -> "LinPoly":
        cs = [ZERO] * n
        for i, c in terms.items():
            cs[i] = Q(c)
        return cls(Q(const), tuple(cs))

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def partial(self, v: int) -> Rational:
        return self.coeffs[v]

    def __call__(self, point: Sequence) -> Rational:
        return self.eval(point)

    def eval(self, point: Sequence) -> Rational:
        if len(point) != self.n:
            raise ValueError(f"point has length {len(point)}, expected {self.n}")
        total = self.const
        for c, p in zip(self.coeffs, point):
            if c:
                total += c * Q(p)
        return total

    def is_zero(self) -> bool:
        return not self.const and not any(self.coeffs)

    def is_constant(self) -> bool:
        return not any(self.coeffs)

    def support(self) -> tuple:
        return tuple(i for i, c in enumerate(self.coeffs) if c)

    def __add__(self, other):
        if isinstance(other, LinPoly):
            self._check(other)
            return LinPoly(self.const + other.const,
                           tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))
        return LinPoly(self.const + Q(other), self.coeffs)

    __radd__ = __add__

    def __neg__(self):
        return LinPoly(-self.const, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, s):
        s = Q(s)
        return LinPoly(self.const * s, tuple(c * s for c in self.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, s):
        return self * (ONE / Q(s))

    def substitute(self, v: int, p: "LinPoly") -> "LinPoly":
        """Replace x_v by the affine polynomial p."""
        c = self.coeffs[v]
        cs = list(self.coeffs)
        cs[v] = ZERO
        return LinPoly(self.const, tuple(cs)) + p * c

    def sort_key(self) -> tuple:
        # constants first, then lexicographic in the coefficient vector
        return (not self.is_constant(), tuple(self.coeffs), self.const)

    def to_json(self) -> dict:
        return {"const": fmt(self.const), "coeffs": [fmt(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, doc, path: str = "poly") -> "LinPoly":
        if not isinstance(doc, dict) or "const" not in doc or "coeffs" not in doc:
            raise ParseError(f"{path}: expected object with 'const' and 'coeffs'")
        if not isinstance(doc["coeffs"], list):
            raise ParseError(f"{path}.coeffs: expected list")
        const = parse_rational(doc["const"], f"{path}.const")
        cs = tuple(parse_rational(c, f"{path}.coeffs[{k}]") for k, c in enumerate(doc["coeffs"]))
        return cls(const, cs)

    def pretty(self, names: Sequence[str] | None = None) -> str:
        names = names or default_names(self.n)
        parts = []
        for name, c in zip(names, self.coeffs):
            if not c:
                continue
            if c == 1:
                parts.append(f"+{name}")
            elif c == -1:
                parts.append(f"-{name}")
            else:
                parts.append(f"{'+' if c > 0 else '-'}{abs(c)}*{name}")
        if self.const or not parts:
            parts.append(f"{'+' if self.const >= 0 else '-'}{abs(self.const)}")
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s

    def __str__(self):
        return self.pretty()

    def _check(self, other):
        if other.n != self.n:
            raise ValueError("polynomials live in different variable counts")


def default_names(n: int) -> tuple:
    if n <= 3:
        return ("x", "y", "z")[:n]
    return tuple(f"x{i + 1}" for i in range(n))


class SparsePoly:
    """Multivariate polynomial as a map exponent-tuple -> nonzero rational."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict | None = None):
        self.n = n
        clean = {}
        if terms:
            for e, c in terms.items():
                if len(e) != n:
                    raise ValueError("exponent length mismatch")
                c = Q(c)
                if c:
                    clean[tuple(e)] = c
        self.terms = clean

    @classmethod
    def const(cls, n: int, c) -> "SparsePoly":
        return cls(n, {(0,) * n: c})

    @classmethod
    def variable(cls, n: int, i: int) -> "SparsePoly":
        e = [0] * n
        e[i] = 1
        return cls(n, {tuple(e): ONE})

    @classmethod
    def from_linpoly(cls, p: LinPoly) -> "SparsePoly":
        terms = {(0,) * p.n: p.const}
        for i, c in enumerate(p.coeffs):
            if c:
                e = [0] * p.n
                e[i] = 1
                terms[tuple(e)] = c
        return cls(p.n, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def _same(self, other):
        if other.n != self.n:
            raise ValueError("variable count mismatch")

    def __add__(self, other):
        self._same(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, ZERO) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        r = SparsePoly(self.n)
        r.terms = out
        return r

    def __neg__(self):
        r = SparsePoly(self.n)
        r.terms = {e: -c for e, c in self.terms.items()}
        return r

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, SparsePoly):
            s = Q(other)
            r = SparsePoly(self.n)
            r.terms = {e: c * s for e, c in self.terms.items()} if s else {}
            return r
        self._same(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, ZERO) + c1 * c2
        return SparsePoly(self.n, out)

    __rmul__ = __mul__

    def eval(self, point: Sequence) -> Rational:
        total = ZERO
        pt = [Q(p) for p in point]
        for e, c in self.terms.items():
            t = c
            for x, k in zip(pt, e):
                if k:
                    t *= x ** k
            total += t
        return total

    def canonical(self) -> tuple:
        return tuple(sorted(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        out = []
        names = default_names(self.n)
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"{names[i]}^{k}" if k > 1 else names[i]
                            for i, k in enumerate(e) if k)
            out.append(f"{c}*{mono}" if mono else f"{c}")
        return " + ".join(out)


def product(polys: Iterable[SparsePoly], n: int) -> SparsePoly:
    out = SparsePoly.const(n, 1)
    for p in polys:
        out = out * p
    return out
