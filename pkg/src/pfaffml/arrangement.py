"""Hyperplane arrangements and directional pole data.

For a plane H with defining polynomial f_H and a direction x with
(f_H)_x != 0, the shifted pole a_H is defined by f_H = (f_H)_x (x - a_H).
For two planes in the same direction, c_{HH'} is the y-pole of a_H - a_H'.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import NotInDirection, ParseError, ZeroPolynomial
from .exact import ONE, LinPoly


@dataclass(frozen=True)
class Hyperplane:
    poly: LinPoly
    label: str = ""

    @property
    def n(self) -> int:
        return self.poly.n

    def depends_on(self, x: int) -> bool:
        return bool(self.poly.coeffs[x])

    def to_json(self) -> dict:
        return {"label": self.label, "poly": self.poly.to_json()}


def normalize_poly(f: LinPoly) -> LinPoly:
    """Scale f so its first nonzero coefficient (x_1, ..., x_n, then constant) is 1."""
    for c in f.coeffs:
        if c:
            return f / c
    if f.const:
        return f / f.const
    raise ZeroPolynomial("the zero polynomial does not define a hyperplane")


def normalize_hyperplane(f: LinPoly, label: str = "") -> Hyperplane:
    p = normalize_poly(f)
    if p.is_constant():
        raise ZeroPolynomial("a nonzero constant does not define a hyperplane")
    return Hyperplane(p, label)


def shifted_pole(H: Hyperplane | LinPoly, x: int) -> LinPoly:
    """a_H = x - f_H/(f_H)_x, a polynomial with zero x-coefficient."""
    f = H.poly if isinstance(H, Hyperplane) else H
    d = f.coeffs[x]
    if not d:
        raise NotInDirection(f"{f} does not depend on variable {x}")
    return LinPoly.var(f.n, x) - f / d


def cross_pole(H: Hyperplane, H2: Hyperplane, x: int, y: int) -> Optional[LinPoly]:
    """c_{HH'} with a_H - a_H' = (a_H - a_H')_y (y - c_{HH'}), or None if that y-derivative is 0."""
    if x == y:
        raise ValueError("directions x and y must differ")
    d = shifted_pole(H, x) - shifted_pole(H2, x)
    dy = d.coeffs[y]
    if not dy:
        return None
    return LinPoly.var(d.n, y) - d / dy


def plane_key(H: Hyperplane | LinPoly, x: Optional[int] = None) -> tuple:
    """Canonical sort key: planes through direction x first (constant poles, then mixed),
    then the rest ordered by their leading variable and pole there."""
    f = H.poly if isinstance(H, Hyperplane) else H
    if x is not None and f.coeffs[x]:
        return (0, 0, shifted_pole(f, x).sort_key())
    v = next(i for i, c in enumerate(f.coeffs) if c)
    return (1, v, shifted_pole(f, v).sort_key())


@dataclass(frozen=True)
class Arrangement:
    n: int
    planes: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "planes", tuple(self.planes))

    def labels(self) -> list:
        return [H.label for H in self.planes]

    def by_label(self, label: str) -> Hyperplane:
        for H in self.planes:
            if H.label == label:
                return H
        raise KeyError(label)

    def find(self, poly: LinPoly) -> Optional[Hyperplane]:
        p = normalize_poly(poly)
        for H in self.planes:
            if H.poly == p:
                return H
        return None

    def direction_set(self, x: int) -> list:
        return direction_set(self, x)

    def to_json(self) -> dict:
        return {"n": self.n, "planes": [H.to_json() for H in self.planes]}

    @classmethod
    def from_json(cls, doc, path: str = "arrangement") -> "Arrangement":
        if not isinstance(doc, dict) or "n" not in doc or "planes" not in doc:
            raise ParseError(f"{path}: expected object with 'n' and 'planes'")
        n = doc["n"]
        if not isinstance(n, int) or n < 1:
            raise ParseError(f"{path}.n: expected positive integer")
        if not isinstance(doc["planes"], list):
            raise ParseError(f"{path}.planes: expected list")
        planes = []
        for k, pd in enumerate(doc["planes"]):
            p = f"{path}.planes[{k}]"
            if not isinstance(pd, dict) or "poly" not in pd or "label" not in pd:
                raise ParseError(f"{p}: expected object with 'label' and 'poly'")
            poly = LinPoly.from_json(pd["poly"], f"{p}.poly")
            if poly.n != n:
                raise ParseError(f"{p}.poly: expected {n} coefficients")
            if not isinstance(pd["label"], str):
                raise ParseError(f"{p}.label: expected string")
            if any(H.label == pd["label"] for H in planes):
                raise ParseError(f"{p}.label: {pd['label']!r} used twice")
            planes.append(Hyperplane(poly, pd["label"]))
        return cls(n, tuple(planes))


def direction_set(A: Arrangement, x: int) -> list:
    """Planes whose polynomial depends on x, in arrangement order."""
    return [H for H in A.planes if H.poly.coeffs[x]]


def canonical_direction_order(planes: Iterable[Hyperplane], x: int) -> list:
    return sorted(planes, key=lambda H: plane_key(H, x))


def cross_set(A: Arrangement, H: Hyperplane, x: int, y: int) -> list:
    """C_{H,y}: planes H' of A_x with (a_H - a_H')_y != 0."""
    return [H2 for H2 in direction_set(A, x)
            if H2.poly != H.poly and cross_pole(H, H2, x, y) is not None]
