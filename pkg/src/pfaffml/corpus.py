"""Built-in example systems with known closed-form matrices.

Parameters alpha1..alpha4 and beta are instantiated to exact rationals; the
defaults are alpha = (1/2, 1/3, 1/5, 1/11) and beta = 1/7.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional

from .errors import MissingParameter, UnknownFixture
from .exact import LinPoly, Q
from .linalg import Matrix
from .arrangement import Hyperplane
from .system import PfaffianSystem, make_system, save_file

DEFAULTS = {"alpha1": Q("1/2"), "alpha2": Q("1/3"), "alpha3": Q("1/5"),
            "alpha4": Q("1/11"), "beta": Q("1/7")}


@dataclass(frozen=True)
class Fixture:
    name: str
    system: PfaffianSystem
    provenance: str
    parameters: dict = field(default_factory=dict)
    irreducible_in: tuple = ()      # directions in which the system is known irreducible


def _x(n=2):
    return LinPoly.var(n, 0)


def _y(n=2):
    return LinPoly.var(n, 1)


def _sys(n, N, A_lin, A_quad, planes, direction=0):
    res = [(Hyperplane(poly, lab), m) for lab, poly, m in planes]
    return make_system(n, N, A_lin, A_quad, res, direction=direction, relabel=False)


def _arr3d(p):
    n = 3
    x1, x2, x3 = (LinPoly.var(n, i) for i in range(n))
    one = lambda v: Matrix([[v]])
    planes = [("H1", x1, one(p["alpha1"])),
              ("H2", x1 - x2, one(p["alpha2"])),
              ("H3", 2 * x1 + x2 + 3 * x3, one(p["alpha3"])),
              ("H4", x3 - 1, one(p["alpha4"]))]
    return _sys(n, 1, None, {}, planes)


def _rank1(p):
    x, y = _x(), _y()
    one = lambda v: Matrix([[v]])
    planes = [("H1", x, one(p["alpha1"])),
              ("H2", x - 1, one(p["alpha2"])),
              ("H3", x - y, one(p["alpha3"]))]
    return _sys(2, 1, None, {}, planes)


def _phi1_parts(p):
    a1, a2, a3 = p["alpha1"], p["alpha2"], p["alpha3"]
    Bx = Matrix.diag([0, -1, 0])
    Bxy = Matrix.diag([0, 0, -1])
    BH1 = Matrix([[-a1, -a2, -a3]] * 3)
    BH13 = Matrix([[a3, 0, -a3], [0, 0, 0], [-a1, 0, a1]])
    BH23 = Matrix([[0, 0, 0], [0, a3, -a3], [0, -a2, a2]])
    return Bx, Bxy, BH1, BH13, BH23


def _phi1(p):
    Bx, Bxy, BH1, BH13, BH23 = _phi1_parts(p)
    x, y = _x(), _y()
    planes = [("H1", x, BH1), ("H13", y, BH13), ("H23", y - 1, BH23)]
    return _sys(2, 3, [Bx, Matrix.zeros(3)], {(0, 1): Bxy}, planes)


def _f1(p):
    a1, a2, a3, b = p["alpha1"], p["alpha2"], p["alpha3"], p["beta"]
    _, _, _, BH13, BH23 = _phi1_parts(p)
    z = [0, 0, 0]
    C1 = Matrix([[a1 + b, a2, a3], z, z])
    C2 = Matrix([z, [a1, a2 + b, a3], z])
    C3 = Matrix([z, z, [a1, a2, a3 + b]])
    x, y = _x(), _y()
    planes = [("H1", x, C1), ("H2", x - 1, C2), ("H3", x - y, C3),
              ("H13", y, BH13), ("H23", y - 1, BH23)]
    return _sys(2, 3, None, {}, planes)


def _cf4_six(p):
    a1, a2, a3 = p["alpha1"], p["alpha2"], p["alpha3"]
    _, _, BH1, _, _ = _phi1_parts(p)
    from .linalg import block_diag
    Cx = Matrix.diag([0, -1, 0, 0, -1, -1])
    Cy = Matrix.diag([0, 0, 0, 1, 1, 1])
    CH1 = block_diag([BH1, BH1])
    z6 = [0] * 6
    # rows 3 and 6 are -E_{N_2}(B_H13 - a1 - a3 | B_H23 - a2 - a3)
    r3 = [a1, 0, a3, 0, a2, a3]
    CH3 = Matrix([z6, z6, r3, z6, z6, r3])
    r1 = [a1, 0, a3, a2 + a3, 0, 0]
    r2 = [0, a1 + a3, 0, 0, a2, a3]
    CH13 = Matrix([r1, r2, z6, r1, r2, z6])
    x, y = _x(), _y()
    planes = [("H1", x, CH1), ("H3", x - y, CH3), ("H13", y, CH13)]
    return _sys(2, 6, [Cx, Cy], {}, planes, direction=1)


def cf4_printed_gauge(params: Optional[Mapping] = None) -> Matrix:
    """The 6x6 change of basis whose first two columns span the y-kernel space of cf4-six."""
    p = _params(params, ("alpha1", "alpha2", "alpha3"))
    a1, a2, a3 = p["alpha1"], p["alpha2"], p["alpha3"]
    return Matrix([[-a3, 0, 0, 0, 0, 0],
                   [0, 0, 0, 0, a3, 0],
                   [a1, 0, 0, 0, 0, 1],
                   [0, 0, 0, a3, 0, 0],
                   [0, -a3, 0, 0, 0, 0],
                   [0, a2, 1, 0, 0, 0]])


def cf4_kernel_vectors(params: Optional[Mapping] = None) -> list:
    p = _params(params, ("alpha1", "alpha2", "alpha3"))
    a1, a2, a3 = p["alpha1"], p["alpha2"], p["alpha3"]
    return [[-a3, 0, a1, 0, 0, 0], [0, 0, 0, 0, -a3, a2]]


def _cf4_bar(p):
    a1, a2, a3 = p["alpha1"], p["alpha2"], p["alpha3"]
    Cx = Matrix.diag([-1, 0, -1, 0])
    Cy = Matrix.diag([1, 1, 0, 0])
    CH1 = Matrix([[-a2 - a3, -a1 * (a2 + a3), 0, 0],
                  [-1, -a1, 0, 0],
                  [0, 0, -a2, -1],
                  [0, 0, -a2 * (a1 + a3), -a1 - a3]])
    CH3 = Matrix([[a3, 0, 0, a3], [0] * 4, [0] * 4, [a3, 0, 0, a3]])
    CH13 = Matrix([[a2, 0, a2 * (a1 + a3), 0],
                   [0, a2 + a3, 0, 1],
                   [1, 0, a1 + a3, 0],
                   [0, a1 * (a2 + a3), 0, a1]])
    x, y = _x(), _y()
    planes = [("H1", x, CH1), ("H3", x - y, CH3), ("H13", y, CH13)]
    return _sys(2, 4, [Cx, Cy], {}, planes, direction=1)


_REGISTRY = {
    "arr3d-example": (_arr3d, ("alpha1", "alpha2", "alpha3", "alpha4"),
                      "rank-1 system on the arrangement x1, x1-x2, 2x1+x2+3x3, x3-1", (0, 1, 2)),
    "rank1": (_rank1, ("alpha1", "alpha2", "alpha3"),
              "rank-1 system with poles x, x-1, x-y", (0, 1)),
    "phi1": (_phi1, ("alpha1", "alpha2", "alpha3"),
             "Humbert Phi_1 system: middle Laplace transform of rank1 in x", (0,)),
    "f1": (_f1, ("alpha1", "alpha2", "alpha3", "beta"),
           "Appell F_1 system: middle convolution of rank1 in x with parameter beta", (0,)),
    "cf4-six": (_cf4_six, ("alpha1", "alpha2", "alpha3"),
                "inverse Laplace transform in y of phi1 after the y-addition "
                "(-alpha1-alpha3, -alpha2-alpha3), before projection", ()),
    "cf4-bar": (_cf4_bar, ("alpha1", "alpha2", "alpha3"),
                "confluent F_4 system: projection of cf4-six to its rank-4 quotient", ()),
}


def names() -> list:
    return list(_REGISTRY)


def _params(params: Optional[Mapping], needed) -> dict:
    if params is None:
        return {k: DEFAULTS[k] for k in needed}
    out = {}
    for k in needed:
        if k not in params:
            raise MissingParameter(f"parameter {k!r} is required")
        out[k] = Q(params[k])
    return out


def builtin(name: str, params: Optional[Mapping] = None) -> Fixture:
    """Instantiate a fixture. Without params the defaults are used."""
    if name not in _REGISTRY:
        raise UnknownFixture(f"unknown fixture {name!r}; known: {', '.join(_REGISTRY)}")
    build, needed, prov, irr = _REGISTRY[name]
    p = _params(params, needed)
    return Fixture(name, build(p), prov, p, irr)


def emit(directory, params: Optional[Mapping] = None) -> list:
    """Write every fixture as <name>.json into directory; returns the paths."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    paths = []
    for name in _REGISTRY:
        fx = builtin(name, params)
        path = d / f"{name}.json"
        save_file(fx.system, path)
        paths.append(path)
    return paths
