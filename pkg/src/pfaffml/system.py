"""The Pfaffian system data model.

A system of rank N in n variables is the 1-form

    Omega = sum_i S_i(x) dx_i + sum_H A_H dlog f_H,
    S_i(x) = A_i + sum_{j != i} A_ij x_j,   A_ij = A_ji,

stored as constant matrices plus a residue per hyperplane.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .arrangement import (Arrangement, Hyperplane, canonical_direction_order, direction_set,
                          normalize_poly, plane_key, shifted_pole)
from .errors import (InvalidSystem, NotSimultaneouslyDiagonalizable, ParseError,
                     ZeroPolynomial)
from .exact import MAX_VARS, ZERO, LinPoly, Q, default_names
from .linalg import Matrix, eigenspace, inverse, rational_eigenvalues, solve_left


@dataclass(frozen=True, eq=True)
class PfaffianSystem:
    n: int
    N: int
    A_lin: tuple
    A_quad: Mapping = field(default_factory=dict)
    arrangement: Arrangement = None
    residues: Mapping = field(default_factory=dict)
    vars: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "A_lin", tuple(self.A_lin))
        if self.arrangement is None:
            object.__setattr__(self, "arrangement", Arrangement(self.n, ()))
        if not self.vars:
            object.__setattr__(self, "vars", default_names(self.n))
        object.__setattr__(self, "vars", tuple(self.vars))

    # -- accessors
    def quad(self, i: int, j: int) -> Matrix:
        m = self.A_quad.get((i, j))
        if m is None:
            m = self.A_quad.get((j, i))
        return m if m is not None else Matrix.zeros(self.N)

    def has_quad(self, i: int) -> bool:
        return any(not self.quad(i, j).is_zero() for j in range(self.n) if j != i)

    @property
    def planes(self) -> tuple:
        return self.arrangement.planes

    def residue(self, H: Hyperplane | str) -> Matrix:
        label = H.label if isinstance(H, Hyperplane) else H
        return self.residues[label]

    def residue_at(self, poly: LinPoly) -> Optional[Matrix]:
        H = self.arrangement.find(poly)
        return None if H is None else self.residues[H.label]

    def direction_set(self, x: int) -> list:
        return direction_set(self.arrangement, x)

    def canonical_direction_set(self, x: int) -> list:
        return canonical_direction_order(self.direction_set(x), x)

    def var_index(self, name) -> int:
        if isinstance(name, int):
            if not 0 <= name < self.n:
                raise IndexError(f"variable index {name} out of range")
            return name
        if name in self.vars:
            return self.vars.index(name)
        raise KeyError(f"unknown variable {name!r}")

    def linear_part(self, x: int) -> tuple:
        return self.A_lin[x], {z: self.quad(x, z) for z in range(self.n) if z != x}

    def matrices(self) -> list:
        """Every stored coefficient matrix, in a fixed order."""
        out = list(self.A_lin)
        out += [self.quad(i, j) for i in range(self.n) for j in range(i + 1, self.n)]
        out += [self.residues[H.label] for H in self.planes]
        return out

    def map_matrices(self, fn) -> "PfaffianSystem":
        return PfaffianSystem(
            self.n, self.N,
            tuple(fn(m) for m in self.A_lin),
            {k: fn(m) for k, m in self.A_quad.items()},
            self.arrangement,
            {k: fn(m) for k, m in self.residues.items()},
            self.vars,
        )

    def conjugate(self, P: Matrix, Pinv: Matrix | None = None) -> "PfaffianSystem":
        """P^-1 Omega P."""
        Pinv = inverse(P) if Pinv is None else Pinv
        return self.map_matrices(lambda m: Pinv @ m @ P)

    def coefficient_at(self, i: int, point: Sequence) -> Matrix:
        """The x_i-coefficient of Omega evaluated at a rational point off the singular locus."""
        pt = [Q(p) for p in point]
        M = self.A_lin[i]
        for j in range(self.n):
            if j != i and pt[j]:
                M = M + self.quad(i, j).scale(pt[j])
        for H in self.planes:
            d = H.poly.coeffs[i]
            if d:
                val = H.poly.eval(pt)
                if not val:
                    raise ZeroDivisionError("point lies on a singular hyperplane")
                M = M + self.residues[H.label].scale(d / val)
        return M

    def residue_map(self) -> dict:
        """Residues keyed by normalized polynomial."""
        return {normalize_poly(H.poly): self.residues[H.label] for H in self.planes}

    def to_json(self) -> dict:
        return save(self)


@dataclass(frozen=True)
class SpectralBlocks:
    direction: int
    branches: tuple   # ((LinPoly, multiplicity), ...)
    gauge: Matrix

    @property
    def sizes(self) -> list:
        return [m for _, m in self.branches]

    def offsets(self) -> list:
        out, o = [], 0
        for _, m in self.branches:
            out.append(o)
            o += m
        return out


# ------------------------------------------------------------------ building

def make_system(n: int, N: int, A_lin: Sequence | None = None, A_quad: Mapping | None = None,
                residues: Iterable = (), vars: Sequence = (), direction: int | None = None,
                relabel: bool = True) -> PfaffianSystem:
    """Assemble a well-formed system.

    Residues are given as (polynomial or Hyperplane, matrix) pairs. Planes are
    normalized, coincident planes have their residues summed, zero residues are
    dropped and, with relabel, labels become H1, H2, ... in canonical order with
    respect to ``direction``.
    """
    if A_lin is None:
        A_lin = [Matrix.zeros(N)] * n
    quad = {}
    for (i, j), m in (A_quad or {}).items():
        if i == j:
            raise InvalidSystem("diagonal A_quad entries are not allowed")
        key = (min(i, j), max(i, j))
        if key in quad:
            if quad[key] != m:
                raise InvalidSystem(f"A_quad{key} given twice with different values")
            continue
        if not m.is_zero():
            quad[key] = m
    acc: dict = {}
    given_labels: dict = {}
    order: list = []
    for H, m in residues:
        poly = H.poly if isinstance(H, Hyperplane) else H
        p = normalize_poly(poly)
        if p.is_constant():
            raise ZeroPolynomial("constant polynomial is not a hyperplane")
        if p in acc:
            acc[p] = acc[p] + m
        else:
            acc[p] = m
            order.append(p)
            if isinstance(H, Hyperplane) and H.label:
                given_labels[p] = H.label
    kept = [p for p in order if not acc[p].is_zero()]
    if relabel:
        kept.sort(key=lambda p: plane_key(p, direction))
        labels = [f"H{k + 1}" for k in range(len(kept))]
    else:
        labels = [given_labels.get(p, f"H{k + 1}") for k, p in enumerate(kept)]
        if len(set(labels)) != len(labels):
            raise InvalidSystem("duplicate plane labels")
    planes = tuple(Hyperplane(p, lab) for p, lab in zip(kept, labels))
    res = {lab: acc[p] for p, lab in zip(kept, labels)}
    return PfaffianSystem(n, N, tuple(A_lin), quad, Arrangement(n, planes), res, tuple(vars))


def relabel(sys: PfaffianSystem, direction: int | None = None) -> PfaffianSystem:
    return make_system(sys.n, sys.N, sys.A_lin, sys.A_quad,
                       [(H, sys.residues[H.label]) for H in sys.planes], sys.vars, direction)


def same_system(a: PfaffianSystem, b: PfaffianSystem) -> bool:
    """Equality of the 1-forms, ignoring plane labels."""
    if (a.n, a.N) != (b.n, b.N) or a.A_lin != b.A_lin:
        return False
    for i in range(a.n):
        for j in range(i + 1, a.n):
            if a.quad(i, j) != b.quad(i, j):
                return False
    return _nonzero(a.residue_map()) == _nonzero(b.residue_map())


def _nonzero(d: dict) -> dict:
    return {k: v for k, v in d.items() if not v.is_zero()}


# ------------------------------------------------------------------ validation

def validate(sys: PfaffianSystem) -> list:
    """List of violations of the data-model rules; empty when well-formed."""
    out = []
    n, N = sys.n, sys.N
    if not isinstance(n, int) or n < 1 or n > MAX_VARS:
        out.append(f"shape: n={n} must be in 1..{MAX_VARS}")
        return out
    if not isinstance(N, int) or N < 1:
        out.append(f"shape: N={N} must be positive")
        return out
    if len(sys.A_lin) != n:
        out.append(f"shape: A_lin has {len(sys.A_lin)} entries, expected {n}")
    for i, m in enumerate(sys.A_lin):
        if m.shape != (N, N):
            out.append(f"shape: A_lin[{i}] is {m.shape[0]}x{m.shape[1]}, expected {N}x{N}")
    for (i, j), m in sys.A_quad.items():
        if not (0 <= i < n and 0 <= j < n) or i == j:
            out.append(f"shape: A_quad index ({i},{j}) invalid")
            continue
        if m.shape != (N, N):
            out.append(f"shape: A_quad({i},{j}) is {m.shape[0]}x{m.shape[1]}, expected {N}x{N}")
        other = sys.A_quad.get((j, i))
        if other is not None and i < j and other != m:
            out.append(f"symmetry: A_quad({i},{j}) != A_quad({j},{i})")
    if len(sys.vars) != n:
        out.append(f"shape: {len(sys.vars)} variable names for n={n}")
    if sys.arrangement.n != n:
        out.append(f"shape: arrangement has n={sys.arrangement.n}, expected {n}")
    seen_poly: dict = {}
    seen_label = set()
    for H in sys.planes:
        if H.poly.n != n:
            out.append(f"shape: plane {H.label} has {H.poly.n} coefficients, expected {n}")
            continue
        if H.poly.is_constant():
            out.append(f"shape: plane {H.label} has a constant polynomial")
            continue
        p = normalize_poly(H.poly)
        if p != H.poly:
            out.append(f"normalization: plane {H.label} is not normalized")
        if p in seen_poly:
            out.append(f"dedup: planes {seen_poly[p]} and {H.label} coincide")
        else:
            seen_poly[p] = H.label
        if H.label in seen_label:
            out.append(f"dedup: label {H.label} used twice")
        seen_label.add(H.label)
        if H.label not in sys.residues:
            out.append(f"residue: plane {H.label} has no residue")
            continue
        m = sys.residues[H.label]
        if m.shape != (N, N):
            out.append(f"shape: residue {H.label} is {m.shape[0]}x{m.shape[1]}, expected {N}x{N}")
        elif m.is_zero():
            out.append(f"zero-residue: plane {H.label} has a zero residue")
    for lab in sys.residues:
        if lab not in seen_label:
            out.append(f"residue: residue {lab} has no plane")
    return out


def require_valid(sys: PfaffianSystem):
    errs = validate(sys)
    if errs:
        raise InvalidSystem("; ".join(errs))


def coefficient_numerators(sys: PfaffianSystem, i: int):
    """The x_i coefficient as S_i plus terms A_H / (x_i - a_H).

    Returns ((A_i, {j: A_ij}), [(x_i - a_H, A_H), ...]).
    """
    lin = sys.linear_part(i)
    terms = []
    for H in sys.planes:
        if H.poly.coeffs[i]:
            pole = LinPoly.var(sys.n, i) - shifted_pole(H, i)
            terms.append((pole, sys.residues[H.label]))
    return lin, terms


# ------------------------------------------------------------------ spectral form

def joint_eigenspaces(mats: Sequence[Matrix], N: int) -> list:
    """Common eigenspaces of a commuting diagonalizable family over Q.

    Returns [(eigenvalue tuple, [basis vectors]), ...].
    """
    I = Matrix.identity(N)
    spaces = [((), list(I.columns()))]
    for idx, M in enumerate(mats):
        if M.is_zero():
            spaces = [(vals + (ZERO,), V) for vals, V in spaces]
            continue
        new = []
        for vals, V in spaces:
            Vm = Matrix.from_columns(V, N)
            R = solve_left(Vm, M @ Vm)
            if R is None:
                raise NotSimultaneouslyDiagonalizable(
                    f"matrix #{idx} does not preserve the eigenspaces of the earlier ones")
            for lam, mult in rational_eigenvalues(R):
                E = eigenspace(R, lam)
                if E.dim != mult:
                    raise NotSimultaneouslyDiagonalizable(
                        f"matrix #{idx} is not diagonalizable (eigenvalue {lam})")
                new.append((vals + (lam,), [Vm.apply(e) for e in E.basis]))
        spaces = new
    return spaces


def spectral_blocks(sys: PfaffianSystem, x: int) -> SpectralBlocks:
    others = [z for z in range(sys.n) if z != x]
    mats = [sys.A_lin[x]] + [sys.quad(x, z) for z in others]
    spaces = joint_eigenspaces(mats, sys.N)
    branches = []
    for vals, V in spaces:
        terms = {z: vals[k + 1] for k, z in enumerate(others)}
        branches.append((LinPoly.from_terms(sys.n, terms, vals[0]), V))
    branches.sort(key=lambda b: b[0].sort_key())
    cols = [v for _, V in branches for v in V]
    P = Matrix.from_columns(cols, sys.N)
    return SpectralBlocks(x, tuple((a, len(V)) for a, V in branches), P)


def normalize_S(sys: PfaffianSystem, x: int):
    """Conjugate so S_x is block diagonal with sorted spectral branches.

    Returns (P^-1 sys P, blocks); blocks.gauge is P.
    """
    blocks = spectral_blocks(sys, x)
    P = blocks.gauge
    if P == Matrix.identity(sys.N):
        return sys, blocks
    return sys.conjugate(P), blocks


# ------------------------------------------------------------------ persistence

def save(sys: PfaffianSystem) -> dict:
    quad = []
    for i in range(sys.n):
        for j in range(i + 1, sys.n):
            m = sys.quad(i, j)
            if not m.is_zero():
                quad.append({"i": i, "j": j, "mat": m.to_json()})
    doc = {
        "n": sys.n,
        "N": sys.N,
        "vars": list(sys.vars),
        "A_lin": [m.to_json() for m in sys.A_lin],
        "A_quad": quad,
        "arrangement": sys.arrangement.to_json(),
        "residues": {H.label: sys.residues[H.label].to_json() for H in sys.planes},
    }
    return doc


def dumps(sys: PfaffianSystem) -> str:
    return json.dumps(save(sys), indent=1)


def load(doc) -> PfaffianSystem:
    """Parse a JSON document (dict or string) into a system. Raises ParseError."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise ParseError("document: expected a JSON object")
    for key in ("n", "N", "A_lin", "arrangement", "residues"):
        if key not in doc:
            raise ParseError(f"{key}: missing field")
    n, N = doc["n"], doc["N"]
    if not isinstance(n, int) or isinstance(n, bool) or not 1 <= n <= MAX_VARS:
        raise ParseError(f"n: expected integer in 1..{MAX_VARS}")
    if not isinstance(N, int) or isinstance(N, bool) or N < 1:
        raise ParseError("N: expected positive integer")
    if not isinstance(doc["A_lin"], list) or len(doc["A_lin"]) != n:
        raise ParseError(f"A_lin: expected list of {n} matrices")
    A_lin = tuple(Matrix.from_json(m, f"A_lin[{k}]", (N, N)) for k, m in enumerate(doc["A_lin"]))
    quad = {}
    qdoc = doc.get("A_quad", [])
    if not isinstance(qdoc, list):
        raise ParseError("A_quad: expected list")
    for k, e in enumerate(qdoc):
        p = f"A_quad[{k}]"
        if not isinstance(e, dict) or not {"i", "j", "mat"} <= set(e):
            raise ParseError(f"{p}: expected object with i, j, mat")
        i, j = e["i"], e["j"]
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in (i, j)) \
                or not (0 <= i < n and 0 <= j < n) or i == j:
            raise ParseError(f"{p}: invalid index pair ({i}, {j})")
        if (i, j) in quad:
            raise ParseError(f"{p}: pair ({i}, {j}) listed twice")
        quad[(i, j)] = Matrix.from_json(e["mat"], f"{p}.mat", (N, N))
    arr = Arrangement.from_json(doc["arrangement"])
    if arr.n != n:
        raise ParseError("arrangement.n: does not match n")
    rdoc = doc["residues"]
    if not isinstance(rdoc, dict):
        raise ParseError("residues: expected object")
    residues = {}
    for H in arr.planes:
        if H.label not in rdoc:
            raise ParseError(f"residues.{H.label}: missing residue for plane")
        residues[H.label] = Matrix.from_json(rdoc[H.label], f"residues.{H.label}", (N, N))
    for lab in rdoc:
        if lab not in residues:
            raise ParseError(f"residues.{lab}: no plane with this label")
    names = doc.get("vars") or default_names(n)
    if not isinstance(names, list | tuple) or len(names) != n or \
            not all(isinstance(v, str) for v in names):
        raise ParseError(f"vars: expected {n} strings")
    return PfaffianSystem(n, N, A_lin, quad, arr, residues, tuple(names))


def loads(text: str) -> PfaffianSystem:
    return load(text)


def load_file(path) -> PfaffianSystem:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ParseError(f"{path}: {e.strerror}") from None
    return load(text)


def save_file(sys: PfaffianSystem, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(sys))
        fh.write("\n")


def inf_violation(sys: PfaffianSystem, x: int) -> Optional[str]:
    """Message if some A_x plane also depends on another variable while an A_xz is nonzero."""
    Ax = sys.direction_set(x)
    shared = [z for z in range(sys.n) if z != x and any(H.poly.coeffs[z] for H in Ax)]
    nonzero = [z for z in range(sys.n) if z != x and not sys.quad(x, z).is_zero()]
    if shared and nonzero:
        return (f"planes of direction {sys.vars[x]} also depend on "
                f"{', '.join(sys.vars[z] for z in shared)} while A_{sys.vars[x]}"
                f"{sys.vars[nonzero[0]]} is nonzero")
    return None
