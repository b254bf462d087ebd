"""Laplace-type transforms of Pfaffian systems in a chosen direction x.

Every transform first lifts the x-equation to Birkhoff-Okubo form on the
extended vector U = (U_1, ..., U_q), one block per plane of A_x in canonical
order, and then either keeps that form (bo_extend) or applies the formal
Laplace substitution (laplace / inverse_laplace). The middle versions finish
by passing to the quotient by the kernel space sum_i ker A_{H_i}.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .arrangement import Arrangement, Hyperplane, normalize_poly, shifted_pole
from .errors import (AssumptionViolation, BranchKeyMismatch, EmptyDirection, NotFuchsian,
                     UnknownLabel)
from .exact import ZERO, LinPoly, Q
from .linalg import (Matrix, Subspace, block_diag, direct_sum, from_blocks, kernel_basis,
                     quotient_action, repeat_diag)
from .system import (PfaffianSystem, SpectralBlocks, inf_violation, make_system, normalize_S)


@dataclass
class TransformOutput:
    system: PfaffianSystem
    projection: Optional[Matrix] = None
    extension: Optional[dict] = None
    kernel: Optional[Subspace] = None
    gauge: Optional[Matrix] = None           # normalization gauge applied to the input
    blocks: Optional[SpectralBlocks] = None
    unprojected: Optional[PfaffianSystem] = None
    normalized_input: Optional[PfaffianSystem] = None
    stages: dict = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return self.system.N


# ------------------------------------------------------------------ helpers

def _require_direction(sys: PfaffianSystem, x: int) -> list:
    planes = sys.canonical_direction_set(x)
    if not planes:
        raise EmptyDirection(f"no plane depends on {sys.vars[x]}")
    return planes


def _require_inf(sys: PfaffianSystem, x: int):
    msg = inf_violation(sys, x)
    if msg:
        raise AssumptionViolation(msg)


def _block_row(i: int, q: int, row_blocks: Sequence[Matrix], N: int) -> Matrix:
    grid = [[row_blocks[j] if r == i else None for j in range(q)] for r in range(q)]
    return from_blocks(grid, [N] * q, [N] * q)


def _pair_residues(a: Sequence[LinPoly], A: Sequence[Matrix], N: int) -> list:
    """Residues on the planes a_i - a_j = 0 coupling blocks i and j."""
    q = len(a)
    out = []
    for i in range(q):
        for j in range(i + 1, q):
            d = a[i] - a[j]
            if d.is_constant():
                continue
            grid = [[None] * q for _ in range(q)]
            grid[i][i] = A[j]
            grid[i][j] = -A[j]
            grid[j][j] = A[i]
            grid[j][i] = -A[i]
            out.append((d, from_blocks(grid, [N] * q, [N] * q)))
    return out


def _extension_record(planes: Sequence[Hyperplane], a: Sequence[LinPoly], names) -> dict:
    return {"blocks": [{"block": k, "plane": H.label, "pole": a[k].pretty(names)}
                       for k, H in enumerate(planes)]}


def _e_block(N: int, off: int, size: int) -> Matrix:
    vals = [1 if off <= k < off + size else 0 for k in range(N)]
    return Matrix.diag(vals)


# ------------------------------------------------------------------ extension

def bo_extend(sys: PfaffianSystem, x: int) -> TransformOutput:
    """Birkhoff-Okubo extension of rank qN in direction x."""
    _require_inf(sys, x)
    planes = _require_direction(sys, x)
    q, N, n = len(planes), sys.N, sys.n
    a = [shifted_pole(H, x) for H in planes]
    A = [sys.residues[H.label] for H in planes]
    I = Matrix.identity(N)
    A_lin = [repeat_diag(m, q) for m in sys.A_lin]
    A_quad = {k: repeat_diag(m, q) for k, m in sys.A_quad.items()}
    residues = []
    for i, H in enumerate(planes):
        row = [A[j] - I if j == i else A[j] for j in range(q)]
        residues.append((H.poly, _block_row(i, q, row, N)))
    inx = {H.poly for H in planes}
    for H in sys.planes:
        if H.poly not in inx:
            residues.append((H.poly, repeat_diag(sys.residues[H.label], q)))
    residues += _pair_residues(a, A, N)
    out = make_system(n, q * N, A_lin, A_quad, residues, sys.vars, direction=x)
    return TransformOutput(out, extension=_extension_record(planes, a, sys.vars),
                           normalized_input=sys)


def _laplace(sys: PfaffianSystem, x: int, inverse: bool) -> TransformOutput:
    _require_inf(sys, x)
    _require_direction(sys, x)
    sysn, blocks = normalize_S(sys, x)
    planes = sysn.canonical_direction_set(x)
    q, N, n = len(planes), sys.N, sys.n
    a = [shifted_pole(H, x) for H in planes]
    A = [sysn.residues[H.label] for H in planes]
    sign = 1 if inverse else -1
    A_lin = [None] * n
    A_quad = {}
    A_lin[x] = block_diag([Matrix.scalar(N, sign * ai.const) for ai in a])
    for z in range(n):
        if z == x:
            continue
        A_quad[(x, z)] = block_diag([Matrix.scalar(N, sign * ai.coeffs[z]) for ai in a])
    Ax = sysn.A_lin[x]
    for y in range(n):
        if y == x:
            continue
        Ayx = sysn.quad(y, x)
        diag = []
        for ai in a:
            M = sysn.A_lin[y]
            if ai.coeffs[y]:
                M = M + Ax.scale(ai.coeffs[y])
            if not Ayx.is_zero():
                if not ai.is_constant():
                    raise AssumptionViolation(
                        f"nonconstant pole {ai} in direction {sys.vars[x]} with "
                        f"A_{sys.vars[y]}{sys.vars[x]} nonzero")
                M = M + Ayx.scale(ai.const)
            diag.append(M)
        A_lin[y] = block_diag(diag)
        for z in range(y + 1, n):
            if z != x:
                m = sysn.quad(y, z)
                if not m.is_zero():
                    A_quad[(y, z)] = repeat_diag(m, q)
    residues = []
    X = LinPoly.var(n, x)
    for (ahat, size), off in zip(blocks.branches, blocks.offsets()):
        E = _e_block(N, off, size)
        row = [-(E @ Aj) for Aj in A]
        B = from_blocks([row] * q, [N] * q, [N] * q)
        pole = X + ahat if inverse else X - ahat
        residues.append((pole, B))
    inx = {H.poly for H in planes}
    for H in sysn.planes:
        if H.poly not in inx:
            residues.append((H.poly, repeat_diag(sysn.residues[H.label], q)))
    residues += _pair_residues(a, A, N)
    out = make_system(n, q * N, A_lin, A_quad, residues, sys.vars, direction=x)
    return TransformOutput(out, extension=_extension_record(planes, a, sys.vars),
                           gauge=blocks.gauge, blocks=blocks, normalized_input=sysn)


def laplace(sys: PfaffianSystem, x: int) -> TransformOutput:
    """Laplace transform in direction x (before projection)."""
    return _laplace(sys, x, inverse=False)


def inverse_laplace(sys: PfaffianSystem, x: int) -> TransformOutput:
    """Inverse Laplace transform in direction x (before projection)."""
    return _laplace(sys, x, inverse=True)


def kernel_space(sys: PfaffianSystem, x: int) -> Subspace:
    """Direct sum of ker A_H over the planes of direction x, in canonical order."""
    planes = _require_direction(sys, x)
    return direct_sum([kernel_basis(sys.residues[H.label]) for H in planes])


def quotient_system(sys: PfaffianSystem, K: Subspace, direction: int | None = None):
    """Induced system on Q^N / K. Returns (system, P, Q)."""
    mats = sys.matrices()
    bars, P, Qm = quotient_action(mats, K)
    n = sys.n
    it = iter(bars)
    A_lin = [next(it) for _ in range(n)]
    A_quad = {}
    for i in range(n):
        for j in range(i + 1, n):
            A_quad[(i, j)] = next(it)
    residues = [(H.poly, next(it)) for H in sys.planes]
    out = make_system(n, sys.N - K.dim, A_lin, A_quad, residues, sys.vars, direction=direction)
    return out, P, Qm


def _middle(sys: PfaffianSystem, x: int, inverse: bool) -> TransformOutput:
    lap = _laplace(sys, x, inverse)
    K = kernel_space(lap.normalized_input, x)
    bar, P, Qm = quotient_system(lap.system, K, x)
    return TransformOutput(bar, projection=Qm, extension=lap.extension, kernel=K,
                           gauge=lap.gauge, blocks=lap.blocks, unprojected=lap.system,
                           normalized_input=lap.normalized_input)


def middle_laplace(sys: PfaffianSystem, x: int) -> TransformOutput:
    return _middle(sys, x, inverse=False)


def inverse_middle_laplace(sys: PfaffianSystem, x: int) -> TransformOutput:
    return _middle(sys, x, inverse=True)


# ------------------------------------------------------------------ addition and mc

def _resolve_key(sys: PfaffianSystem, x: int, key, err=UnknownLabel) -> LinPoly:
    """Normalized polynomial of a plane named by label, LinPoly or Hyperplane."""
    if isinstance(key, str):
        for H in sys.planes:
            if H.label == key:
                if not H.poly.coeffs[x]:
                    raise err(f"plane {key} does not depend on {sys.vars[x]}")
                return H.poly
        raise err(f"no plane labelled {key!r}")
    poly = key.poly if isinstance(key, Hyperplane) else key
    p = normalize_poly(poly)
    if not p.coeffs[x]:
        raise err(f"plane {p} does not depend on {sys.vars[x]}")
    return p


def addition(sys: PfaffianSystem, x: int, alpha: Mapping) -> PfaffianSystem:
    """A_H -> A_H + alpha_H I for the named planes of direction x.

    Keys are labels of planes in A_x, or polynomials of planes through x (a
    plane not yet present is created). Residues that become zero are dropped.
    """
    shifts: dict = {}
    for key, val in alpha.items():
        p = _resolve_key(sys, x, key)
        shifts[p] = shifts.get(p, ZERO) + Q(val)
    I = Matrix.identity(sys.N)
    planes, residues = [], {}
    used = set(H.label for H in sys.planes)
    for H in sys.planes:
        m = sys.residues[H.label]
        s = shifts.pop(H.poly, ZERO)
        if s:
            m = m + I.scale(s)
        if not m.is_zero():
            planes.append(H)
            residues[H.label] = m
    k = 1
    for p, s in shifts.items():
        if not s:
            continue
        while f"H{k}" in used:
            k += 1
        lab = f"H{k}"
        used.add(lab)
        planes.append(Hyperplane(p, lab))
        residues[lab] = I.scale(s)
    return PfaffianSystem(sys.n, sys.N, sys.A_lin, dict(sys.A_quad),
                          Arrangement(sys.n, tuple(planes)), residues, sys.vars)


def middle_convolution(sys: PfaffianSystem, x: int, lam: Mapping) -> TransformOutput:
    """mc_lambda = ML^{-x} . add_{-lambda} . ML^x.

    lambda is keyed by the planes (labels or polynomials) of the ML output in
    direction x, i.e. by the spectral branches of S_x.
    """
    ml = middle_laplace(sys, x)
    alpha = {}
    for key, val in lam.items():
        p = _resolve_key(ml.system, x, key, BranchKeyMismatch)
        alpha[p] = alpha.get(p, ZERO) - Q(val)
    added = addition(ml.system, x, alpha)
    _require_inf(added, x)
    iml = inverse_middle_laplace(added, x)
    return TransformOutput(iml.system, projection=iml.projection, extension=iml.extension,
                           kernel=iml.kernel, gauge=iml.gauge, blocks=iml.blocks,
                           unprojected=iml.unprojected, normalized_input=iml.normalized_input,
                           stages={"ml": ml, "add": added, "iml": iml})


def dr_middle_convolution(sys: PfaffianSystem, beta) -> TransformOutput:
    """Classical additive middle convolution of a Fuchsian ODE u' = sum A_i/(x - a_i) u."""
    beta = Q(beta)
    if sys.n != 1 or not sys.A_lin[0].is_zero():
        raise NotFuchsian("needs one variable and zero polynomial part")
    planes = _require_direction(sys, 0)
    q, N = len(planes), sys.N
    A = [sys.residues[H.label] for H in planes]
    I = Matrix.identity(N)
    C = [_block_row(i, q, [A[j] + I.scale(beta) if j == i else A[j] for j in range(q)], N)
         for i in range(q)]
    total = C[0]
    for c in C[1:]:
        total = total + c
    K = direct_sum([kernel_basis(m) for m in A])
    Kinf = kernel_basis(total)
    KK = K + Kinf
    bars, P, Qm = quotient_action(C, KK)
    out = make_system(1, q * N - KK.dim, [Matrix.zeros(q * N - KK.dim)], {},
                      [(H.poly, b) for H, b in zip(planes, bars)], sys.vars, direction=0)
    unproj = make_system(1, q * N, [Matrix.zeros(q * N)], {},
                         [(H.poly, c) for H, c in zip(planes, C)], sys.vars, direction=0)
    return TransformOutput(out, projection=Qm, kernel=KK, unprojected=unproj,
                           stages={"K": K, "K_inf": Kinf})
