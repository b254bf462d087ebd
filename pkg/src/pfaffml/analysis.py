"""Checks and solvers on Pfaffian systems: integrability, assumptions,
irreducibility, intertwiners, gauge equivalence and the phi-map."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .arrangement import cross_pole, normalize_poly, plane_key, shifted_pole
from .errors import (AssumptionViolation, EmptyDirection, NonRationalSpectrum,
                     NotIrreducible, NotSimultaneouslyDiagonalizable, PlaneMismatch)
from .exact import ONE, ZERO, LinPoly, Q, SparsePoly, product
from .linalg import (Matrix, Subspace, _Echelon, block_diag, det, eigenspace, hstack,
                     inverse, kernel_basis, quotient_basis, rank, rational_eigenvalues,
                     spin, spin_algebra_dim, vstack)
from .system import PfaffianSystem, inf_violation, normalize_S, spectral_blocks


# ------------------------------------------------------------------ integrability

def _coefficient_terms(sys: PfaffianSystem, i: int) -> list:
    """Omega_i as [(matrix, numerator SparsePoly, denominator plane poly or None)]."""
    n = sys.n
    out = []
    if not sys.A_lin[i].is_zero():
        out.append((sys.A_lin[i], SparsePoly.const(n, 1), None))
    for z in range(n):
        if z != i:
            m = sys.quad(i, z)
            if not m.is_zero():
                out.append((m, SparsePoly.variable(n, z), None))
    for H in sys.planes:
        d = H.poly.coeffs[i]
        if d:
            out.append((sys.residues[H.label], SparsePoly.const(n, d), H.poly))
    return out


def _clear(terms_num: list, dens: list, n: int) -> dict:
    """Combine sum_k M_k * num_k / prod(den_k) over the common denominator.

    terms_num: [(matrix, numerator, tuple of plane polys)], result maps
    monomial -> matrix coefficient of the cleared numerator.
    """
    polys = {p: SparsePoly.from_linpoly(p) for p in dens}
    acc: dict = {}
    for M, num, den in terms_num:
        rest = [polys[p] for p in dens if p not in den]
        poly = num * product(rest, n)
        for mono, c in poly.terms.items():
            prev = acc.get(mono)
            acc[mono] = M.scale(c) if prev is None else prev + M.scale(c)
    return acc


def curvature_defects(sys: PfaffianSystem) -> list:
    """Nonzero coefficients of [Omega_i, Omega_j] after clearing denominators.

    Returns [((i, j), monomial, matrix), ...]; empty iff integrable.
    """
    defects = []
    n = sys.n
    for i in range(n):
        ti = _coefficient_terms(sys, i)
        for j in range(i + 1, n):
            tj = _coefficient_terms(sys, j)
            prods = []
            dens = []
            for Mi, ni, di in ti:
                for Mj, nj, dj in tj:
                    if di is not None and di == dj:
                        continue        # same plane on both sides: [A_H, A_H] = 0
                    C = Mi.commutator(Mj)
                    if C.is_zero():
                        continue
                    den = tuple(p for p in (di, dj) if p is not None)
                    for p in den:
                        if p not in dens:
                            dens.append(p)
                    prods.append((C, ni * nj, den))
            for mono, M in _clear(prods, dens, n).items():
                if not M.is_zero():
                    defects.append(((i, j), mono, M))
    return defects


def check_integrability(sys: PfaffianSystem) -> bool:
    """Omega ^ Omega = 0, decided exactly."""
    sym = all(sys.quad(i, j) == sys.quad(j, i) for i in range(sys.n) for j in range(sys.n) if i != j)
    return sym and not curvature_defects(sys)


@dataclass
class ConditionReport:
    condition: str
    pair: tuple
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"condition": self.condition, "pair": list(self.pair), "pass": self.passed,
                "detail": self.detail}


def check_structured_integrability(sys: PfaffianSystem) -> list:
    """Evaluate the twelve commutator families for every ordered pair (x, y)."""
    reports = []
    n = sys.n
    R = sys.residues
    for x in range(n):
        for y in range(n):
            if x == y:
                continue
            reports += _structured_pair(sys, x, y)
    return reports


def _structured_pair(sys: PfaffianSystem, x: int, y: int) -> list:
    n = sys.n
    R = sys.residues
    pair = (x, y)
    names = sys.vars
    Ax = [H for H in sys.planes if H.poly.coeffs[x]]
    Ay = [H for H in sys.planes if H.poly.coeffs[y]]
    Axy = [H for H in Ax if H.poly.coeffs[y]]
    Ax_only = [H for H in Ax if not H.poly.coeffs[y]]
    Ay_only = [H for H in Ay if not H.poly.coeffs[x]]
    b = {H.label: shifted_pole(H, y) for H in Ay}
    bset = [b[K.label] for K in Ay_only]

    def c(H, H2):
        return cross_pole(H, H2, x, y)

    def C_set(H):
        return [H2 for H2 in Ax if H2.label != H.label and c(H, H2) is not None]

    failures: dict = {}
    checked = set()

    def comm(cond, A, B, what):
        checked.add(cond)
        if not A.commutator(B).is_zero():
            failures.setdefault(cond, []).append(what)

    N = sys.N
    Z = Matrix.zeros(N)
    for H in Axy:
        CH = C_set(H)
        for H1 in Ay_only:
            M = R[H1.label]
            for H2 in CH:
                if c(H, H2) == b[H1.label]:
                    M = M + R[H2.label]
            comm("cond1", R[H.label], M, f"H={H.label}, H'={H1.label}")
        for H1 in CH:
            cc = c(H, H1)
            if any(cc == bb for bb in bset):
                continue
            M = Z
            for H2 in CH:
                if c(H, H2) == cc:
                    M = M + R[H2.label]
            comm("cond2", R[H.label], M, f"H={H.label}, H'={H1.label}")
    for H in Ax_only:
        for H1 in Ay_only:
            M = R[H1.label]
            for H2 in Axy:
                if c(H, H2) == b[H1.label]:
                    M = M + R[H2.label]
            comm("cond3", R[H.label], M, f"H={H.label}, H'={H1.label}")
        for H1 in Axy:
            cc = c(H, H1)
            if any(cc == bb for bb in bset):
                continue
            M = Z
            for H2 in Axy:
                if c(H, H2) == cc:
                    M = M + R[H2.label]
            comm("cond4", R[H.label], M, f"H={H.label}, H'={H1.label}")
    Ax_m, Ay_m = sys.A_lin[x], sys.A_lin[y]
    Axy_m = sys.quad(x, y)
    xpp = [z for z in range(n) if z not in (x, y)]
    # A_yz for z in x' (z != x); A_yy is read as zero
    if Axy_m.is_zero():
        comm("cond5", Ax_m, Ay_m, "[A_x, A_y]")
        for z in xpp:
            comm("cond5", Ax_m, sys.quad(y, z), f"[A_x, A_y{names[z]}]")
            comm("cond5", Ax_m, sys.quad(x, z), f"[A_x, A_x{names[z]}]")
        for z in xpp:
            for w in xpp:
                comm("cond6", sys.quad(x, z), sys.quad(y, w), f"[A_x{names[z]}, A_y{names[w]}]")
        for H in Ax:
            for z in xpp:
                comm("cond7", R[H.label], sys.quad(y, z), f"H={H.label}, z={names[z]}")
        for H in Ax_only:
            comm("cond8", R[H.label], Ay_m, f"H={H.label}")
        for H in Axy:
            a = shifted_pole(H, x)
            comm("cond9", R[H.label], Ay_m + Ax_m.scale(a.coeffs[y]), f"H={H.label}")
    else:
        comm("cond10", Ax_m, Ay_m, "[A_x, A_y]")
        comm("cond10", Ax_m, Axy_m, "[A_x, A_xy]")
        for z in xpp:
            comm("cond10", Axy_m, sys.quad(x, z), f"[A_xy, A_x{names[z]}]")
        for H in Axy:
            a = shifted_pole(H, x)
            for z in [y] + xpp:
                comm("cond11", R[H.label], sys.quad(x, z), f"H={H.label}, z={names[z]}")
            comm("cond11", R[H.label], Ay_m + Ax_m.scale(a.coeffs[y]), f"H={H.label}")
        for H in Ax_only:
            a = shifted_pole(H, x)
            for z in xpp:
                comm("cond12", R[H.label], sys.quad(y, z), f"H={H.label}, z={names[z]}")
            comm("cond12", R[H.label], Ay_m + Axy_m.scale(a.const), f"H={H.label}")
            for z in xpp:
                if a.coeffs[z]:
                    comm("cond12", R[H.label], Axy_m, f"H={H.label}, a_H depends on {names[z]}")
    out = []
    for k in range(1, 13):
        cond = f"cond{k}"
        fails = failures.get(cond, [])
        if fails:
            out.append(ConditionReport(cond, pair, False, "; ".join(fails)))
        else:
            detail = "" if cond in checked else "vacuous"
            out.append(ConditionReport(cond, pair, True, detail))
    return out


def structured_integrable(sys: PfaffianSystem) -> bool:
    return all(r.passed for r in check_structured_integrability(sys))


# ------------------------------------------------------------------ assumptions

@dataclass
class AssumptionReport:
    direction: int
    diagonalizable: bool
    infinity_condition: bool
    messages: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.diagonalizable and self.infinity_condition

    def to_json(self) -> dict:
        return {"direction": self.direction, "diagonalizable": self.diagonalizable,
                "infinity_condition": self.infinity_condition, "pass": self.passed,
                "messages": list(self.messages)}


def check_assumptions(sys: PfaffianSystem, x: int) -> AssumptionReport:
    msgs = []
    diag = True
    try:
        spectral_blocks(sys, x)
    except (NonRationalSpectrum, NotSimultaneouslyDiagonalizable) as e:
        diag = False
        msgs.append(f"diagonalizability: {e}")
    inf = inf_violation(sys, x)
    if inf:
        msgs.append(f"infinity: {inf}")
    return AssumptionReport(x, diag, inf is None, msgs)


# ------------------------------------------------------------------ irreducibility

@dataclass
class IrreducibilityVerdict:
    status: str                 # AbsolutelyIrreducible | Reducible | Indeterminate
    algebra_dim: int
    witness: Optional[Subspace] = None

    def to_json(self) -> dict:
        return {"status": self.status, "algebra_dim": self.algebra_dim,
                "witness": None if self.witness is None else self.witness.to_json()}


def direction_generators(sys: PfaffianSystem, x: int) -> list:
    """A_x, the A_xz and the residues of the planes through x."""
    gens = [sys.A_lin[x]] + [sys.quad(x, z) for z in range(sys.n) if z != x]
    gens += [sys.residues[H.label] for H in sys.canonical_direction_set(x)]
    return gens


def _eigen_candidates(gens: Sequence[Matrix]) -> list:
    out = []
    for g in gens:
        try:
            eig = rational_eigenvalues(g)
        except NonRationalSpectrum:
            # the kernel is still rational
            eig = [(ZERO, 1)]
        for lam, _ in eig:
            out += list(eigenspace(g, lam).basis)
    return out


def find_invariant_subspace(gens: Sequence[Matrix]) -> Optional[Subspace]:
    N = gens[0].nrows
    for v in _eigen_candidates(gens):
        W = spin([v], gens)
        if 0 < W.dim < N:
            return W
    # an invariant subspace of the transposes gives one for the gens by annihilators
    tg = [g.T for g in gens]
    for v in _eigen_candidates(tg):
        W = spin([v], tg)
        if 0 < W.dim < N:
            ann = kernel_basis(Matrix(list(W.basis)))
            return ann
    return None


def is_irreducible(sys: PfaffianSystem, x: int) -> IrreducibilityVerdict:
    if not sys.direction_set(x):
        raise EmptyDirection(f"no plane depends on {sys.vars[x]}")
    gens = [g for g in direction_generators(sys, x) if not g.is_zero()]
    N = sys.N
    if not gens:
        gens = [Matrix.zeros(N)]
    d = spin_algebra_dim(gens)
    if d == N * N:
        return IrreducibilityVerdict("AbsolutelyIrreducible", d)
    W = find_invariant_subspace(gens)
    if W is not None and all(W.is_invariant(g) for g in gens):
        return IrreducibilityVerdict("Reducible", d, W)
    return IrreducibilityVerdict("Indeterminate", d)


# ------------------------------------------------------------------ intertwiners

def solve_intertwiners(gensA: Sequence[Matrix], gensB: Sequence[Matrix]) -> list:
    """Basis of {F : F gensA[k] = gensB[k] F for all k}; F is N' x N."""
    if len(gensA) != len(gensB):
        raise PlaneMismatch("generator lists have different lengths")
    if not gensA:
        raise ValueError("need at least one generator pair")
    Na, Nb = gensA[0].nrows, gensB[0].nrows
    dimF = Na * Nb
    # current solution space as a list of flattened matrices
    basis = None
    for GA, GB in zip(gensA, gensB):
        if GA.is_zero() and GB.is_zero():
            continue
        if basis is None:
            # F GA - GB F, as a linear map on vec(F) (row-major)
            rows = []
            for r in range(Nb):
                for c in range(Na):
                    row = [ZERO] * dimF
                    for m in range(Na):
                        v = GA.rows[m][c]
                        if v:
                            row[r * Na + m] += v
                    for m in range(Nb):
                        v = GB.rows[r][m]
                        if v:
                            row[m * Na + c] -= v
                    rows.append(row)
            K = kernel_basis(Matrix(rows, dimF))
            basis = [Matrix._raw(tuple(tuple(v[r * Na:(r + 1) * Na]) for r in range(Nb)), Na)
                     for v in K.basis]
        else:
            if not basis:
                return []
            resid = [(F @ GA - GB @ F).flat() for F in basis]
            M = Matrix.from_columns(resid, dimF)
            K = kernel_basis(M)
            new = []
            for t in K.basis:
                F = None
                for coef, Fs in zip(t, basis):
                    if coef:
                        F = Fs.scale(coef) if F is None else F + Fs.scale(coef)
                new.append(F)
            basis = new
        if not basis:
            return []
    if basis is None:
        basis = [Matrix.unit(Nb, Na, r, c) for r in range(Nb) for c in range(Na)]
    return basis


def matched_generators(sysA: PfaffianSystem, sysB: PfaffianSystem):
    """Pair up the coefficient matrices of two systems, planes matched by polynomial."""
    if sysA.n != sysB.n:
        raise PlaneMismatch("different numbers of variables")
    ga, gb, roles = [], [], []
    for i in range(sysA.n):
        ga.append(sysA.A_lin[i])
        gb.append(sysB.A_lin[i])
        roles.append(f"A_{sysA.vars[i]}")
    for i in range(sysA.n):
        for j in range(i + 1, sysA.n):
            ga.append(sysA.quad(i, j))
            gb.append(sysB.quad(i, j))
            roles.append(f"A_{sysA.vars[i]}{sysA.vars[j]}")
    ma, mb = sysA.residue_map(), sysB.residue_map()
    ma = {k: v for k, v in ma.items() if not v.is_zero()}
    mb = {k: v for k, v in mb.items() if not v.is_zero()}
    if set(ma) != set(mb):
        only_a = [str(p) for p in ma if p not in mb]
        only_b = [str(p) for p in mb if p not in ma]
        raise PlaneMismatch(f"planes differ: only in first {only_a}, only in second {only_b}")
    for p in sorted(ma, key=lambda p: plane_key(p)):
        ga.append(ma[p])
        gb.append(mb[p])
        roles.append(f"A[{p}]")
    return ga, gb, roles


@dataclass
class GaugeResult:
    status: str                      # Yes | No | Inconclusive
    witness: Optional[Matrix] = None
    detail: str = ""

    def __bool__(self):
        return self.status == "Yes"


_POOL = [Q(v) for v in (1, -1, 2, -2, 3, -3, "1/2", "-1/2", "1/3", "-2/3", 5, "3/4", -4, "5/2", 7)]


def verify_gauge(sysA: PfaffianSystem, sysB: PfaffianSystem, P: Matrix) -> bool:
    """sysB = P^-1 sysA P, i.e. P gen_B = gen_A P for every matched generator."""
    try:
        ga, gb, _ = matched_generators(sysA, sysB)
    except PlaneMismatch:
        return False
    if P.shape != (sysA.N, sysB.N) or sysA.N != sysB.N or not det(P):
        return False
    return all(P @ b == a @ P for a, b in zip(ga, gb))


def gauge_equivalent(sysA: PfaffianSystem, sysB: PfaffianSystem, seed: int = 0) -> GaugeResult:
    if sysA.N != sysB.N:
        return GaugeResult("No", detail=f"ranks differ ({sysA.N} vs {sysB.N})")
    try:
        ga, gb, _ = matched_generators(sysA, sysB)
    except PlaneMismatch as e:
        return GaugeResult("No", detail=str(e))
    basis = solve_intertwiners(ga, gb)
    if not basis:
        return GaugeResult("No", detail="intertwiner space is zero")
    cands = []
    if len(basis) == 1:
        cands = [basis[0]]
    else:
        rng = random.Random(seed)
        for _ in range(20):
            F = None
            for Fs in basis:
                c = rng.choice(_POOL)
                F = Fs.scale(c) if F is None else F + Fs.scale(c)
            cands.append(F)
    for F in cands:
        if det(F):
            P = inverse(F)
            if not verify_gauge(sysA, sysB, P):
                raise AssertionError("intertwiner failed exact verification")
            return GaugeResult("Yes", P, f"intertwiner space of dimension {len(basis)}")
    if len(basis) == 1:
        return GaugeResult("No", detail="the only intertwiner (up to scale) is singular")
    return GaugeResult("Inconclusive",
                       detail=f"no invertible element found in a {len(basis)}-dim intertwiner space")


# ------------------------------------------------------------------ kernel invariance

def kernel_invariance(sys: PfaffianSystem, x: int, inverse: bool = False) -> dict:
    """For the Laplace transform of sys in direction x (or the inverse one),
    check that every direction's coefficient maps the kernel space into
    itself, as a polynomial identity after clearing denominators.
    Returns {direction: bool}."""
    from .transforms import inverse_laplace, kernel_space, laplace

    L = inverse_laplace(sys, x) if inverse else laplace(sys, x)
    K = kernel_space(L.normalized_input, x)
    out = {}
    if K.is_zero():
        return {y: True for y in range(sys.n)}
    _, _, Qm, _ = quotient_basis(K)
    Kc = K.column_matrix()
    V = L.system
    for y in range(V.n):
        terms = []
        dens = []
        for M, num, den in _coefficient_terms(V, y):
            C = Qm @ M @ Kc
            d = () if den is None else (den,)
            if den is not None and den not in dens:
                dens.append(den)
            terms.append((C, num, d))
        acc = _clear(terms, dens, V.n)
        out[y] = all(M.is_zero() for M in acc.values())
    return out


# ------------------------------------------------------------------ alternation diagnostic

def mixed_directions(sys: PfaffianSystem, x: int) -> list:
    """Directions x_j != x sharing a plane with x, i.e. A_x and A_{x_j} intersect."""
    return [j for j in range(sys.n) if j != x
            and any(H.depends_on(x) and H.depends_on(j) for H in sys.planes)]


def alternation(before: PfaffianSystem, after: PfaffianSystem, x: int) -> dict:
    """Compare the mixing pattern in direction x before and after a Laplace-type step.

    The expected behaviour is that mixing flips: planes shared with x disappear
    when there were some, and appear when there were none. Only a diagnostic;
    callers should not treat a False as an error.
    """
    was, now = mixed_directions(before, x), mixed_directions(after, x)
    expected = (not now) if was else (bool(now) or before.n == 1)
    return {"input_mixed": was, "output_mixed": now, "flips": expected}


# ------------------------------------------------------------------ phi map

@dataclass
class PhiReport:
    surjective: bool
    kernel_matches_block_form: bool
    kernel_matches_residue_form: bool
    intertwines: bool
    kernel_dim: int
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (self.surjective and self.kernel_matches_block_form
                and self.kernel_matches_residue_form and self.intertwines)

    def to_json(self) -> dict:
        return {"surjective": self.surjective,
                "kernel_matches_block_form": self.kernel_matches_block_form,
                "kernel_matches_residue_form": self.kernel_matches_residue_form,
                "intertwines": self.intertwines, "kernel_dim": self.kernel_dim,
                "failures": list(self.failures)}


def phi_map(sys: PfaffianSystem, x: int):
    """The map phi(v) = sum_i E_{N_i} sum_j A_{H_j} v^i_j from the double
    Laplace transform L^{-x} L^x(sys) back to sys, with its checks.

    Returns (phi, report, G) where G is the double transform and phi is
    expressed in the coordinates of G and of sys.
    """
    from .transforms import inverse_laplace, kernel_space, laplace

    v = is_irreducible(sys, x)
    if v.status != "AbsolutelyIrreducible":
        raise NotIrreducible(f"system is not irreducible in {sys.vars[x]} ({v.status})")
    rep = check_assumptions(sys, x)
    if not rep.passed:
        raise AssumptionViolation("; ".join(rep.messages))
    sysn, blocks0 = normalize_S(sys, x)
    P0 = blocks0.gauge
    L = laplace(sysn, x)
    LL = inverse_laplace(L.system, x)
    P1 = LL.gauge
    G = LL.system
    planes = sysn.canonical_direction_set(x)
    A = [sysn.residues[H.label] for H in planes]
    q, N = len(planes), sys.N
    qN = q * N
    branches = list(zip(blocks0.branches, blocks0.offsets()))
    qhat = len(branches)
    rows_blocks = []           # M_i = [E_i A_1 ... E_i A_q], N x qN
    for (_, size), off in branches:
        E = Matrix.diag([1 if off <= k < off + size else 0 for k in range(N)])
        rows_blocks.append(hstack([E @ a for a in A]))
    P1d = block_diag([P1] * qhat)
    phi_n = hstack(rows_blocks) @ P1d
    phi = P0 @ phi_n
    failures = []
    surj = rank(phi) == N
    if not surj:
        failures.append("phi is not surjective")
    kerphi = kernel_basis(phi)
    K1 = kernel_basis(block_diag([Mi @ P1 for Mi in rows_blocks]))
    ok1 = K1 == kerphi
    if not ok1:
        failures.append("ker phi differs from the block-equation form")
    # B_Hhat_i v_i in K^x, with K^x the kernel space of sysn
    Kx = kernel_space(sysn, x)
    _, _, Qk, _ = quotient_basis(Kx)
    Lmap = L.system.residue_map()
    X = LinPoly.var(sys.n, x)
    mats = []
    for (ahat, _), _ in branches:
        B = Lmap.get(normalize_poly(X - ahat), Matrix.zeros(qN))
        mats.append(Qk @ B @ P1)
    K2 = kernel_basis(block_diag(mats))
    ok2 = K2 == kerphi
    if not ok2:
        failures.append("ker phi differs from the residue-membership form")
    inter = True
    ga, gb, roles = _phi_generators(G, sys)
    for role, g_src, g_tgt in zip(roles, ga, gb):
        if phi @ g_src != g_tgt @ phi:
            inter = False
            failures.append(f"intertwining fails for {role}")
    report = PhiReport(surj, ok1, ok2, inter, kerphi.dim, failures)
    return phi, report, G


def _phi_generators(G: PfaffianSystem, sys: PfaffianSystem):
    """Matched generators (source G, target sys); a plane absent on one side counts as zero."""
    ga, gb, roles = [], [], []
    for i in range(sys.n):
        ga.append(G.A_lin[i])
        gb.append(sys.A_lin[i])
        roles.append(f"A_{sys.vars[i]}")
        for j in range(i + 1, sys.n):
            ga.append(G.quad(i, j))
            gb.append(sys.quad(i, j))
            roles.append(f"A_{sys.vars[i]}{sys.vars[j]}")
    mg, ms = G.residue_map(), sys.residue_map()
    for p in sorted(set(mg) | set(ms), key=lambda p: plane_key(p)):
        ga.append(mg.get(p, Matrix.zeros(G.N)))
        gb.append(ms.get(p, Matrix.zeros(sys.N)))
        roles.append(f"A[{p}]")
    return ga, gb, roles
