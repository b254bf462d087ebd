"""The ten acceptance criteria, each at its stated tolerance.

Every criterion records one PASS/FAIL line, printed in the terminal summary
(and on stdout when this file is run directly). Expected matrices for the
golden tests are transcribed here from the printed displays, independently
of the corpus module.
"""
import functools
import random
import sys
import time

import pytest

import conftest
from oracles import dr_convolution, gauss_tuple, joint_conjugate, to_sympy
from pfaffml.analysis import (check_integrability, direction_generators, gauge_equivalent,
                              is_irreducible, kernel_invariance, phi_map)
from pfaffml.arrangement import Arrangement, Hyperplane, cross_pole, cross_set, shifted_pole
from pfaffml.corpus import builtin
from pfaffml.exact import LinPoly, Q
from pfaffml.linalg import Matrix, block_diag, rational_eigenvalues, spin_algebra_dim
from pfaffml.errors import FullKernel, NonRationalSpectrum
from pfaffml.samples import rand_rational, random_fuchsian, random_rank1, random_seed_system
from pfaffml.system import make_system, same_system
from pfaffml.transforms import (addition, dr_middle_convolution, inverse_laplace,
                                inverse_middle_laplace, laplace, middle_convolution,
                                middle_laplace)

A1, A2, A3, BETA = Q(1) / 2, Q(1) / 3, Q(1) / 5, Q(1) / 7
X, Y = LinPoly.var(2, 0), LinPoly.var(2, 1)
X1 = LinPoly.var(1, 0)


def record(k: int, ok: bool, detail: str):
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'} ({detail})"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def rank1():
    return make_system(2, 1, None, {}, [(X, Matrix([[A1]])), (X - 1, Matrix([[A2]])),
                                        (X - Y, Matrix([[A3]]))], direction=0)


# ------------------------------------------------------------------ printed displays

def printed_phi1():
    """B_x, B_xy, B_H1, B_H13, B_H23 as displayed for the Humbert Phi_1 system."""
    Bx = Matrix.diag([0, 1, 0]).scale(-1)
    Bxy = Matrix.diag([0, 0, 1]).scale(-1)
    BH1 = Matrix([[A1, A2, A3]] * 3).scale(-1)
    BH13 = Matrix([[A3, 0, -A3], [0, 0, 0], [-A1, 0, A1]])
    BH23 = Matrix([[0, 0, 0], [0, A3, -A3], [0, -A2, A2]])
    return Bx, Bxy, BH1, BH13, BH23


def printed_f1():
    _, _, _, BH13, BH23 = printed_phi1()
    z = [0, 0, 0]
    C1 = Matrix([[A1 + BETA, A2, A3], z, z])
    C2 = Matrix([z, [A1, A2 + BETA, A3], z])
    C3 = Matrix([z, z, [A1, A2, A3 + BETA]])
    return make_system(2, 3, None, {}, [(X, C1), (X - 1, C2), (X - Y, C3), (Y, BH13),
                                        (Y - 1, BH23)])


def printed_cf4_six():
    """The 6x6 matrices from their block formulas (E_N are the spectral projectors)."""
    Bx, Bxy, BH1, BH13, BH23 = printed_phi1()
    I3 = Matrix.identity(3)
    EN1, EN2 = Matrix.diag([1, 1, 0]), Matrix.diag([0, 0, 1])
    D13, D23 = BH13 - I3.scale(A1 + A3), BH23 - I3.scale(A2 + A3)
    Cx = block_diag([Bx, Bx + Bxy])
    Cy = block_diag([Matrix.zeros(3), I3])

    def rows(E):
        top = [E @ D13, E @ D23]
        from pfaffml.linalg import from_blocks
        return from_blocks([top, top], [3, 3], [3, 3]).scale(-1)

    return make_system(2, 6, [Cx, Cy], {}, [(X, block_diag([BH1, BH1])), (X - Y, rows(EN2)),
                                            (Y, rows(EN1))], direction=1)


def printed_cf4_bar():
    Cx = Matrix.diag([-1, 0, -1, 0])
    Cy = Matrix.diag([1, 1, 0, 0])
    CH1 = Matrix([[-A2 - A3, -A1 * (A2 + A3), 0, 0], [-1, -A1, 0, 0],
                  [0, 0, -A2, -1], [0, 0, -A2 * (A1 + A3), -A1 - A3]])
    CH3 = Matrix([[A3, 0, 0, A3], [0] * 4, [0] * 4, [A3, 0, 0, A3]])
    CH13 = Matrix([[A2, 0, A2 * (A1 + A3), 0], [0, A2 + A3, 0, 1],
                   [1, 0, A1 + A3, 0], [0, A1 * (A2 + A3), 0, A1]])
    return make_system(2, 4, [Cx, Cy], {}, [(X, CH1), (X - Y, CH3), (Y, CH13)], direction=1)


# ------------------------------------------------------------------ shared computations

@functools.lru_cache(maxsize=None)
def golden_runs():
    t0 = time.perf_counter()
    ml = middle_laplace(rank1(), 0)
    t1 = time.perf_counter()
    f1_add = addition(ml.system, 0, {X: -BETA})
    f1 = inverse_middle_laplace(f1_add, 0)
    t2 = time.perf_counter()
    add_y = addition(ml.system, 1, {Y: -A1 - A3, Y - 1: -A2 - A3})
    cf4 = inverse_middle_laplace(add_y, 1)
    t3 = time.perf_counter()
    return {"ml": ml, "f1": f1, "f1_add": f1_add, "add_y": add_y, "cf4": cf4,
            "t_ml": t1 - t0, "t_f1": (t2 - t1) + (t1 - t0), "t_cf4": (t3 - t2) + (t1 - t0)}


@functools.lru_cache(maxsize=None)
def inversion_suite(target=200):
    cases, k = [], 0
    t0 = time.perf_counter()
    while len(cases) < target:
        rng = random.Random(1000 + k)
        n = 1 if k % 2 == 0 else 2
        k += 1
        s = random_seed_system(rng, n)
        if is_irreducible(s, 0).status != "AbsolutelyIrreducible":
            continue
        a = middle_laplace(s, 0)
        b = inverse_middle_laplace(a.system, 0)
        c = inverse_middle_laplace(s, 0)
        d = middle_laplace(c.system, 0)
        cases.append({"sys": s, "outs": [a.system, b.system, c.system, d.system],
                      "r1": gauge_equivalent(b.system, s, seed=k),
                      "r2": gauge_equivalent(d.system, s, seed=k),
                      "laplace": [(s, False), (a.system, True), (s, True), (c.system, False)]})
    return cases, k, time.perf_counter() - t0


@functools.lru_cache(maxsize=None)
def additivity_suite(target=60):
    cases, k = [], 0
    while len(cases) < target:
        rng = random.Random(500 + k)
        n = 1 + k % 2
        k += 1
        s = random_seed_system(rng, n)
        if is_irreducible(s, 0).status != "AbsolutelyIrreducible":
            continue
        keys = [H.poly for H in middle_laplace(s, 0).system.canonical_direction_set(0)]
        lam = {p: rand_rational(rng) for p in keys}
        mu = {p: rand_rational(rng) for p in keys}
        entry = {"sys": s, "n": n}
        try:
            m_mu = middle_convolution(s, 0, mu).system
            m_lm = middle_convolution(m_mu, 0, lam).system
            m_sum = middle_convolution(s, 0, {p: lam[p] + mu[p] for p in keys}).system
            m_0 = middle_convolution(s, 0, {}).system
            entry.update(outs=[m_mu, m_lm, m_sum, m_0],
                         add=gauge_equivalent(m_lm, m_sum, seed=k).status,
                         zero=gauge_equivalent(m_0, s, seed=k).status)
        except Exception as e:            # a failure of the pipeline counts against the criterion
            entry.update(outs=[], add=f"error {type(e).__name__}", zero="error")
        cases.append(entry)
    return cases


def _by_pole(sysm):
    return {H.poly: sysm.residues[H.label] for H in sysm.planes}


@functools.lru_cache(maxsize=None)
def dr_suite(target=60):
    cases, k = [], 0
    dr_suite.degenerate = 0
    while len(cases) < target:
        rng = random.Random(7000 + k)
        k += 1
        N, q = rng.randint(1, 3), rng.randint(1, 3)
        s = random_fuchsian(rng, N, q, low_rank=0.5)
        if is_irreducible(s, 0).status != "AbsolutelyIrreducible":
            continue
        beta = rand_rational(rng)
        if rng.random() < 0.3:
            # a resonant parameter makes K_inf nontrivial
            total = Matrix.zeros(N)
            for H in s.planes:
                total = total + s.residues[H.label]
            try:
                ev = [l for l, _ in rational_eigenvalues(total) if l]
            except NonRationalSpectrum:
                ev = []
            if ev:
                beta = -ev[0]
        entry = {"sys": s, "N": N, "q": q}
        try:
            dr = dr_middle_convolution(s, beta)
        except FullKernel:
            # the convolution vanishes; mc then has no plane left and is undefined
            dr_suite.degenerate += 1
            continue
        try:
            mc = middle_convolution(s, 0, {X1: beta})
            entry["outs"] = [mc.system, dr.system]
            entry["status"] = gauge_equivalent(mc.system, dr.system, seed=k).status
            entry["kinf"] = dr.stages["K_inf"].dim
            # independent sympy oracle: same rank and jointly conjugate residue tuples
            poles = [H.poly for H in s.canonical_direction_set(0)]
            ref, _ = dr_convolution([to_sympy(s.residues[H.label])
                                     for H in s.canonical_direction_set(0)], beta)
            ours = _by_pole(dr.system)
            M = dr.system.N
            mine = [to_sympy(ours.get(p, Matrix.zeros(M))) for p in poles]
            entry["oracle"] = (ref[0].shape[0] == M and
                               (M == 0 or joint_conjugate(ref, mine) is not None))
        except Exception as e:
            entry.update(outs=[], status=f"error {type(e).__name__}", oracle=False, kinf=0)
        cases.append(entry)
    return cases


@functools.lru_cache(maxsize=None)
def gauss_case():
    a, b, beta = Q(1) / 2, Q(1) / 3, Q(1) / 5
    s = make_system(1, 1, None, {}, [(X1, Matrix([[a]])), (X1 - 1, Matrix([[b]]))])
    mc = middle_convolution(s, 0, {X1: beta})
    dr = dr_middle_convolution(s, beta)
    ref = gauss_tuple(a, b, beta)
    got_dr = [to_sympy(dr.system.residue_at(p)) for p in (X1, X1 - 1)]
    got_mc = [to_sympy(mc.system.residue_at(p)) for p in (X1, X1 - 1)]
    return {"outs": [mc.system, dr.system], "exact": got_dr == ref,
            "mc_conj": joint_conjugate(ref, got_mc) is not None,
            "gauge": gauge_equivalent(mc.system, dr.system).status}


# ------------------------------------------------------------------ criteria

def test_criterion_1_phi1_golden():
    g = golden_runs()
    out = g["ml"].system
    Bx, Bxy, BH1, BH13, BH23 = printed_phi1()
    expect = {X: BH1, Y: BH13, Y - 1: BH23}
    ok = (out.N == 3 and out.A_lin[0] == Bx and out.A_lin[1].is_zero()
          and out.quad(0, 1) == Bxy and _by_pole(out) == expect
          and [H.poly for H in out.planes] == [X, Y, Y - 1] and g["t_ml"] < 1.0)
    record(1, ok, f"exact equality with the printed B matrices, {g['t_ml']:.3f}s")
    assert ok


def test_criterion_2_f1_golden():
    g = golden_runs()
    res = gauge_equivalent(g["f1"].system, printed_f1())
    ok = res.status == "Yes" and g["t_f1"] < 1.0
    record(2, ok, f"gauge {res.status} with exact witness, {g['t_f1']:.3f}s")
    assert ok


def test_criterion_3_confluent_f4_golden():
    g = golden_runs()
    cf4 = g["cf4"]
    res = gauge_equivalent(cf4.system, printed_cf4_bar())
    six_ok = same_system(cf4.unprojected, printed_cf4_six()) and \
        same_system(cf4.unprojected, builtin("cf4-six").system)
    ok = (cf4.rank == 4 and res.status == "Yes" and six_ok and cf4.kernel.dim == 2
          and g["t_cf4"] < 2.0)
    record(3, ok, f"rank {cf4.rank}, gauge {res.status}, 6x6 intermediate exact={six_ok}, "
                  f"dim K^y={cf4.kernel.dim}, {g['t_cf4']:.3f}s")
    assert ok


def test_criterion_4_inversion_suite():
    cases, tried, dt = inversion_suite()
    statuses = [(c["r1"].status, c["r2"].status) for c in cases]
    yes = sum(1 for a, b in statuses if a == b == "Yes")
    inconclusive = sum(1 for a, b in statuses for s in (a, b) if s == "Inconclusive")
    witnesses = all(c["r1"].witness is not None and c["r2"].witness is not None
                    for c in cases if c["r1"] and c["r2"])
    ok = len(cases) >= 200 and yes == len(cases) and inconclusive == 0 and witnesses and dt < 300
    record(4, ok, f"{yes}/{len(cases)} irreducible systems invert both ways "
                  f"({tried} generated), {inconclusive} inconclusive, {dt:.1f}s")
    assert ok


def test_criterion_5_irreducibility_preserved():
    cases, _, _ = inversion_suite()
    total = bad = 0
    for c in cases:
        for o in c["outs"]:
            total += 1
            if spin_algebra_dim(direction_generators(o, 0)) != o.N ** 2:
                bad += 1
    ok = bad == 0 and total >= 800
    record(5, ok, f"{total - bad}/{total} ML/IML outputs have full spin algebra")
    assert ok


def test_criterion_6_mc_additivity():
    cases = additivity_suite()
    add_yes = sum(1 for c in cases if c["add"] == "Yes")
    zero_yes = sum(1 for c in cases if c["zero"] == "Yes")
    ns = {c["n"] for c in cases}
    ok = len(cases) >= 50 and add_yes == zero_yes == len(cases) and ns == {1, 2}
    record(6, ok, f"additivity {add_yes}/{len(cases)}, mc_0 = id {zero_yes}/{len(cases)}")
    assert ok


def test_criterion_7_dr_agreement():
    cases = dr_suite()
    g = gauss_case()
    yes = sum(1 for c in cases if c["status"] == "Yes")
    oracle = sum(1 for c in cases if c["oracle"])
    kinf = sum(1 for c in cases if c["kinf"])
    ok = (len(cases) >= 50 and yes == oracle == len(cases) and g["exact"] and g["mc_conj"]
          and g["gauge"] == "Yes")
    record(7, ok, f"mc = DR up to gauge {yes}/{len(cases)}, sympy oracle {oracle}/{len(cases)} "
                  f"({kinf} with nontrivial K_inf, {dr_suite.degenerate} rank-0 skipped), "
                  f"Gauss tuple exact={g['exact']}")
    assert ok


def test_criterion_8_integrability_and_kernel_invariance():
    g = golden_runs()
    outputs = [g["ml"].system, g["f1"].system, g["f1_add"], g["add_y"], g["cf4"].system,
               g["cf4"].unprojected, g["f1"].unprojected]
    laplace_inputs = [(rank1(), 0, False), (g["f1_add"], 0, True), (g["add_y"], 1, True)]
    cases, _, _ = inversion_suite()
    for c in cases:
        outputs += c["outs"]
        laplace_inputs += [(s, 0, inv) for s, inv in c["laplace"]]
    for c in additivity_suite():
        outputs += c["outs"]
    for c in dr_suite():
        outputs += c["outs"]
    outputs += gauss_case()["outs"]
    integ_bad = sum(1 for o in outputs if not check_integrability(o))
    inv_bad = sum(1 for s, x, inv in laplace_inputs
                  if not all(kernel_invariance(s, x, inverse=inv).values()))
    ok = integ_bad == 0 and inv_bad == 0
    record(8, ok, f"integrable {len(outputs) - integ_bad}/{len(outputs)}, "
                  f"kernel invariant {len(laplace_inputs) - inv_bad}/{len(laplace_inputs)}")
    assert ok


def _arr3d():
    x1, x2, x3 = (LinPoly.var(3, i) for i in range(3))
    planes = {"H1": x1, "H2": x1 - x2, "H3": 2 * x1 + x2 + 3 * x3, "H4": x3 - 1}
    H = {k: Hyperplane(p, k) for k, p in planes.items()}
    return H, Arrangement(3, tuple(H.values())), (x1, x2, x3)


def section_example_checks():
    H, A, (x1, x2, x3) = _arr3d()
    half = Q(1) / 2
    checks = {
        "a_H1 = 0": shifted_pole(H["H1"], 0) == LinPoly.zero(3),
        "a_H2 = x2": shifted_pole(H["H2"], 0) == x2,
        "a_H3 = -x2/2 - 3x3/2": shifted_pole(H["H3"], 0) == -x2 * half - x3 * (3 * half),
        "b_H2 = x1": shifted_pole(H["H2"], 1) == x1,
        "b_H3 = -2x1 - 3x3": shifted_pole(H["H3"], 1) == -2 * x1 - 3 * x3,
        "c_H2H3 = -x3": cross_pole(H["H2"], H["H3"], 0, 1) == -x3,
        "c_H1H3 = -3x3": cross_pole(H["H1"], H["H3"], 0, 1) == -3 * x3,
        "A_x1 = {H1,H2,H3}": [h.label for h in A.direction_set(0)] == ["H1", "H2", "H3"],
        "A_x2 = {H2,H3}": [h.label for h in A.direction_set(1)] == ["H2", "H3"],
        "A_x3 = {H3,H4}": [h.label for h in A.direction_set(2)] == ["H3", "H4"],
        "C_H,y memberships": {k: [h.label for h in cross_set(A, H[k], 0, 1)]
                              for k in ("H1", "H2", "H3")}
        == {"H1": ["H2", "H3"], "H2": ["H1", "H3"], "H3": ["H1", "H2"]},
    }
    return checks, cross_pole(H["H1"], H["H2"], 0, 1)


def test_criterion_9_section_example_values():
    checks, c12 = section_example_checks()
    c12_ok = c12 == LinPoly.constant(3, 1)
    ok = all(checks.values()) and c12_ok
    failed = [k for k, v in checks.items() if not v]
    detail = (f"{sum(checks.values())}/{len(checks)} consistent values and memberships match; "
              f"printed c_H1H2 = 1 not reproduced, the definition gives {c12}")
    if failed:
        detail += f"; mismatches: {failed}"
    record(9, ok, detail if not ok else "all printed values reproduced")
    # the eight self-consistent values and all memberships must hold regardless
    assert all(checks.values()), failed


@pytest.mark.xfail(strict=True, reason="the printed c_H1H2 = 1 contradicts "
                   "a_H1 - a_H2 = -(y - 0); the computed value is 0")
def test_criterion_9_printed_c_h1h2():
    _, c12 = section_example_checks()
    assert c12 == LinPoly.constant(3, 1)


def test_criterion_10_phi_map():
    systems = [("rank1", rank1())]
    k = 0
    while len(systems) < 11:
        rng = random.Random(9000 + k)
        k += 1
        s = random_rank1(rng, 1) if k % 3 == 0 else random_seed_system(rng, 1)
        if is_irreducible(s, 0).status == "AbsolutelyIrreducible":
            systems.append((f"seed {9000 + k - 1}", s))
    passed, shapes = 0, []
    for name, s in systems:
        phi, rep, _ = phi_map(s, 0)
        shapes.append(phi.shape)
        passed += rep.passed
    ok = passed == len(systems)
    record(10, ok, f"{passed}/{len(systems)} systems: surjective, both kernel forms, "
                   f"intertwining; shapes {sorted(set(shapes))}")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
