"""Independent reference computations built on sympy only.

Nothing here imports the package's linear algebra or transforms, so
agreement with these functions is evidence rather than tautology.
"""
import sympy as sp


def to_sympy(M):
    """pfaffml Matrix -> sympy Matrix of Rationals."""
    return sp.Matrix([[sp.Rational(int(v.numerator), int(v.denominator)) for v in row]
                      for row in M.rows])


def symbolic_coefficients(sysm):
    """The coefficient matrices A_{x_i}(x) as sympy rational functions."""
    xs = sp.symbols(f"t0:{sysm.n}")
    N = sysm.N
    out = []
    for i in range(sysm.n):
        M = to_sympy(sysm.A_lin[i])
        for j in range(sysm.n):
            if j != i:
                M = M + to_sympy(sysm.quad(i, j)) * xs[j]
        for H in sysm.planes:
            c = H.poly.coeffs[i]
            if c:
                f = sp.Rational(int(H.poly.const.numerator), int(H.poly.const.denominator))
                f += sum(sp.Rational(int(a.numerator), int(a.denominator)) * xs[k]
                         for k, a in enumerate(H.poly.coeffs))
                cc = sp.Rational(int(c.numerator), int(c.denominator))
                M = M + to_sympy(sysm.residues[H.label]) * cc / f
        out.append(M if M.shape == (N, N) else sp.zeros(N))
    return xs, out


def symbolic_integrable(sysm) -> bool:
    """[A_i, A_j] == 0 identically, decided by sympy cancellation."""
    _, A = symbolic_coefficients(sysm)
    for i in range(len(A)):
        for j in range(i + 1, len(A)):
            C = A[i] * A[j] - A[j] * A[i]
            if any(sp.cancel(sp.together(e)) != 0 for e in C):
                return False
    return True


def dr_convolution(residues, beta):
    """Additive middle convolution of a Fuchsian tuple (A_1, ..., A_q).

    Builds the convolution matrices C_i, the subspaces K = sum ker A_i (in
    block i) and K_inf = ker(A + beta) embedded diagonally, and returns the
    induced tuple on the quotient, in an arbitrary sympy-chosen basis.
    """
    A = [sp.Matrix(a) for a in residues]
    q, N = len(A), A[0].shape[0]
    beta = sp.Rational(beta)
    C = []
    for i in range(q):
        Ci = sp.zeros(q * N)
        for j in range(q):
            blk = A[j] + (beta * sp.eye(N) if i == j else sp.zeros(N))
            Ci[i * N:(i + 1) * N, j * N:(j + 1) * N] = blk
        C.append(Ci)
    vecs = []
    for i, a in enumerate(A):
        for v in a.nullspace():
            w = sp.zeros(q * N, 1)
            w[i * N:(i + 1) * N, 0] = v
            vecs.append(w)
    total = sum(A, sp.zeros(N)) + beta * sp.eye(N)
    for v in total.nullspace():
        vecs.append(sp.Matrix.vstack(*([v] * q)))
    if vecs:
        K = sp.Matrix.hstack(*vecs)
        K = K.T.rref()[0].T[:, :K.rank()]
    else:
        K = sp.zeros(q * N, 0)
    k = K.shape[1]
    # complete K to a basis with unit vectors
    basis = K
    for e in range(q * N):
        cand = sp.Matrix.hstack(basis, sp.eye(q * N)[:, e])
        if cand.rank() > basis.rank():
            basis = cand
    Pinv = basis.inv()
    return [(Pinv * c * basis)[k:, k:] for c in C], k


def gauss_tuple(a, b, beta):
    """Closed-form convolution of the rank-1 two-pole tuple (a, b).

    For a, b nonzero and beta (a + b + beta) nonzero the kernels vanish and
    the result is C_1 = [[a+beta, b], [0, 0]], C_2 = [[0, 0], [a, b+beta]].
    """
    a, b, beta = sp.Rational(a), sp.Rational(b), sp.Rational(beta)
    return [sp.Matrix([[a + beta, b], [0, 0]]), sp.Matrix([[0, 0], [a, b + beta]])]


def joint_conjugate(As, Bs):
    """Solve F A_k = B_k F for all k with sympy; return an invertible solution or None."""
    N = As[0].shape[0]
    syms = sp.symbols(f"f0:{N * N}")
    F = sp.Matrix(N, N, syms)
    eqs = []
    for a, b in zip(As, Bs):
        eqs += list(F * a - b * F)
    sol = sp.linsolve(eqs, syms)
    (gen,) = list(sol)
    free = sorted(set().union(*[e.free_symbols for e in gen]), key=str)
    Fg = sp.Matrix(N, N, list(gen))
    for trial in range(1, 12):
        sub = {s: sp.Integer((trial * (k + 3)) % 7 - 3 or 1) for k, s in enumerate(free)}
        Ft = Fg.subs(sub)
        if Ft.det() != 0:
            return Ft
    return None
