"""Dense exact linear algebra over the rationals."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import FullKernel, NonRationalSpectrum, NotInvariant
from .exact import ONE, ZERO, Q, Rational, fmt, parse_rational
from .errors import ParseError


class Matrix:
    """Immutable rows x cols matrix of rationals."""

    __slots__ = ("rows", "ncols", "_hash")

    def __init__(self, rows: Iterable[Sequence], ncols: int | None = None):
        rs = tuple(tuple(Q(v) for v in r) for r in rows)
        if ncols is None:
            if not rs:
                raise ValueError("empty matrix needs an explicit column count")
            ncols = len(rs[0])
        for r in rs:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
        self.rows = rs
        self.ncols = ncols
        self._hash = None

    @classmethod
    def _raw(cls, rows, ncols):
        # trusted constructor: rows are already tuples of mpq
        m = cls.__new__(cls)
        m.rows = rows
        m.ncols = ncols
        m._hash = None
        return m

    @classmethod
    def zeros(cls, r: int, c: int | None = None) -> "Matrix":
        c = r if c is None else c
        row = (ZERO,) * c
        return cls._raw((row,) * r, c)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._raw(tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)), n)

    @classmethod
    def diag(cls, values: Sequence) -> "Matrix":
        vs = [Q(v) for v in values]
        n = len(vs)
        return cls._raw(tuple(tuple(vs[i] if i == j else ZERO for j in range(n)) for i in range(n)), n)

    @classmethod
    def scalar(cls, n: int, s) -> "Matrix":
        return cls.diag([s] * n)

    @classmethod
    def unit(cls, r: int, c: int, i: int, j: int) -> "Matrix":
        rows = [[ZERO] * c for _ in range(r)]
        rows[i][j] = ONE
        return cls(rows)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int) -> "Matrix":
        if not cols:
            return cls._raw(((),) * nrows, 0)
        return cls(list(zip(*cols)))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple:
        return (len(self.rows), self.ncols)

    def is_square(self) -> bool:
        return len(self.rows) == self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list:
        return [self.column(j) for j in range(self.ncols)]

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.ncols == other.ncols and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ncols, self.rows))
        return self._hash

    def __repr__(self):
        return "Matrix(" + repr([[fmt(v) for v in r] for r in self.rows]) + ")"

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix._raw(tuple(tuple(a + b for a, b in zip(r, s))
                                 for r, s in zip(self.rows, other.rows)), self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix._raw(tuple(tuple(a - b for a, b in zip(r, s))
                                 for r, s in zip(self.rows, other.rows)), self.ncols)

    def __neg__(self) -> "Matrix":
        return Matrix._raw(tuple(tuple(-a for a in r) for r in self.rows), self.ncols)

    def scale(self, s) -> "Matrix":
        s = Q(s)
        if not s:
            return Matrix.zeros(self.nrows, self.ncols)
        return Matrix._raw(tuple(tuple(a * s for a in r) for r in self.rows), self.ncols)

    def __rmul__(self, s):
        return self.scale(s)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        cols = other.rows
        nc = other.ncols
        for r in self.rows:
            acc = [ZERO] * nc
            for a, orow in zip(r, cols):
                if a:
                    for j, b in enumerate(orow):
                        if b:
                            acc[j] += a * b
            out.append(tuple(acc))
        return Matrix._raw(tuple(out), nc)

    def apply(self, v: Sequence) -> tuple:
        return tuple(sum((a * b for a, b in zip(r, v) if a and b), ZERO) for r in self.rows)

    @property
    def T(self) -> "Matrix":
        if not self.rows:
            return Matrix._raw(((),) * self.ncols, 0)
        return Matrix._raw(tuple(zip(*self.rows)), self.nrows)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._raw(tuple(tuple(self.rows[i][j] for j in cols) for i in rows), len(cols))

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        return Matrix._raw(tuple(r[c0:c1] for r in self.rows[r0:r1]), c1 - c0)

    def commutator(self, other: "Matrix") -> "Matrix":
        return self @ other - other @ self

    def trace(self) -> Rational:
        return sum((self.rows[i][i] for i in range(self.nrows)), ZERO)

    def is_diagonal(self) -> bool:
        return all(not v for i, r in enumerate(self.rows) for j, v in enumerate(r) if i != j)

    def is_upper_triangular(self) -> bool:
        return all(not v for i, r in enumerate(self.rows) for j, v in enumerate(r) if j < i)

    def is_lower_triangular(self) -> bool:
        return all(not v for i, r in enumerate(self.rows) for j, v in enumerate(r) if j > i)

    def flat(self) -> list:
        return [v for r in self.rows for v in r]

    def to_json(self) -> list:
        return [[fmt(v) for v in r] for r in self.rows]

    @classmethod
    def from_json(cls, doc, path: str = "matrix", shape: tuple | None = None) -> "Matrix":
        if not isinstance(doc, list) or not all(isinstance(r, list) for r in doc):
            raise ParseError(f"{path}: expected array of arrays")
        rows = [[parse_rational(v, f"{path}[{i}][{j}]") for j, v in enumerate(r)]
                for i, r in enumerate(doc)]
        if shape is not None:
            if len(rows) != shape[0] or any(len(r) != shape[1] for r in rows):
                raise ParseError(f"{path}: expected shape {shape[0]}x{shape[1]}")
        if not rows:
            raise ParseError(f"{path}: empty matrix")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ParseError(f"{path}: ragged rows")
        return cls(rows)

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")


def block_diag(mats: Sequence[Matrix]) -> Matrix:
    total_c = sum(m.ncols for m in mats)
    out = []
    off = 0
    for m in mats:
        left = (ZERO,) * off
        right = (ZERO,) * (total_c - off - m.ncols)
        for r in m.rows:
            out.append(left + r + right)
        off += m.ncols
    return Matrix._raw(tuple(out), total_c)


def repeat_diag(m: Matrix, q: int) -> Matrix:
    """m ⊕ m ⊕ ... ⊕ m (q copies)."""
    return block_diag([m] * q)


def from_blocks(grid: Sequence[Sequence[Matrix | None]], rsizes: Sequence[int],
                csizes: Sequence[int]) -> Matrix:
    """Assemble a block matrix; None entries are zero blocks."""
    out = []
    for bi, brow in enumerate(grid):
        for r in range(rsizes[bi]):
            row: list = []
            for bj, blk in enumerate(brow):
                if blk is None:
                    row.extend([ZERO] * csizes[bj])
                else:
                    row.extend(blk.rows[r])
            out.append(tuple(row))
    return Matrix._raw(tuple(out), sum(csizes))


def hstack(mats: Sequence[Matrix]) -> Matrix:
    rows = tuple(tuple(v for m in mats for v in m.rows[i]) for i in range(mats[0].nrows))
    return Matrix._raw(rows, sum(m.ncols for m in mats))


def vstack(mats: Sequence[Matrix]) -> Matrix:
    return Matrix._raw(tuple(r for m in mats for r in m.rows), mats[0].ncols)


# ---------------------------------------------------------------- elimination

def _rref_rows(rows: list, ncols: int):
    """In-place Gauss-Jordan on a list of lists. Returns pivot columns."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        p = None
        for i in range(r, nrows):
            if rows[i][c]:
                p = i
                break
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        prow = rows[r]
        inv = ONE / prow[c]
        if inv != 1:
            prow = [v * inv for v in prow]
            rows[r] = prow
        nz = [j for j in range(c, ncols) if prow[j]]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    row = rows[i]
                    for j in nz:
                        row[j] -= f * prow[j]
        pivots.append(c)
        r += 1
    return pivots


def rref(M: Matrix):
    """Reduced row echelon form: (R, pivot columns, rank)."""
    rows = [list(r) for r in M.rows]
    piv = _rref_rows(rows, M.ncols)
    R = Matrix._raw(tuple(tuple(r) for r in rows), M.ncols)
    return R, piv, len(piv)


def rank(M: Matrix) -> int:
    return rref(M)[2]


def det(M: Matrix) -> Rational:
    if not M.is_square():
        raise ValueError("determinant of a non-square matrix")
    rows = [list(r) for r in M.rows]
    n = len(rows)
    d = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c]), None)
        if p is None:
            return ZERO
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            d = -d
        pv = rows[c][c]
        d *= pv
        for i in range(c + 1, n):
            f = rows[i][c]
            if f:
                f = f / pv
                ri, rc = rows[i], rows[c]
                for j in range(c, n):
                    if rc[j]:
                        ri[j] -= f * rc[j]
    return d


def inverse(M: Matrix) -> Matrix:
    if not M.is_square():
        raise ValueError("inverse of a non-square matrix")
    n = M.nrows
    rows = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(M.rows)]
    piv = _rref_rows(rows, 2 * n)
    if len(piv) < n or piv[n - 1] != n - 1:
        raise ZeroDivisionError("matrix is singular")
    return Matrix._raw(tuple(tuple(r[n:]) for r in rows), n)


def solve_left(V: Matrix, W: Matrix) -> Matrix | None:
    """X with V X = W, for V of full column rank; None when no solution exists."""
    m = V.ncols
    rows = [list(a) + list(b) for a, b in zip(V.rows, W.rows)]
    piv = _rref_rows(rows, m + W.ncols)
    if any(p >= m for p in piv):
        return None
    if piv != list(range(m)):
        raise ValueError("left factor does not have full column rank")
    return Matrix._raw(tuple(tuple(rows[i][m:]) for i in range(m)), W.ncols)


# ---------------------------------------------------------------- subspaces

@dataclass(frozen=True)
class Subspace:
    """Subspace of Q^ambient, basis rows in reduced row echelon form."""

    ambient: int
    basis: tuple
    pivots: tuple

    @classmethod
    def zero(cls, ambient: int) -> "Subspace":
        return cls(ambient, (), ())

    @classmethod
    def full(cls, ambient: int) -> "Subspace":
        I = Matrix.identity(ambient)
        return cls(ambient, I.rows, tuple(range(ambient)))

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient: int) -> "Subspace":
        rows = [[Q(v) for v in vec] for vec in vectors]
        if any(len(r) != ambient for r in rows):
            raise ValueError("vector length does not match ambient dimension")
        if not rows:
            return cls.zero(ambient)
        piv = _rref_rows(rows, ambient)
        return cls(ambient, tuple(tuple(rows[i]) for i in range(len(piv))), tuple(piv))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def is_full(self) -> bool:
        return len(self.basis) == self.ambient

    def contains(self, v: Sequence) -> bool:
        w = [Q(x) for x in v]
        for row, p in zip(self.basis, self.pivots):
            f = w[p]
            if f:
                for j, b in enumerate(row):
                    if b:
                        w[j] -= f * b
        return not any(w)

    def reduce(self, v: Sequence) -> list:
        w = [Q(x) for x in v]
        for row, p in zip(self.basis, self.pivots):
            f = w[p]
            if f:
                for j, b in enumerate(row):
                    if b:
                        w[j] -= f * b
        return w

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(list(self.basis) + list(other.basis), self.ambient)

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def column_matrix(self) -> Matrix:
        """Basis vectors as columns (ambient x dim)."""
        return Matrix.from_columns(self.basis, self.ambient)

    def is_invariant(self, M: Matrix) -> bool:
        return all(self.contains(M.apply(v)) for v in self.basis)

    def to_json(self) -> dict:
        return {"ambient": self.ambient, "basis": [[fmt(v) for v in r] for r in self.basis]}


def direct_sum(spaces: Sequence[Subspace]) -> Subspace:
    total = sum(s.ambient for s in spaces)
    vecs = []
    off = 0
    for s in spaces:
        for b in s.basis:
            vecs.append((ZERO,) * off + tuple(b) + (ZERO,) * (total - off - s.ambient))
        off += s.ambient
    return Subspace.span(vecs, total)


def kernel_basis(M: Matrix) -> Subspace:
    R, piv, rk = rref(M)
    n = M.ncols
    pivset = set(piv)
    vecs = []
    for f in range(n):
        if f in pivset:
            continue
        v = [ZERO] * n
        v[f] = ONE
        for i, p in enumerate(piv):
            v[p] = -R.rows[i][f]
        vecs.append(v)
    return Subspace.span(vecs, n)


def image(M: Matrix) -> Subspace:
    return Subspace.span(M.columns(), M.nrows)


def complement_basis(K: Subspace) -> Matrix:
    """Unit columns e_j for the non-pivot indices of K."""
    if K.is_full():
        raise FullKernel("subspace is the whole space; no complement")
    piv = set(K.pivots)
    idx = [j for j in range(K.ambient) if j not in piv]
    cols = []
    for j in idx:
        e = [ZERO] * K.ambient
        e[j] = ONE
        cols.append(e)
    return Matrix.from_columns(cols, K.ambient)


def quotient_basis(K: Subspace):
    """P = [K basis | unit complement], P^-1 and the quotient map Q."""
    if K.is_full():
        raise FullKernel(f"kernel fills the whole {K.ambient}-dimensional space")
    C = complement_basis(K)
    if K.is_zero():
        P = Matrix.identity(K.ambient)
        return P, P, P, C
    P = hstack([K.column_matrix(), C])
    Pinv = inverse(P)
    Qm = Pinv.block(K.dim, K.ambient, 0, K.ambient)
    return P, Pinv, Qm, C


def quotient_action(mats: Sequence[Matrix], K: Subspace):
    """Induced action of each matrix on Q^ambient / K.

    Returns (bars, P, Q). Raises NotInvariant if some matrix does not map K
    into itself, FullKernel if K is everything.
    """
    P, Pinv, Qm, C = quotient_basis(K)
    if K.is_zero():
        return list(mats), P, Qm
    nonpiv = [j for j in range(K.ambient) if j not in set(K.pivots)]
    Kc = K.column_matrix()
    bars = []
    for idx, M in enumerate(mats):
        QM = Qm @ M
        if not (QM @ Kc).is_zero():
            raise NotInvariant(f"matrix #{idx} does not preserve the subspace")
        bars.append(QM.submatrix(range(QM.nrows), nonpiv))
    return bars, P, Qm


# ---------------------------------------------------------------- algebras

class _Echelon:
    """Incremental echelon basis; each stored row is zero at the pivots of earlier rows."""

    def __init__(self, length: int):
        self.length = length
        self.rows: list = []
        self.pivots: list = []

    def reduce(self, v: list) -> list:
        for row, p in zip(self.rows, self.pivots):
            f = v[p]
            if f:
                for j, b in enumerate(row):
                    if b:
                        v[j] -= f * b
        return v

    def add(self, v: Sequence) -> bool:
        w = self.reduce([Q(x) for x in v])
        p = next((j for j, x in enumerate(w) if x), None)
        if p is None:
            return False
        inv = ONE / w[p]
        w = [x * inv for x in w]
        # keep earlier rows zero at the new pivot as well, so reduction order is irrelevant
        for row in self.rows:
            f = row[p]
            if f:
                for j, b in enumerate(w):
                    if b:
                        row[j] -= f * b
        self.rows.append(w)
        self.pivots.append(p)
        return True

    def __len__(self):
        return len(self.rows)


def spin_algebra_dim(gens: Sequence[Matrix]) -> int:
    """Dimension of the unital algebra generated by gens.

    The span of I is closed under left multiplication by the generators;
    every word in the generators is reached this way.
    """
    if not gens:
        raise ValueError("need at least one generator")
    N = gens[0].nrows
    ech = _Echelon(N * N)
    I = Matrix.identity(N)
    ech.add(I.flat())
    queue = [I]
    gens = [g for g in gens if not g.is_zero()]
    while queue and len(ech) < N * N:
        B = queue.pop()
        for g in gens:
            C = g @ B
            if ech.add(C.flat()):
                queue.append(C)
                if len(ech) == N * N:
                    break
    return len(ech)


def algebra_basis(gens: Sequence[Matrix], limit: int | None = None) -> list:
    """A spanning list of algebra elements (words), used to look for invariant subspaces."""
    N = gens[0].nrows
    ech = _Echelon(N * N)
    I = Matrix.identity(N)
    ech.add(I.flat())
    out = [I]
    queue = [I]
    while queue and len(ech) < N * N:
        B = queue.pop(0)
        for g in gens:
            C = g @ B
            if ech.add(C.flat()):
                queue.append(C)
                out.append(C)
        if limit and len(out) >= limit:
            break
    return out


def spin(vectors: Sequence[Sequence], gens: Sequence[Matrix]) -> Subspace:
    """Smallest subspace containing the vectors and stable under every generator."""
    if not vectors:
        raise ValueError("nothing to spin")
    n = len(vectors[0])
    ech = _Echelon(n)
    queue = []
    for v in vectors:
        if ech.add(v):
            queue.append(tuple(Q(x) for x in v))
    while queue and len(ech) < n:
        v = queue.pop()
        for g in gens:
            w = g.apply(v)
            if ech.add(w):
                queue.append(w)
    return Subspace.span(ech.rows, n)


# ---------------------------------------------------------------- spectra

def charpoly(M: Matrix) -> list:
    """Coefficients [c_0, ..., c_n] of det(t I - M), highest degree last (monic).

    Faddeev-LeVerrier recursion; fine over Q since it only divides by integers.
    """
    n = M.nrows
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    Mk = Matrix.zeros(n)
    I = Matrix.identity(n)
    for k in range(1, n + 1):
        Mk = M @ Mk + I.scale(coeffs[n - k + 1])
        coeffs[n - k] = -(M @ Mk).trace() / k
    return coeffs


def rational_eigenvalues(M: Matrix) -> list:
    """Distinct eigenvalues with algebraic multiplicity, sorted ascending.

    Raises NonRationalSpectrum if the characteristic polynomial does not
    split over Q.
    """
    if not M.is_square():
        raise ValueError("eigenvalues of a non-square matrix")
    if M.is_upper_triangular() or M.is_lower_triangular():
        counts: dict = {}
        for i in range(M.nrows):
            counts[M.rows[i][i]] = counts.get(M.rows[i][i], 0) + 1
        return sorted(counts.items())
    import sympy

    cs = charpoly(M)
    t = sympy.Symbol("t")
    poly = sympy.Poly([sympy.Rational(int(c.numerator), int(c.denominator)) for c in reversed(cs)],
                      t, domain=sympy.QQ)
    _, factors = poly.factor_list()
    out = {}
    for fac, mult in factors:
        if fac.degree() == 0:
            continue
        if fac.degree() > 1:
            raise NonRationalSpectrum(f"irreducible factor {fac.as_expr()} of degree {fac.degree()}")
        a, b = fac.all_coeffs()
        root = -sympy.Rational(b) / sympy.Rational(a)
        root = Q(f"{root.p}/{root.q}")
        out[root] = out.get(root, 0) + mult
    return sorted(out.items())


def eigenspace(M: Matrix, lam) -> Subspace:
    n = M.nrows
    return kernel_basis(M - Matrix.scalar(n, lam))
