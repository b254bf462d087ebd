"""Seeded random systems for property suites and demos.

Everything is built from rank-1 seeds (always integrable) by transforms and
constant gauge twists, so integrability holds by construction.
"""
from __future__ import annotations

import random
from typing import Optional

from .exact import LinPoly, Q
from .linalg import Matrix, det
from .system import PfaffianSystem, make_system

_RES_POOL = [Q(v) for v in ("1/2", "1/3", "-1/2", "2/3", "-1/3", "1/4", "3/2", "-3/4",
                            "1/5", "-2/5", "5/3", "2/7", "-5/2", "3/5", "4/3")]


def rand_rational(rng: random.Random, pool=None):
    return rng.choice(pool or _RES_POOL)


def random_rank1(rng: random.Random, n: int = 1, q: Optional[int] = None,
                 irregular: Optional[bool] = None, fuchsian: bool = False) -> PfaffianSystem:
    """Rank-1 system with q constant poles in x, plus for n = 2 optional mixed
    or y-only planes. Satisfies the x-direction assumptions."""
    q = q or rng.randint(1, 3)
    poles = rng.sample(range(-3, 4), q)
    X = LinPoly.var(n, 0)
    res = [(X - a, Matrix([[rand_rational(rng)]])) for a in poles]
    if irregular is None:
        irregular = not fuchsian and rng.random() < 0.5
    A_lin = [Matrix([[0]]) for _ in range(n)]
    if irregular:
        A_lin[0] = Matrix([[rng.choice([-2, -1, 1, 2, Q("1/2")])]])
    A_quad = {}
    if n == 2:
        Y = LinPoly.var(n, 1)
        mixed = rng.random() < 0.5
        if mixed:
            res.append((X - Y * rng.choice([1, 2, -1]), Matrix([[rand_rational(rng)]])))
        if rng.random() < 0.6:
            res.append((Y - rng.choice([1, -1, 2]), Matrix([[rand_rational(rng)]])))
        if rng.random() < 0.5:
            A_lin[1] = Matrix([[rng.choice([-1, 1, 3])]])
        if not mixed and rng.random() < 0.5:
            A_quad[(0, 1)] = Matrix([[rng.choice([-1, 1, 2])]])
    return make_system(n, 1, A_lin, A_quad, res, direction=0)


def random_invertible(rng: random.Random, N: int, span: int = 2) -> Matrix:
    while True:
        M = Matrix([[rng.randint(-span, span) for _ in range(N)] for _ in range(N)])
        if det(M):
            return M


def twist(sys: PfaffianSystem, rng: random.Random) -> PfaffianSystem:
    """P^-1 sys P for a random small integer P."""
    return sys.conjugate(random_invertible(rng, sys.N))


def _outer(rng: random.Random, N: int, span: int) -> Matrix:
    """A rank-1 residue u v^T, so ker has dimension N - 1."""
    while True:
        u = [rng.randint(-span, span) for _ in range(N)]
        v = [rng.randint(-span, span) for _ in range(N)]
        if any(u) and any(v):
            c = rand_rational(rng)
            return Matrix([[c * a * b for b in v] for a in u])


def random_fuchsian(rng: random.Random, N: int, q: int, span: int = 2,
                    low_rank: float = 0.0) -> PfaffianSystem:
    """u' = sum A_i/(x - a_i) u with random small residues.

    With probability low_rank a residue is a rank-1 outer product, which
    makes the kernel spaces of the convolution nontrivial.
    """
    poles = rng.sample(range(-3, 4), q)
    X = LinPoly.var(1, 0)
    res = []
    for a in poles:
        if N > 1 and rng.random() < low_rank:
            res.append((X - a, _outer(rng, N, span)))
            continue
        while True:
            M = Matrix([[Q(rng.randint(-span, span)) + rand_rational(rng) * (i == j)
                         for j in range(N)] for i in range(N)])
            if not M.is_zero():
                break
        res.append((X - a, M))
    return make_system(1, N, None, {}, res, direction=0)


def random_seed_system(rng: random.Random, n: int, max_rank: int = 3) -> PfaffianSystem:
    """A system from a rank-1 seed, possibly transformed and twisted."""
    from .transforms import middle_convolution, middle_laplace

    seed = random_rank1(rng, n)
    kind = rng.random()
    sys = seed
    try:
        if kind < 0.35:
            sys = seed
        elif kind < 0.7:
            sys = middle_laplace(seed, 0).system
        else:
            X = LinPoly.var(n, 0)
            ml = middle_laplace(seed, 0).system
            planes = ml.canonical_direction_set(0)
            key = planes[0].poly
            sys = middle_convolution(seed, 0, {key: rand_rational(rng)}).system
    except Exception:
        sys = seed
    if sys.N > max_rank:
        sys = seed
    if sys.N > 1 and rng.random() < 0.6:
        sys = twist(sys, rng)
    return sys
