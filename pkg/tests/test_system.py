import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from pfaffml.arrangement import Arrangement, Hyperplane
from pfaffml.corpus import builtin
from pfaffml.errors import ParseError
from pfaffml.exact import LinPoly, Q
from pfaffml.linalg import Matrix, inverse
from pfaffml.samples import random_seed_system, twist
from pfaffml.system import (PfaffianSystem, coefficient_numerators, dumps, load, loads,
                            make_system, normalize_S, same_system, save, spectral_blocks,
                            validate)

X, Y = LinPoly.var(2, 0), LinPoly.var(2, 1)


def rank1():
    return builtin("rank1").system


# ------------------------------------------------------------------ validate

def test_rank1_is_valid():
    assert validate(rank1()) == []


def test_asymmetric_quad_reported():
    s = PfaffianSystem(2, 1, (Matrix.zeros(1), Matrix.zeros(1)),
                       {(0, 1): Matrix([[1]]), (1, 0): Matrix([[2]])},
                       Arrangement(2, (Hyperplane(X, "H1"),)), {"H1": Matrix([[1]])})
    assert any(v.startswith("symmetry") for v in validate(s))


def test_duplicate_planes_reported():
    s = PfaffianSystem(2, 1, (Matrix.zeros(1), Matrix.zeros(1)), {},
                       Arrangement(2, (Hyperplane(X, "H1"), Hyperplane(2 * X, "H2"))),
                       {"H1": Matrix([[1]]), "H2": Matrix([[1]])})
    assert any(v.startswith("dedup") for v in validate(s))


def test_make_system_merges_coincident_planes_and_drops_zero():
    s = make_system(2, 1, None, {}, [(X, Matrix([[Q(1) / 2]])), (2 * X, Matrix([[Q(1) / 3]])),
                                     (X - Y, Matrix([[0]]))])
    assert len(s.planes) == 1
    assert s.residues["H1"] == Matrix([[Q(5) / 6]])


def test_same_system_ignores_labels():
    a = make_system(2, 1, None, {}, [(X, Matrix([[1]])), (Y - 1, Matrix([[2]]))])
    b = make_system(2, 1, None, {}, [(Y - 1, Matrix([[2]])), (X, Matrix([[1]]))], direction=1)
    assert same_system(a, b)


# ------------------------------------------------------------------ coefficients

def test_coefficient_numerators_rank1():
    (lin, quad), terms = coefficient_numerators(rank1(), 0)
    assert lin.is_zero() and all(m.is_zero() for m in quad.values())
    got = {str(p): m[0, 0] for p, m in terms}
    assert got == {"x": Q(1) / 2, "x-1": Q(1) / 3, "x-y": Q(1) / 5}
    _, terms_y = coefficient_numerators(rank1(), 1)
    assert [(str(p), m[0, 0]) for p, m in terms_y] == [("-x+y", Q(1) / 5)]


def test_coefficient_numerators_empty_direction():
    s = make_system(2, 1, None, {}, [(X, Matrix([[1]]))])
    assert coefficient_numerators(s, 1)[1] == []


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_coefficient_numerators_faithful(seed):
    rng = random.Random(seed)
    s = random_seed_system(rng, rng.choice([1, 2]))
    for i in range(s.n):
        (lin, quad), terms = coefficient_numerators(s, i)
        done = 0
        while done < 5:
            pt = [Q(rng.randint(-20, 20)) / rng.randint(1, 7) for _ in range(s.n)]
            if any(H.poly(pt) == 0 for H in s.planes):
                continue
            M = lin
            for j, m in quad.items():
                M = M + m.scale(pt[j])
            for pole, R in terms:
                M = M + R.scale(1 / pole(pt))
            assert M == s.coefficient_at(i, pt)
            done += 1


# ------------------------------------------------------------------ spectral normal form

def test_normalize_S_fixed_point():
    s = builtin("phi1").system
    out, blocks = normalize_S(s, 1)      # S_y = diag(0, 0, -x) is already sorted
    assert blocks.gauge == Matrix.identity(3) and out is s


def test_normalize_S_two_by_two():
    s = make_system(1, 2, [Matrix([[0, 1], [0, 1]])], {}, [(LinPoly.var(1, 0), Matrix.diag([1, 2]))])
    b = spectral_blocks(s, 0)
    assert [(str(a), m) for a, m in b.branches] == [("0", 1), ("1", 1)]
    assert b.gauge == Matrix([[1, 1], [0, 1]])


def test_phi1_branches_in_y():
    b = spectral_blocks(builtin("phi1").system, 1)
    assert [(str(a), m) for a, m in b.branches] == [("0", 2), ("-x", 1)]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_normalize_S_diagonalizes(seed):
    rng = random.Random(seed)
    s = random_seed_system(rng, rng.choice([1, 2]))
    out, blocks = normalize_S(s, 0)
    assert out.conjugate(inverse(blocks.gauge)) == s
    for _ in range(3):
        pt = [Q(rng.randint(-9, 9)) for _ in range(s.n)]
        S = out.A_lin[0]
        for z in range(1, s.n):
            S = S + out.quad(0, z).scale(pt[z])
        expect = [a(pt) for a, m in blocks.branches for _ in range(m)]
        assert S == Matrix.diag(expect)


# ------------------------------------------------------------------ persistence

def test_round_trip_fixtures():
    for name in ("rank1", "phi1", "f1", "cf4-six", "cf4-bar", "arr3d-example"):
        s = builtin(name).system
        text = dumps(s)
        assert loads(text) == s
        assert dumps(loads(text)) == text


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_round_trip_random(seed):
    rng = random.Random(seed)
    s = random_seed_system(rng, rng.choice([1, 2]))
    if s.N > 1:
        s = twist(s, rng)
    assert load(json.loads(dumps(s))) == s


def test_missing_residue_is_parse_error():
    doc = save(rank1())
    del doc["residues"]["H2"]
    with pytest.raises(ParseError, match="residues.H2"):
        load(doc)


def test_zero_denominator_is_parse_error():
    doc = save(rank1())
    doc["residues"]["H1"] = [["1/0"]]
    with pytest.raises(ParseError, match=r"residues\.H1\[0\]\[0\]"):
        load(doc)


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("n"),
    lambda d: d.__setitem__("N", 0),
    lambda d: d.__setitem__("A_lin", [[["0"]]]),
    lambda d: d["residues"].__setitem__("H9", [["1"]]),
    lambda d: d["residues"].__setitem__("H1", [["1", "2"]]),
    lambda d: d.__setitem__("A_quad", [{"i": 0, "j": 0, "mat": [["1"]]}]),
    lambda d: d["residues"].__setitem__("H1", [[0.5]]),
])
def test_malformed_documents(mutate):
    doc = save(rank1())
    mutate(doc)
    with pytest.raises(ParseError):
        load(doc)


def test_invalid_json_text():
    with pytest.raises(ParseError):
        loads("{not json")
