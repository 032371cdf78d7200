import random

import pytest
import sympy
from sympy.matrices.normalforms import hermite_normal_form as sympy_hnf
from sympy.matrices.normalforms import smith_normal_form

from fincox.lattice import (
    column_lattice_hnf,
    determinant,
    hermite_normal_form,
    in_lattice,
    integer_inverse,
    pivot_columns,
    reduce_mod_lattice,
    smith_invariants,
    solve_integer,
)


def _random_matrix(rng, m, n, lo=-6, hi=6):
    return [[rng.randint(lo, hi) for _ in range(n)] for _ in range(m)]


def _spans_same(a, b):
    """Row lattices equal, judged by sympy's own Hermite form of the transposes."""
    if not b:
        return not any(any(r) for r in a)
    return sympy_hnf(sympy.Matrix(a).T) == sympy_hnf(sympy.Matrix(b).T)


def test_hnf_shape_and_lattice():
    rng = random.Random(1)
    for _ in range(150):
        m, n = rng.randint(1, 6), rng.randint(1, 5)
        a = _random_matrix(rng, m, n)
        h = hermite_normal_form(a)
        assert sympy.Matrix(a).rank() == len(h)
        piv = pivot_columns(h)
        assert piv == sorted(set(piv))
        for k, (row, col) in enumerate(zip(h, piv)):
            assert row[col] > 0
            assert all(v == 0 for v in row[:col])
            for above in h[:k]:
                assert 0 <= above[col] < row[col]
        assert _spans_same(a, h)


def test_hnf_is_canonical():
    rng = random.Random(2)
    for _ in range(60):
        a = _random_matrix(rng, 4, 4)
        u = [[1, 0, 0, 0], [3, 1, 0, 0], [-2, 5, 1, 0], [1, 1, 1, 1]]
        mixed = (sympy.Matrix(u) * sympy.Matrix(a)).tolist()
        assert hermite_normal_form(mixed) == hermite_normal_form(a)


def test_smith_matches_sympy():
    rng = random.Random(3)
    for _ in range(120):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        a = _random_matrix(rng, m, n)
        snf = smith_normal_form(sympy.Matrix(a), domain=sympy.ZZ)
        expected = sorted(abs(snf[i, i]) for i in range(min(m, n)) if snf[i, i] != 0)
        got = smith_invariants(a)
        assert sorted(got) == expected
        assert all(got[k + 1] % got[k] == 0 for k in range(len(got) - 1))


def test_determinant_matches_sympy():
    rng = random.Random(4)
    for n in range(1, 7):
        for _ in range(20):
            a = _random_matrix(rng, n, n)
            assert determinant(a) == sympy.Matrix(a).det()


def test_reduce_mod_lattice_is_canonical():
    rng = random.Random(5)
    basis = hermite_normal_form([[2, -1, 0], [-1, 2, -1], [0, -1, 2]])
    for _ in range(200):
        v = [rng.randint(-20, 20) for _ in range(3)]
        w = [rng.randint(-5, 5) for _ in range(3)]
        shift = [sum(c * row[j] for c, row in zip(w, basis)) for j in range(3)]
        r = reduce_mod_lattice(v, basis)
        assert reduce_mod_lattice(r, basis) == r
        assert reduce_mod_lattice([a + b for a, b in zip(v, shift)], basis) == r
        assert in_lattice([a - b for a, b in zip(v, r)], basis)


def test_solve_integer_and_inverse():
    m = [[2, 1], [1, 1]]
    assert integer_inverse(m) == [[1, -1], [-1, 2]]
    assert solve_integer([[2, 0], [0, 2]], [1, 0]) is None
    assert solve_integer([[2, 0], [0, 2]], [4, -2]) == (2, -1)
    with pytest.raises(ValueError):
        integer_inverse([[2, 0], [0, 1]])


def test_column_lattice():
    # columns (2,0) and (1,1) span the index-2 lattice
    assert column_lattice_hnf([[2, 1], [0, 1]]) == [[1, 1], [0, 2]]
