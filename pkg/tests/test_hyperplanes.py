from __future__ import annotations

import random
from fractions import Fraction

import pytest

from snmax.algebra import PolyN
from snmax.hyperplanes import algorithm1, all_subsets, hyperplane_search, null_vector


def test_null_vector_is_orthogonal():
    rng = random.Random(1)
    for _ in range(30):
        rows = [[rng.randint(-5, 5) for _ in range(5)] for _ in range(4)]
        t = null_vector(rows)
        assert all(sum(a * b for a, b in zip(r, t)) == 0 for r in rows)


def test_coordinate_functionals():
    # rows are repeated coordinate functionals e_j; a standard basis vector kills all rows but one group
    v = []
    for j in range(5):
        row = [0] * 5
        row[j] = 1
        v.extend([row] * (j + 2))
    res = algorithm1(v)
    fast = hyperplane_search(v, n0=1, threads=1)
    assert res.n0 == fast.n0 == len(v) - 2


def test_engines_agree_on_random_instances():
    rng = random.Random(3)
    for trial in range(6):
        n = rng.randint(8, 14)
        v = [[rng.choice([0, 0, 1, -1, 2]) for _ in range(5)] for _ in range(n)]
        ref = algorithm1(v)
        fast = hyperplane_search(v, n0=0, chunk=97, threads=1)
        assert ref.n0 == fast.n0


def test_generic_mode_uses_polynomial_zero_testing():
    n = PolyN.var()
    v = [[1, n, 0, 0, 0], [n, n * n, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0],
         [0, 0, 0, 0, 1], [1, 0, 0, 0, 1], [0, 1, 1, 0, 0], [n - 2, 0, 0, 0, 0]]
    ref = algorithm1([[PolyN.coerce(x) for x in r] for r in v])
    fast = hyperplane_search(v, threads=1)
    assert ref.n0 == fast.n0
    assert hyperplane_search(v, n0=2, threads=1).n0 >= fast.n0


def test_subsets_enumeration():
    s = all_subsets(7)
    assert s.shape == (35, 4) and tuple(s[0]) == (0, 1, 2, 3) and tuple(s[-1]) == (3, 4, 5, 6)
