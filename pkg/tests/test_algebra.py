from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from snmax.algebra import (
    MatrixQN,
    N,
    PolyN,
    RatFuncN,
    determinant,
    in_kernel,
    in_row_span,
    inverse,
    nullspace_at,
    nullspace_generic,
    rank_at,
    rank_generic,
    rank_generic_report,
    solve_membership,
)
from snmax.algebra.poly import factored
from snmax.errors import BudgetError, ShapeError, SpecializationError

X = sympy.Symbol("N")

coeff_st = st.fractions(min_value=-20, max_value=20, max_denominator=6)
poly_st = st.lists(coeff_st, max_size=5).map(PolyN)


def to_sympy(p: PolyN):
    return sympy.Integer(0) + sum(sympy.Rational(c.numerator, c.denominator) * X**i for i, c in enumerate(p.coeffs))


def rat_to_sympy(r: RatFuncN):
    return to_sympy(r.num) / to_sympy(r.den)


@given(poly_st, poly_st)
def test_ring_operations_match_sympy(a, b):
    assert sympy.expand(to_sympy(a + b) - (to_sympy(a) + to_sympy(b))) == 0
    assert sympy.expand(to_sympy(a * b) - to_sympy(a) * to_sympy(b)) == 0
    assert sympy.expand(to_sympy(a - b) - (to_sympy(a) - to_sympy(b))) == 0


@given(poly_st, poly_st)
def test_divmod_and_gcd_match_sympy(a, b):
    if not b:
        with pytest.raises(ZeroDivisionError):
            divmod(a, b)
        return
    q, r = divmod(a, b)
    assert q * b + r == a and r.degree() < b.degree()
    g = a.gcd(b)
    ref = sympy.Poly(sympy.gcd(to_sympy(a), to_sympy(b)), X)
    if g:
        assert ref.degree() == g.degree() and g.leading_coefficient() == 1
        assert sympy.rem(to_sympy(a), to_sympy(g), X) == 0


@given(poly_st, st.integers(-30, 30))
def test_evaluation_matches_sympy(a, x):
    assert a.evaluate(x) == Fraction(str(to_sympy(a).subs(X, x)))


def test_polynomial_examples():
    p = N**2 - 3 * N + 1
    assert p.gcd(N - 2) == PolyN.coerce(1)
    assert p.evaluate(4) == 5
    expanded = (N - 4) * p**2
    assert expanded == N**5 - 10 * N**4 + 35 * N**3 - 50 * N**2 + 25 * N - 4
    assert str(p) == "N^2-3*N+1"
    assert factored(-expanded) == "-(N-4)*(N^2-3*N+1)^2"


@settings(max_examples=50)
@given(poly_st, poly_st.filter(bool), poly_st, poly_st.filter(bool))
def test_rational_functions_are_reduced_and_exact(a, b, c, d):
    r, s = RatFuncN(a, b), RatFuncN(c, d)
    assert r.den.leading_coefficient() == 1
    assert r.num.gcd(r.den) == PolyN.coerce(1) or not r.num
    assert sympy.simplify(rat_to_sympy(r + s) - (rat_to_sympy(r) + rat_to_sympy(s))) == 0
    assert sympy.simplify(rat_to_sympy(r * s) - rat_to_sympy(r) * rat_to_sympy(s)) == 0
    assert RatFuncN.from_json(r.to_json()) == r


def test_rational_function_display_and_poles():
    r = (N - 3) / (N * (N - 1) * (N - 2) * (N**2 - 3 * N + 1))
    assert str(r) == "(N-3)/(N*(N-1)*(N-2)*(N^2-3*N+1))"
    with pytest.raises(SpecializationError):
        r.evaluate(2)
    assert r.evaluate(4) == Fraction(1, 120)
    assert (RatFuncN(N) ** -2) == 1 / (N * N)


def _random_matrix(rng: random.Random, nr: int, nc: int, deg: int = 2, rank: int | None = None) -> MatrixQN:
    def entry():
        return PolyN([rng.randint(-3, 3) for _ in range(deg + 1)])
    if rank == 0:
        return MatrixQN([[0] * nc for _ in range(nr)], ncols=nc)
    if rank is None:
        return MatrixQN([[entry() for _ in range(nc)] for _ in range(nr)])
    left = [[entry() for _ in range(rank)] for _ in range(nr)]
    right = [[entry() for _ in range(nc)] for _ in range(rank)]
    return MatrixQN(left) @ MatrixQN(right)


def test_rank_examples():
    assert rank_generic(MatrixQN([[N, 1], [N**2, N]])) == 1
    ident = MatrixQN([[int(i == j) for j in range(5)] for i in range(5)])
    rep = rank_generic_report(ident)
    assert rep.rank == 5 and rep.exceptional == ()
    assert rank_at(ident, 17) == 5
    assert nullspace_generic(ident) == []
    assert nullspace_generic(MatrixQN([[1, N]])) == [[N, PolyN.coerce(-1)]]  # first entry made positive


def test_random_generic_rank_agrees_with_specialization():
    rng = random.Random(11)
    for _ in range(50):
        nr, nc = rng.randint(1, 6), rng.randint(1, 6)
        m = _random_matrix(rng, nr, nc, rank=rng.randint(0, min(nr, nc)))
        rep = rank_generic_report(m)
        bad = set(rep.integer_roots())
        n0 = next(x for x in range(rng.randint(2, 40), 200) if x not in bad)
        assert rank_at(m, n0) == rep.rank
        basis = nullspace_generic(m)
        assert rep.rank + len(basis) == nc
        for v in basis:
            assert all(not x for x in m.apply(v))
        assert rank_generic(m) == sympy.Matrix(
            [[rat_to_sympy(x) for x in row] for row in m.rows]).rank(simplify=True)


def test_kernel_at_point_and_membership():
    m = MatrixQN([[1, 1, 1], [1, N, N**2]])
    ker = nullspace_at(m, 3)
    assert len(ker) == 1 and all(x == 0 for x in m.substitute(3)[0]) is False
    assert in_kernel(m, ker[0], 3)
    assert in_row_span(m, [2, 1 + N, 1 + N**2])
    assert not in_row_span(m, [0, 0, 1])
    assert solve_membership(m, nullspace_generic(m)[0], mode="kernel")


def test_determinants():
    assert determinant(MatrixQN([[1, 0], [0, 1]])) == RatFuncN.coerce(1)
    assert determinant(MatrixQN([[N, 0], [0, N**2]])) == RatFuncN(N**3)
    rng = random.Random(4)
    for _ in range(10):
        a, b = _random_matrix(rng, 4, 4, 1), _random_matrix(rng, 4, 4, 1)
        assert determinant(a @ b) == determinant(a) * determinant(b)
        ref = sympy.Matrix([[to_sympy(x.num) for x in row] for row in a.rows]).det()
        assert sympy.expand(rat_to_sympy(determinant(a)) - ref) == 0
    with pytest.raises(ShapeError):
        determinant(MatrixQN([[1, 2]]))


def test_inverse():
    m = MatrixQN([[N, 1], [1, N]])
    w = inverse(m)
    assert w @ m == MatrixQN([[1, 0], [0, 1]])


def test_budget_guard():
    with pytest.raises(BudgetError):
        rank_generic(MatrixQN([[1] * 10] * 10), max_entries=50)
