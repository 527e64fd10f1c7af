from __future__ import annotations

import random
from itertools import combinations

import numpy as np
import pytest

from snmax.algebra import N, RatFuncN
from snmax.errors import BudgetError, DomainError, ShapeError
from snmax.partitions import CROSSING, SetPartition, TwoLinePartition, crossings, enumerate_partitions
from snmax.vectors import (
    PartitionVector,
    apply_morphism,
    dense_apply,
    dense_matrix,
    dense_rank,
    expand_dense,
    expand_dense_vector,
    gw_basis,
    in_dense_span,
    intersection_dim_nc_cr,
    is_expansion_injective,
    mobius_coefficient,
    mobius_expand_discrete,
    project_cr,
    red_cr,
)
from snmax.weingarten import counts


def P(text: str) -> SetPartition:
    return SetPartition.parse(text)


def test_expand_dense_examples():
    one = expand_dense(SetPartition.one_block(2), 3)
    assert one.sum() == 3 and [i for i in range(9) if one[i]] == [0, 4, 8]
    assert expand_dense(SetPartition.discrete(3), 4).tolist() == [1] * 64
    for k in range(1, 6):
        for n0 in range(1, 5):
            for p in enumerate_partitions(k):
                assert expand_dense(p, n0).sum() == n0**p.num_blocks
    with pytest.raises(BudgetError):
        expand_dense(SetPartition.discrete(12), 10)


def test_vector_algebra_and_json():
    v = PartitionVector.combination(4, [(CROSSING, N), (P("{1}{2}{3}{4}"), 0), (CROSSING, 1)])
    assert v.support() == [CROSSING] and v.coefficient(CROSSING) == RatFuncN(N + 1)
    w = PartitionVector.basis(P("{1,2}{3,4}"), 1 / (N - 1))
    assert PartitionVector.loads((v + w).dumps()) == v + w
    assert (v - v).is_zero()
    with pytest.raises(ShapeError):
        PartitionVector.basis(CROSSING) + PartitionVector.basis(P("{1,2,3}"))


def test_apply_morphism_examples():
    v = PartitionVector.combination(4, [(CROSSING, 2), (P("{1,2}{3}{4}"), N)])
    assert apply_morphism(v, TwoLinePartition.identity(4)) == v
    s47 = TwoLinePartition.semicircle(8, 4, 7)
    a1, a2 = RatFuncN(3), RatFuncN(N + 2)
    vec = PartitionVector.combination(8, [(P("{1,3}{2,4}{5,6}{7,8}"), a1), (P("{1,3}{2,4}{5}{6}{7}{8}"), a2)])
    img = apply_morphism(vec, s47)
    assert img.coefficient(CROSSING) == a1 * N
    assert img.coefficient(P("{1,3}{2}{4}")) == a2 * N**2


@pytest.mark.parametrize("n0", [2, 3])
def test_morphisms_commute_with_dense_expansion(n0):
    rng = random.Random(n0)
    for _ in range(40):
        k, low = rng.randint(1, 4), rng.randint(0, 4)
        t = TwoLinePartition(k, low, SetPartition.from_labels([rng.randrange(k + low) for _ in range(k + low)]))
        ps = rng.sample(enumerate_partitions(k), min(3, len(enumerate_partitions(k))))
        v = PartitionVector.combination(k, [(p, rng.randint(-3, 3) + N) for p in ps])
        x = expand_dense_vector(v, n0)
        lhs = dense_matrix(t, n0).astype(object) @ x
        rhs = expand_dense_vector(apply_morphism(v, t), n0)
        assert np.array_equal(lhs, rhs)
        assert np.array_equal(dense_apply(t, x, n0), rhs)


def test_red_cr():
    nc = PartitionVector.combination(4, [(P("{1,4}{2,3}"), 1), (P("{1}{2}{3}{4}"), N)])
    assert red_cr(nc).is_zero()
    xi = PartitionVector.combination(6, [
        (P("{1,3}{2,4}{5,6}"), 2), (P("{1,2}{3,5}{4,6}"), 3), (P("{2,4,6}{3,5}{1}"), 5)])
    assert red_cr(red_cr(xi)) == red_cr(xi)
    img = red_cr(apply_morphism(xi, TwoLinePartition.restriction(6, [1, 2, 3, 4])))
    assert img == PartitionVector.basis(CROSSING, 2 * N)
    with pytest.raises(DomainError):
        project_cr(xi, 5)
    assert project_cr(xi, 6) == red_cr(xi)


def test_basis_examples():
    for k in range(1, 5):
        assert gw_basis(k, k) == enumerate_partitions(k)
        assert is_expansion_injective(k, k)
    assert len(gw_basis(4, 3)) == 14 and dense_rank(enumerate_partitions(4), 3) == 14
    assert dense_rank(enumerate_partitions(5), 3) == 41 == counts(5, 3)["dim_homP_at_N"]


@pytest.mark.parametrize("k", range(1, 7))
def test_gw_basis_is_dense_independent(k):
    for n0 in range(1, 6):
        basis = gw_basis(k, n0)
        assert dense_rank(basis, n0) == len(basis)


def test_distinct_partitions_with_equal_crossing_sets_are_independent():
    for k in range(4, 7):
        groups: dict = {}
        for p in enumerate_partitions(k, "CR"):
            groups.setdefault(crossings(p), []).append(p)
        for ps in groups.values():
            assert dense_rank(ps, k) == len(ps)


def test_crossing_lies_in_noncrossing_span_at_three():
    assert in_dense_span(expand_dense(CROSSING, 3), enumerate_partitions(4, "NC"), 3)
    assert not in_dense_span(expand_dense(CROSSING, 4), enumerate_partitions(4, "NC"), 4)


def test_mobius_coefficients():
    assert mobius_coefficient(SetPartition.one_block(5)) == -24
    for p in enumerate_partitions(5):
        if p.num_blocks == 4:
            assert mobius_coefficient(p) == 1
    for k in range(2, 7):
        v = mobius_expand_discrete(k)
        disc = PartitionVector.basis(SetPartition.discrete(k))
        assert np.array_equal(expand_dense_vector(v, k - 1), expand_dense_vector(disc, k - 1))


def test_eta_lies_in_noncrossing_span_at_four():
    cr = enumerate_partitions(5, "CR")
    eta = sum((expand_dense(p, 4) * (1 if p.num_blocks == 3 else -2) for p in cr), np.zeros(4**5, dtype=np.int64))
    assert in_dense_span(eta, enumerate_partitions(5, "NC"), 4)


def test_intersection_dimension_k6():
    assert intersection_dim_nc_cr(6, 4) == 16


def test_noncrossing_rank_counts():
    # independence of the noncrossing vectors holds from N0 = 4 on
    for k in range(1, 7):
        assert dense_rank(enumerate_partitions(k, "NC"), 4) == len(enumerate_partitions(k, "NC"))
    assert dense_rank(enumerate_partitions(5, "NC"), 3) == 41
