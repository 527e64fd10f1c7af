from __future__ import annotations

import random
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from snmax.errors import ShapeError, SizeError
from snmax.partitions import (
    CROSSING,
    SetPartition,
    TwoLinePartition,
    cap,
    compose,
    crossers,
    crossing_decomposition,
    crossings,
    cup,
    enumerate_partitions,
    involute,
    join,
    kernel,
    refines,
    reflect,
    restrict,
    rotate,
    tensor,
)
from snmax.vectors import dense_matrix


def bell_catalan_oracle(k: int) -> tuple[int, int]:
    """Bell numbers by the Bell triangle, Catalan numbers by the convolution recursion."""
    row = [1]
    for _ in range(k - 1):
        new = [row[-1]]
        for x in row:
            new.append(new[-1] + x)
        row = new
    cat = [1]
    for n in range(k):
        cat.append(sum(cat[i] * cat[n - i] for i in range(n + 1)))
    return row[-1], cat[k]


def noncrossing_by_stack(p: SetPartition) -> bool:
    """Independent test: scanning left to right, a block may only be closed when it is on top."""
    last = {}
    for i, b in enumerate(p.rgs):
        last[b] = i
    stack: list[int] = []
    for i, b in enumerate(p.rgs):
        if stack and stack[-1] == b:
            pass
        elif b in stack:
            return False
        else:
            stack.append(b)
        if last[b] == i:
            if stack[-1] != b:
                return False
            stack.pop()
    return True


partitions_st = st.integers(1, 8).flatmap(
    lambda k: st.lists(st.integers(0, k - 1), min_size=k, max_size=k)
).map(SetPartition.from_labels)


@pytest.mark.parametrize("k", range(1, 11))
def test_enumeration_counts_match_recursions(k):
    bell, cat = bell_catalan_oracle(k)
    assert len(enumerate_partitions(k)) == bell
    if k <= 9:
        assert len(enumerate_partitions(k, "NC")) == cat
        assert len(enumerate_partitions(k, "CR")) == bell - cat


def test_enumeration_limits():
    with pytest.raises(SizeError):
        enumerate_partitions(13)
    assert len(enumerate_partitions(5, "CR")) == 10
    assert len(enumerate_partitions(6, "CR")) == 71


@given(partitions_st)
def test_text_round_trips(p):
    assert SetPartition.parse(str(p)) == p
    assert SetPartition.parse(p.to_rgs_text()) == p
    assert SetPartition.from_blocks(p.blocks) == p


def test_parse_and_print():
    p = SetPartition.parse("{2,4}{1,3}")
    assert p == CROSSING and str(p) == "{1,3}{2,4}" and p.to_rgs_text() == "rgs:0101"
    for bad in ("{1,3", "1,3", "{1,1}", "{1}{}", "rgs:0z"):
        with pytest.raises(ValueError):
            SetPartition.parse(bad)


@pytest.mark.parametrize("k", range(1, 9))
def test_noncrossing_matches_stack_test(k):
    for p in enumerate_partitions(k):
        assert (not crossings(p)) == noncrossing_by_stack(p)


def test_crossing_examples():
    assert crossings(CROSSING) == {(1, 2, 3, 4)}
    p = SetPartition.parse("{1,3}{2,4}{5,6}")
    pcr, pnc, chi = crossing_decomposition(p)
    assert chi == (1, 2, 3, 4)
    assert str(pcr) == "{1,3}{2,4}" and str(pnc) == "{1,2}"
    nc = SetPartition.parse("{1,4}{2,3}{5}")
    pcr, pnc, chi = crossing_decomposition(nc)
    assert chi == () and pcr.k == 0 and pnc == nc


def test_restriction_examples():
    q, d = restrict(SetPartition.parse("{1,2,3}{4,5}{6}{7,8}"), [1, 2, 3, 7, 8])
    assert (str(q), d) == ("{1,2,3}{4,5}", 2)
    q, d = restrict(SetPartition.parse("{1,2,3,7,8}{4,6}{5,9}"), [4, 5, 6, 9])
    assert (q, d) == (CROSSING, 1)
    p = SetPartition.parse("{1,5}{2,3}{4}")
    assert restrict(p, range(1, 6)) == (p, 0)
    with pytest.raises(ValueError):
        restrict(p, [])


@pytest.mark.parametrize("k", range(1, 8))
def test_blocks_meeting_crossings_lie_in_crossings(k):
    for p in enumerate_partitions(k, "CR"):
        chi = set(crossers(p))
        for b in p.blocks:
            assert not (chi & set(b)) or set(b) <= chi


@pytest.mark.parametrize("k", range(4, 8))
def test_equal_crossing_sets_give_equal_crossing_parts(k):
    seen = {}
    for p in enumerate_partitions(k, "CR"):
        cr_part = crossing_decomposition(p)[0]
        key = crossings(p)
        assert seen.setdefault(key, cr_part) == cr_part


def _check_contained(ps):
    info = [(p, crossings(p), crossers(p)) for p in ps]
    for p, cp, chi in info:
        pcr = restrict(p, chi)[0]
        for q, cq, _ in info:
            if cp <= cq:
                assert refines(pcr, restrict(q, chi)[0]), (p, q)


@pytest.mark.parametrize("k", range(4, 7))
def test_contained_crossings_refine_exhaustive(k):
    _check_contained(enumerate_partitions(k, "CR"))


def test_contained_crossings_refine_sampled_k7():
    rng = random.Random(7)
    _check_contained(rng.sample(enumerate_partitions(7, "CR"), 120))


def test_rotation_example():
    p = SetPartition.parse("{4,5}{1,3}{2,7}{6}")
    assert rotate(p, 2) == SetPartition.parse("{6,7}{3,5}{2,4}{1}")


@pytest.mark.parametrize("k", range(1, 7))
def test_dihedral_laws(k):
    for p in enumerate_partitions(k):
        assert rotate(p, 0) == p and rotate(p, k) == p
        assert rotate(rotate(p, 2), 3) == rotate(p, 5)
        assert reflect(reflect(p)) == p
        for a in range(k):
            assert reflect(rotate(p, a)) == rotate(reflect(p), -a)


def test_reflection_involution_k8():
    for p in enumerate_partitions(8):
        assert reflect(reflect(p)) == p


def test_refines_and_join():
    a, b = SetPartition.parse("{1,2}{3}{4}"), SetPartition.parse("{1}{2,3}{4}")
    assert join(a, b) == SetPartition.parse("{1,2,3}{4}")
    for p in enumerate_partitions(4):
        assert refines(p, p) and join(p, p) == p
        assert join(p, SetPartition.one_block(4)) == SetPartition.one_block(4)
        assert refines(SetPartition.discrete(4), p)
    with pytest.raises(ShapeError):
        join(a, CROSSING.__class__.discrete(3))


def test_kernel_of_tuples():
    assert kernel((1, 1, 1)) == SetPartition.one_block(3)
    assert kernel((1, 2, 1, 2, 3)) == SetPartition.parse("{1,3}{2,4}{5}")
    assert kernel((4, 2, 7, 1)) == SetPartition.discrete(4)


def test_compose_basics():
    for k in range(1, 5):
        for p in enumerate_partitions(k):
            t = TwoLinePartition.from_vector(p)
            assert compose(t, TwoLinePartition.identity(k)) == (t, 0)
    res, closed = compose(cap(), cup())
    assert (res.upper, res.lower, closed) == (0, 0, 1)
    assert dense_matrix(cup(), 3) @ dense_matrix(cap(), 3) == np.array([[3]])
    with pytest.raises(ShapeError):
        compose(cap(), TwoLinePartition.identity(3))


def test_semicircle_example():
    s = TwoLinePartition.semicircle(8, 4, 7)
    res, closed = compose(TwoLinePartition.from_vector(SetPartition.parse("{1,3}{2,4}{5,6}{7,8}")), s)
    assert (res.body, closed) == (CROSSING, 1)
    res, closed = compose(TwoLinePartition.from_vector(SetPartition.parse("{1,3}{2,4}{5}{6}{7}{8}")), s)
    assert (res.body, closed) == (SetPartition.parse("{1,3}{2}{4}"), 2)


def _random_diagram(rng: random.Random, up: int, low: int) -> TwoLinePartition:
    n = up + low
    return TwoLinePartition(up, low, SetPartition.from_labels([rng.randrange(n or 1) for _ in range(n)]))


@pytest.mark.parametrize("n0", [2, 3, 4])
def test_functoriality_against_dense_matrices(n0):
    rng = random.Random(n0)
    for _ in range(60):
        a, b, c = rng.randint(0, 3), rng.randint(0, 3), rng.randint(0, 3)
        p, q = _random_diagram(rng, a, b), _random_diagram(rng, b, c)
        res, closed = compose(p, q)
        lhs = dense_matrix(q, n0) @ dense_matrix(p, n0)
        assert np.array_equal(lhs, n0**closed * dense_matrix(res, n0))


def test_tensor_is_kronecker():
    rng = random.Random(3)
    for _ in range(40):
        p = _random_diagram(rng, rng.randint(0, 3), rng.randint(0, 3))
        q = _random_diagram(rng, rng.randint(0, 3), rng.randint(0, 3))
        t = tensor(p, q)
        assert (t.upper, t.lower) == (p.upper + q.upper, p.lower + q.lower)
        assert np.array_equal(dense_matrix(t, 3), np.kron(dense_matrix(p, 3), dense_matrix(q, 3)))
    empty = TwoLinePartition(0, 0, SetPartition(()))
    assert tensor(p, empty) == p
    one = TwoLinePartition.identity(1)
    assert tensor(one, one) == TwoLinePartition.identity(2)


def test_involution():
    rng = random.Random(5)
    for _ in range(40):
        p = _random_diagram(rng, rng.randint(0, 3), rng.randint(0, 3))
        assert involute(involute(p)) == p
        assert np.array_equal(dense_matrix(involute(p), 3), dense_matrix(p, 3).T)
    assert involute(TwoLinePartition.identity(3)) == TwoLinePartition.identity(3)
    assert involute(cup()) == cap()


@settings(max_examples=60)
@given(st.integers(4, 7).flatmap(lambda k: st.tuples(
    st.just(k), st.lists(st.integers(0, k - 1), min_size=k, max_size=k),
    st.sets(st.integers(1, k), min_size=1))))
def test_restriction_is_a_diagram_action(data):
    k, labels, pts = data
    p = SetPartition.from_labels(labels)
    q, deleted = restrict(p, pts)
    res, closed = compose(TwoLinePartition.from_vector(p), TwoLinePartition.restriction(k, pts))
    assert (res.body, closed) == (q, deleted)


def test_rotation_diagrams_act_as_rotations():
    for k in range(2, 6):
        for p in enumerate_partitions(k):
            for n in range(k):
                res, closed = compose(TwoLinePartition.from_vector(p), TwoLinePartition.rotation(k, n))
                assert (res.body, closed) == (rotate(p, n), 0)
            res, _ = compose(TwoLinePartition.from_vector(p), TwoLinePartition.reflection(k))
            assert res.body == reflect(p)
