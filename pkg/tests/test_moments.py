from __future__ import annotations

import random

import numpy as np
import pytest

from snmax.algebra import N, PolyN, RatFuncN, nullspace_at, rank_at
from snmax.moments import (
    EXPECTED_DET_K5,
    analyze_k5,
    build_matrix,
    coordinate_action,
    eta_vector,
    hermitian_form_B,
    k6_aux_matrix,
    matrix_csv,
    matrix_entry,
    morphisms_k5,
    morphisms_k6_aux,
    morphisms_k6_main,
    pairing_diagram,
    proportional,
    row_names,
)
from snmax.partitions import (
    CROSSING,
    SetPartition,
    TwoLinePartition,
    compose,
    crossings,
    enumerate_partitions,
    rotate,
)
from snmax.vectors import PartitionVector, apply_morphism, dense_apply, expand_dense, expand_dense_vector


def test_family_sizes():
    k5 = morphisms_k5()
    assert len(k5) == 10
    main = morphisms_k6_main()
    assert len(main) == 66
    kinds = [m.name[0:2] for m in main]
    assert sum(n.startswith("R") for n in kinds) == 15
    assert sum(n.startswith("T") for n in kinds) == 30
    assert sum(n.startswith("S") for n in kinds) == 6
    assert sum(n == "MM" for n in kinds) == 9
    assert sum(n == "M3" for n in kinds) == 6
    aux = morphisms_k6_aux()
    assert len(aux) == 18
    assert all((m.diagram.upper, m.diagram.lower) == (6, 4) for m in main)
    assert all((m.diagram.upper, m.diagram.lower) == (6, 5) for m in aux)


def test_named_members():
    t32 = {m.name: m.diagram for m in morphisms_k6_main()}["T(3,2)"]
    expected = TwoLinePartition.wiring(6, [((1,), 1), ((2, 4), 1), ((5,), 1), ((6,), 1)])
    assert t32 == expected
    k5 = {m.name: m.diagram for m in morphisms_k5()}
    for p in enumerate_partitions(5):
        direct = apply_morphism(PartitionVector.basis(p), k5["M61"])
        via = apply_morphism(apply_morphism(PartitionVector.basis(p), TwoLinePartition.rotation(5, 1)), k5["M12"])
        assert np.array_equal(expand_dense_vector(direct, 3), expand_dense_vector(via, 3))


def test_k5_matrix_entries():
    cols = enumerate_partitions(5, "CR")
    m = build_matrix(morphisms_k5(), cols)
    assert m.shape == (10, 10)
    nonzero = {x for row in m.rows for x in row if x}
    assert nonzero <= {RatFuncN(1), RatFuncN(N)}
    s3 = morphisms_k5().members[2].diagram
    p = SetPartition.parse("{1,4}{2,5}{3}")
    assert matrix_entry(s3, p) == RatFuncN(N)


def test_k6_matrix_against_crossing_membership(k6):
    m, cols, _ = k6
    assert m.shape == (66, 71)
    for r, mem in enumerate(morphisms_k6_main().members[:15]):
        kappa = tuple(int(x) for x in mem.name[2:-1].split(","))
        for c, p in enumerate(cols):
            entry = m[r, c]
            assert bool(entry) == (kappa in crossings(p))
            if entry:
                assert entry.as_poly() in (PolyN.coerce(1), N, N**2)


def test_matrix_entries_against_dense_oracle(k6):
    m, cols, _ = k6
    rng = random.Random(0)
    members = morphisms_k6_main().members
    cells = [(r, c) for r in range(66) for c in range(71)]
    for r, c in rng.sample(cells, len(cells) // 10):
        t, p = members[r].diagram, cols[c]
        img = dense_apply(t, expand_dense(p, 7), 7)
        symbolic = apply_morphism(PartitionVector.basis(p), t)
        assert np.array_equal(img, expand_dense_vector(symbolic, 7).astype(np.int64))
        if m[r, c]:
            assert np.array_equal(img, int(m[r, c].evaluate(7)) * expand_dense(CROSSING, 7))
        else:
            assert symbolic.support() != [CROSSING]


def test_analyze_k5():
    rep = analyze_k5()
    assert rep.det == EXPECTED_DET_K5 or rep.det == -EXPECTED_DET_K5
    assert rep.det.num == PolyN([4, -25, 50, -35, 10, -1]) or rep.det.num == PolyN([-4, 25, -50, 35, -10, 1])
    assert rep.rank_at_4 == 9 and rep.kernel_is_eta and rep.eta_in_nc_span
    cols = rep.columns
    assert all(x == 0 for x in rep.matrix.substitute(4)[0]) is False
    ker = nullspace_at(rep.matrix, 4)
    assert proportional(ker[0], eta_vector(cols))
    prod = [sum(a * b for a, b in zip(row, ker[0])) for row in rep.matrix.substitute(4)]
    assert all(x == 0 for x in prod)


def test_analyze_k6_generic(k6):
    from snmax.moments import kernel_symmetry
    m, cols, basis = k6
    assert len(basis) == 5
    assert all(max(x.degree() for x in v) <= 3 for v in basis)
    for v in basis:
        assert all(not x for x in m.apply(v))
    assert rank_at(m, 4) == 54 and rank_at(m, 7) == 66
    sym = kernel_symmetry(m, basis, cols)
    assert sym == {"rotation_invariant": True, "reflection_invariant": True, "r3_identity": True}


def test_aux_rows():
    assert k6_aux_matrix().shape == (180, 71)
    names = row_names(morphisms_k6_aux(), enumerate_partitions(5, "CR"))
    assert len(names) == 180


def test_nullspace_normalization_idempotent(k6):
    from snmax.algebra import MatrixQN, nullspace_generic
    _, _, basis = k6
    again = nullspace_generic(MatrixQN([[x for x in v] for v in basis]).transpose().transpose())
    assert len(again) == 71 - 5


def test_hermitian_form(k6):
    _, cols, basis = k6
    rep = hermitian_form_B(basis, cols, sample=(6,))
    assert rep.symmetric and rep.zero_diagonal
    assert rep.positive_definite == {6: False}
    assert pairing_diagram().upper == 12 and pairing_diagram().lower == 4


def test_csv_dump():
    cols = enumerate_partitions(5, "CR")
    m = build_matrix(morphisms_k5(), cols)
    text = matrix_csv(m, row_names(morphisms_k5()), cols)
    assert text.splitlines()[0].startswith(",{1,2,4}{3,5}") or len(text.splitlines()) == 11
