"""Formal linear combinations of partition vectors and their dense expansions.

A partition ``p`` of ``[k]`` stands for the tensor ``xi_p`` in
``(C^N)^{tensor k}`` whose entry at a multi-index is 1 exactly when the
index is constant on every block of ``p``.  Dense expansions at a concrete
``N0`` are the independent oracle used to check symbolic manipulations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, lcm
from typing import Iterable, Mapping, Sequence

import numpy as np

from .algebra import PolyN, RatFuncN, integer_rank
from .algebra.poly import N as N_POLY
from .errors import BudgetError, DomainError, ShapeError
from .partitions import (
    SetPartition,
    TwoLinePartition,
    apply_diagram,
    enumerate_partitions,
    iter_partitions,
)

DEFAULT_DENSE_BUDGET = 200_000_000  # bytes


@dataclass(frozen=True)
class PartitionVector:
    """A finite sum ``sum_p c_p xi_p`` with coefficients in Q(N)."""

    k: int
    terms: Mapping[SetPartition, RatFuncN] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean: dict[SetPartition, RatFuncN] = {}
        for p, c in self.terms.items():
            if p.k != self.k:
                raise ShapeError(f"partition {p} is not on {self.k} points")
            c = RatFuncN.coerce(c)
            if c:
                clean[p] = c
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def basis(cls, p: SetPartition, coeff: object = 1) -> PartitionVector:
        return cls(p.k, {p: RatFuncN.coerce(coeff)})

    @classmethod
    def combination(cls, k: int, pairs: Iterable[tuple[SetPartition, object]]) -> PartitionVector:
        acc: dict[SetPartition, RatFuncN] = {}
        for p, c in pairs:
            acc[p] = acc.get(p, RatFuncN.coerce(0)) + RatFuncN.coerce(c)
        return cls(k, acc)

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> list[SetPartition]:
        return list(self.terms)

    def coefficient(self, p: SetPartition) -> RatFuncN:
        return self.terms.get(p, RatFuncN.coerce(0))

    def __add__(self, other: PartitionVector) -> PartitionVector:
        if other.k != self.k:
            raise ShapeError("vectors of different rank")
        return PartitionVector.combination(self.k, list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self) -> PartitionVector:
        return PartitionVector(self.k, {p: -c for p, c in self.terms.items()})

    def __sub__(self, other: PartitionVector) -> PartitionVector:
        return self + (-other)

    def scale(self, c: object) -> PartitionVector:
        c = RatFuncN.coerce(c)
        return PartitionVector(self.k, {p: c * x for p, x in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PartitionVector) and self.k == other.k and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.k, tuple(self.terms.items())))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*xi{p}" for p, c in self.terms.items())

    def normalized(self) -> PartitionVector:
        """Scale so that the first coefficient is 1 (a canonical ray representative)."""
        if not self.terms:
            return self
        return self.scale(1 / next(iter(self.terms.values())))

    # -- JSON -------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "k": self.k,
            "terms": [{"partition": str(p), "coeff": c.to_json()} for p, c in self.terms.items()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> PartitionVector:
        k = int(data["k"])
        pairs = []
        for t in data["terms"]:
            p = SetPartition.parse(t["partition"]) if t["partition"] else SetPartition(())
            if p.k != k:
                raise ShapeError(f"term {t['partition']} is not on {k} points")
            pairs.append((p, RatFuncN.from_json(t["coeff"])))
        return cls.combination(k, pairs)

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def loads(cls, text: str) -> PartitionVector:
        return cls.from_json(json.loads(text))


def apply_morphism(v: PartitionVector, t: TwoLinePartition) -> PartitionVector:
    """Image of ``v`` under the diagram ``t``; closed loops contribute powers of ``N``."""
    if t.upper != v.k:
        raise ShapeError(f"diagram expects {t.upper} points, vector has {v.k}")
    pairs = []
    for p, c in v.terms.items():
        q, closed = apply_diagram(p, t)
        pairs.append((q, c * N_POLY**closed if closed else c))
    return PartitionVector.combination(t.lower, pairs)


def red_cr(v: PartitionVector) -> PartitionVector:
    """Drop all non-crossing terms (reduction modulo the non-crossing span)."""
    return PartitionVector(v.k, {p: c for p, c in v.terms.items() if not p.is_noncrossing()})


def project_cr(v: PartitionVector, n0: int) -> PartitionVector:
    """Projection onto the crossing part, defined only when the vectors are independent."""
    if v.k > n0:
        raise DomainError(f"projection needs k <= N0 (k={v.k}, N0={n0})")
    return red_cr(v)


# ---------------------------------------------------------------------------
# Dense expansions
# ---------------------------------------------------------------------------


def _check_dense(n0: int, length: int, count: int, budget: int | None) -> None:
    need = 8 * count * n0**length
    if need > (DEFAULT_DENSE_BUDGET if budget is None else budget):
        raise BudgetError(f"dense expansion needs about {need} bytes")


def _digits(n0: int, k: int) -> np.ndarray:
    """Array of shape ``(k, n0**k)`` listing all multi-indices, leftmost factor most significant."""
    if k == 0:
        return np.zeros((0, 1), dtype=np.int64)
    return np.array(np.unravel_index(np.arange(n0**k), (n0,) * k), dtype=np.int64)


def _indicator(p: SetPartition, digits: np.ndarray) -> np.ndarray:
    ok = np.ones(digits.shape[1], dtype=bool)
    for block in p.blocks:
        first = digits[block[0] - 1]
        for x in block[1:]:
            ok &= digits[x - 1] == first
    return ok


def expand_dense(p: SetPartition, n0: int, budget_bytes: int | None = None) -> np.ndarray:
    """The 0/1 tensor ``xi_p`` as a flat ``int64`` array of length ``n0**k``."""
    _check_dense(n0, p.k, 1, budget_bytes)
    return _indicator(p, _digits(n0, p.k)).astype(np.int64)


def expand_dense_many(ps: Sequence[SetPartition], n0: int, budget_bytes: int | None = None) -> np.ndarray:
    """Rows ``xi_p`` for all ``p`` in ``ps`` (all on the same number of points)."""
    if not ps:
        return np.zeros((0, 0), dtype=np.int64)
    k = ps[0].k
    _check_dense(n0, k, len(ps), budget_bytes)
    digits = _digits(n0, k)
    return np.array([_indicator(p, digits) for p in ps], dtype=np.int64)


def expand_dense_vector(v: PartitionVector, n0: int, budget_bytes: int | None = None) -> np.ndarray:
    """Dense expansion of a combination, as an object array of Fractions."""
    _check_dense(n0, v.k, 2, budget_bytes)
    out = np.zeros(n0**v.k, dtype=object)
    out[:] = Fraction(0)
    digits = _digits(n0, v.k)
    for p, c in v.terms.items():
        out = out + _indicator(p, digits).astype(np.int64) * c.evaluate(n0)
    return out


def dense_matrix(t: TwoLinePartition, n0: int, budget_bytes: int | None = None) -> np.ndarray:
    """The ``n0**lower x n0**upper`` 0/1 matrix of a diagram."""
    _check_dense(n0, t.upper + t.lower, 1, budget_bytes)
    flat = _indicator(t.body, _digits(n0, t.upper + t.lower)).astype(np.int64)
    return flat.reshape(n0**t.upper, n0**t.lower).T.copy()


# ---------------------------------------------------------------------------
# Spanning sets and ranks
# ---------------------------------------------------------------------------


def gw_basis(k: int, n0: int) -> list[SetPartition]:
    """Partitions with at most ``n0`` blocks; their vectors form a basis of the span."""
    return [p for p in iter_partitions(k) if p.num_blocks <= n0]


def dense_rank(ps: Sequence[SetPartition], n0: int, budget_bytes: int | None = None) -> int:
    """Exact rank of the dense expansions of ``ps`` at ``N = n0``.

    Uses ``rank(A) = rank(A A^T)`` for the real 0/1 matrix ``A`` of
    expansions; the Gram matrix is an exact ``int64`` product.
    """
    if not ps:
        return 0
    a = expand_dense_many(ps, n0, budget_bytes)
    return integer_rank((a @ a.T).tolist())


def dense_rank_vectors(vs: Sequence[np.ndarray]) -> int:
    """Exact rank of integer or Fraction dense vectors."""
    if not vs:
        return 0
    rows = []
    for v in vs:
        vals = [Fraction(x) for x in v]
        d = lcm(*(x.denominator for x in vals))
        rows.append([int(x * d) for x in vals])
    a = np.array(rows, dtype=object)
    return integer_rank((a @ a.T).tolist())


def is_expansion_injective(k: int, n0: int) -> bool:
    """Whether all ``xi_p`` with ``p`` in ``P(k)`` are linearly independent at ``n0``."""
    ps = enumerate_partitions(k)
    return dense_rank(ps, n0) == len(ps)


def intersection_dim_nc_cr(k: int, n0: int) -> int:
    """``dim(span NC intersect span CR)`` at ``N = n0`` via dimension counting."""
    nc = enumerate_partitions(k, "NC")
    cr = enumerate_partitions(k, "CR")
    return dense_rank(nc, n0) + dense_rank(cr, n0) - dense_rank(nc + cr, n0)


def mobius_coefficient(p: SetPartition) -> int:
    """Coefficient of ``xi_p`` in the expansion of the discrete vector at ``N = k-1``.

    Checked against the dense oracle for ``k = 2..6``; the closed form is
    conjectural for larger ``k``.
    """
    k = p.k
    prod = 1
    for b in p.blocks:
        prod *= factorial(len(b) - 1)
    return (-1) ** (k + 1 - p.num_blocks) * prod


def mobius_expand_discrete(k: int) -> PartitionVector:
    """Express ``xi_{discrete}`` through coarser partitions, valid at ``N = k - 1``.

    Returned as the combination ``sum_{p != discrete} c_p xi_p``.
    """
    if not 1 <= k <= 8:
        raise ValueError(f"k={k} outside supported range 1..8")
    disc = SetPartition.discrete(k)
    return PartitionVector(k, {p: mobius_coefficient(p) for p in iter_partitions(k) if p != disc})


def in_dense_span(v: np.ndarray, ps: Sequence[SetPartition], n0: int) -> bool:
    """Whether a dense integer vector lies in the span of ``xi_p`` for ``p`` in ``ps``."""
    a = expand_dense_many(ps, n0)
    aug = np.vstack([a, np.asarray(v, dtype=object).reshape(1, -1)])
    aug = aug.astype(object)
    base = integer_rank((a.astype(object) @ a.T.astype(object)).tolist())
    return integer_rank((aug @ aug.T).tolist()) == base


def dense_apply(t: TwoLinePartition, x: np.ndarray, n0: int,
                budget_bytes: int | None = None) -> np.ndarray:
    """Apply the dense map of ``t`` to a flat vector without forming the matrix.

    Every assignment of values to the blocks of ``t.body`` contributes the
    input entry at its upper multi-index to the output at its lower one.
    """
    x = np.asarray(x)
    if x.shape != (n0**t.upper,):
        raise ShapeError(f"input of length {x.shape} does not match {n0}**{t.upper}")
    nb = t.body.num_blocks
    _check_dense(n0, nb, 1, budget_bytes)
    assign = _digits(n0, nb)
    labels = np.asarray(t.body.rgs, dtype=np.int64)
    place_up = n0 ** np.arange(t.upper - 1, -1, -1, dtype=np.int64)
    place_lo = n0 ** np.arange(t.lower - 1, -1, -1, dtype=np.int64)
    up = place_up @ assign[labels[: t.upper]] if t.upper else np.zeros(assign.shape[1], dtype=np.int64)
    lo = place_lo @ assign[labels[t.upper:]] if t.lower else np.zeros(assign.shape[1], dtype=np.int64)
    out = np.zeros(n0**t.lower, dtype=x.dtype)
    if x.dtype == object:
        out[:] = Fraction(0)
    np.add.at(out, lo, x[up])
    return out
