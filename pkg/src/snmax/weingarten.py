"""Exact Weingarten calculus for the quantum permutation group over Q(N).

Moments of the Haar state in the entries of the fundamental magic unitary
depend only on the kernels of the row and column multi-indices:

    h(u_{i1 j1} ... u_{ik jk}) = sum_{p <= ker i, q <= ker j} W(p, q)

where ``p, q`` range over noncrossing partitions and ``W`` is the inverse of
the Gram matrix ``G(p, q) = N**|p v q|`` (join in the full partition lattice).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence

from .algebra import MatrixQN, PolyN, RatFuncN, inverse
from .algebra.poly import N as N_POLY
from .errors import ShapeError, SizeError
from .partitions import (
    SetPartition,
    enumerate_partitions,
    join,
    kernel,
    refines,
    restrict,
    rotate,
)


# ---------------------------------------------------------------------------
# Counting
# ---------------------------------------------------------------------------


def stirling2_row(k: int) -> list[int]:
    """``[S(k, 0), ..., S(k, k)]``."""
    row = [1]
    for n in range(1, k + 1):
        new = [0] * (n + 1)
        for j in range(1, n + 1):
            new[j] = j * (row[j] if j < len(row) else 0) + row[j - 1]
        row = new
    return row


def catalan(k: int) -> int:
    return comb(2 * k, k) // (k + 1)


def counts(k: int, n0: int | None = None) -> dict[str, object]:
    """Bell, Catalan and Stirling data; ``dim_homP_at_N`` when ``n0`` is given."""
    if not 0 <= k <= 12:
        raise SizeError(f"k={k} outside 0..12")
    row = stirling2_row(k)
    out: dict[str, object] = {
        "k": k,
        "bell": sum(row),
        "catalan": catalan(k),
        "crossing": sum(row) - catalan(k),
        "stirling_row": row,
    }
    if n0 is not None:
        out["n0"] = n0
        out["dim_homP_at_N"] = sum(row[1:n0 + 1]) if k else 1
    return out


# ---------------------------------------------------------------------------
# Gram and Weingarten matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GramMatrix:
    k: int
    order: tuple[SetPartition, ...]
    entries: MatrixQN


def gram_matrix(k: int) -> GramMatrix:
    nc = tuple(enumerate_partitions(k, "NC"))
    rows = [[N_POLY ** join(p, q).num_blocks for q in nc] for p in nc]
    return GramMatrix(k, nc, MatrixQN(rows))


def gram_at(k: int, n0: int) -> list[list[int]]:
    nc = enumerate_partitions(k, "NC")
    return [[n0 ** join(p, q).num_blocks for q in nc] for p in nc]


_LOCK = threading.RLock()


@lru_cache(maxsize=None)
def _weingarten_cached(k: int) -> MatrixQN:
    return inverse(gram_matrix(k).entries)


def weingarten_matrix(k: int) -> MatrixQN:
    """Exact inverse of the Gram matrix, cached per ``k``."""
    if not 1 <= k <= 7:
        raise SizeError(f"k={k} outside 1..7")
    with _LOCK:
        return _weingarten_cached(k)


def inverse_at(rows: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    """Exact rational inverse by Gauss-Jordan (used for integer specializations)."""
    n = len(rows)
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [r[n:] for r in a]


@dataclass
class _MomentTable:
    """``W`` over a common denominator, plus the noncrossing refinements of every partition."""

    k: int
    order: tuple[SetPartition, ...]
    numer: list[list[PolyN]]
    denom: PolyN
    below: dict[SetPartition, tuple[int, ...]]


@lru_cache(maxsize=None)
def _moment_table(k: int) -> _MomentTable:
    w = weingarten_matrix(k)
    order = tuple(enumerate_partitions(k, "NC"))
    denom = PolyN.coerce(1)
    for row in w.rows:
        for x in row:
            if x:
                denom = denom * (x.den // denom.gcd(x.den))
    numer = [[x.num * (denom // x.den) if x else PolyN() for x in row] for row in w.rows]
    below = {
        p: tuple(i for i, r in enumerate(order) if refines(r, p))
        for p in enumerate_partitions(k)
    }
    return _MomentTable(k, order, numer, denom, below)


def moment_by_kernels(p: SetPartition, q: SetPartition) -> RatFuncN:
    """Haar moment for row kernel ``p`` and column kernel ``q``."""
    if p.k != q.k:
        raise ShapeError("kernels of different lengths")
    if p.k == 0:
        return RatFuncN.coerce(1)
    with _LOCK:
        tab = _moment_table(p.k)
    acc = PolyN()
    cols = tab.below[q]
    for i in tab.below[p]:
        row = tab.numer[i]
        for j in cols:
            acc = acc + row[j]
    return RatFuncN(acc, tab.denom)


def moment(i: Sequence[int], j: Sequence[int]) -> RatFuncN:
    """``h(u_{i1 j1} ... u_{ik jk})`` as a reduced rational function of ``N``."""
    if len(i) != len(j):
        raise ShapeError("index tuples of different lengths")
    if len(i) > 7:
        raise SizeError("moments are supported up to order 7")
    return moment_by_kernels(kernel(i), kernel(j))


# ---------------------------------------------------------------------------
# Singleton reduction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MomentTerm:
    coeff: RatFuncN
    p: SetPartition
    q: SetPartition

    def to_json(self) -> dict:
        return {"coeff": str(self.coeff), "p": str(self.p), "q": str(self.q)}


def _attach_front(rest: SetPartition, block: int | None) -> SetPartition:
    """Prepend a point to ``rest``: into block index ``block``, or as a new singleton."""
    label = -1 if block is None else block
    return SetPartition.from_labels([label] + list(rest.rgs))


def _reduce_step(term: MomentTerm, on_rows: bool) -> list[MomentTerm]:
    p, q = (term.p, term.q) if on_rows else (term.q, term.p)
    s = p.singletons()[0]
    shift = 1 - s
    pr, qr = rotate(p, shift), rotate(q, shift)
    rest_points = range(2, p.k + 1)
    p1, _ = restrict(pr, rest_points)
    q1, _ = restrict(qr, rest_points)
    alpha = RatFuncN.coerce(N_POLY - p1.num_blocks)
    c = term.coeff / alpha
    out = [MomentTerm(c, p1, q1) if on_rows else MomentTerm(c, q1, p1)]
    for b in range(p1.num_blocks):
        pb = _attach_front(p1, b)
        out.append(MomentTerm(-c, pb, qr) if on_rows else MomentTerm(-c, qr, pb))
    return out


def singleton_reduce(p: SetPartition, q: SetPartition) -> list[MomentTerm]:
    """Rewrite ``h(p, q)`` through lower-order and singleton-free moments.

    The lowest singleton is rotated to the front (rows first, then columns)
    and the row or column sum relation of the magic unitary is solved for the
    singleton term.  Terms of the original order that still have singletons
    are expanded again; equal terms are merged.
    """
    if p.k != q.k:
        raise ShapeError("kernels of different lengths")
    if p.k > 6:
        raise SizeError("singleton reduction is supported up to order 6")
    k = p.k
    work = [MomentTerm(RatFuncN.coerce(1), p, q)]
    done: dict[tuple[SetPartition, SetPartition], RatFuncN] = {}
    while work:
        t = work.pop()
        if t.p.k == k and k > 1 and t.p.has_singleton():
            work.extend(_reduce_step(t, True))
        elif t.p.k == k and k > 1 and t.q.has_singleton():
            work.extend(_reduce_step(t, False))
        else:
            key = (t.p, t.q)
            done[key] = done.get(key, RatFuncN.coerce(0)) + t.coeff
    return [MomentTerm(c, a, b) for (a, b), c in sorted(done.items()) if c]


def evaluate_terms(terms: Sequence[MomentTerm]) -> RatFuncN:
    acc = RatFuncN.coerce(0)
    for t in terms:
        acc = acc + t.coeff * moment_by_kernels(t.p, t.q)
    return acc


def singleton_sweep(k: int = 5) -> dict[str, object]:
    """Compare reduced and direct evaluation for every pair with a singleton."""
    checked = failures = 0
    ps = enumerate_partitions(k)
    bad: list[list[str]] = []
    for p in ps:
        for q in ps:
            if not (p.has_singleton() or q.has_singleton()):
                continue
            checked += 1
            if evaluate_terms(singleton_reduce(p, q)) != moment_by_kernels(p, q):
                failures += 1
                bad.append([str(p), str(q)])
    return {"k": k, "pairs_checked": checked, "failures": failures, "failing_pairs": bad[:10]}


# ---------------------------------------------------------------------------
# Consistency relations
# ---------------------------------------------------------------------------


def row_sum_identity(p1: SetPartition, q: SetPartition) -> bool:
    """``sum_l h(u_{l j1} u_{i2 j2} ...) == h(u_{i2 j2} ...)`` with ``ker(i2..)=p1``, ``ker j = q``."""
    lhs = (N_POLY - p1.num_blocks) * moment_by_kernels(_attach_front(p1, None), q)
    for b in range(p1.num_blocks):
        lhs = lhs + moment_by_kernels(_attach_front(p1, b), q)
    rhs = moment_by_kernels(p1, restrict(q, range(2, q.k + 1))[0]) if q.k > 1 else RatFuncN.coerce(1)
    return RatFuncN.coerce(lhs) == rhs


def _forces_zero(p: SetPartition, q: SetPartition) -> bool:
    """Adjacent factors sharing a row index but not a column index (or vice versa) multiply to 0."""
    k = p.k
    for a in range(1, k + 1):
        b = a % k + 1
        if a == b:
            continue
        if p.same_block(a, b) != q.same_block(a, b):
            return True
    return False


def moment_consistency(k: int) -> dict[str, object]:
    """Row-sum relation for all kernel pairs and orthogonality vanishing, exhaustively."""
    if not 1 <= k <= 5:
        raise SizeError("consistency checks are supported for 1 <= k <= 5")
    sums_ok = sums_total = 0
    lower = enumerate_partitions(k - 1) if k > 1 else [SetPartition(())]
    for p1 in lower:
        for q in enumerate_partitions(k):
            sums_total += 1
            sums_ok += row_sum_identity(p1, q)
    zero_ok = zero_total = 0
    for p in enumerate_partitions(k):
        for q in enumerate_partitions(k):
            if _forces_zero(p, q):
                zero_total += 1
                zero_ok += not moment_by_kernels(p, q)
    return {
        "k": k,
        "row_sums_checked": sums_total,
        "row_sums_ok": sums_ok,
        "orthogonality_checked": zero_total,
        "orthogonality_ok": zero_ok,
    }
