"""Maximal intersection of coordinate hyperplanes restricted to a kernel.

Given a matrix ``V`` whose rows are linear functionals on a five-dimensional
space, every four rows of rank four cut out a line; the score of that line is
the number of rows vanishing on it.  The maximum score ``n0`` bounds how many
independent linear conditions a kernel vector can satisfy at once.

Two engines are provided: :func:`algorithm1` follows the textbook loop with
its pruning rule over any exact ring, and :func:`hyperplane_search` is an
exact vectorized engine that evaluates the polynomial entries at integer
points with ``int64`` arithmetic after a magnitude check.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, lcm
from typing import Sequence

import numpy as np

from .algebra import PolyN
from .errors import ShapeError

INT64_SAFE = 2**62


def _det3(m, rows: Sequence[int], cols: Sequence[int]):
    (a, b, c) = rows
    (x, y, z) = cols
    return (m[a][x] * (m[b][y] * m[c][z] - m[b][z] * m[c][y])
            - m[a][y] * (m[b][x] * m[c][z] - m[b][z] * m[c][x])
            + m[a][z] * (m[b][x] * m[c][y] - m[b][y] * m[c][x]))


def _det4(m, cols: Sequence[int]):
    out = 0
    for pos, c in enumerate(cols):
        if not m[0][c]:
            continue
        rest = [x for x in cols if x != c]
        term = m[0][c] * _det3(m, (1, 2, 3), rest)
        out = out + term if pos % 2 == 0 else out - term
    return out


def null_vector(rows: Sequence[Sequence[object]]) -> list[object]:
    """Generalized cross product of four vectors in dimension five.

    The result is orthogonal (under the bilinear pairing) to all four rows
    and is nonzero exactly when they have rank four.
    """
    if len(rows) != 4 or any(len(r) != 5 for r in rows):
        raise ShapeError("need a 4x5 matrix")
    t = []
    for j in range(5):
        d = _det4(rows, [c for c in range(5) if c != j])
        t.append(d if j % 2 == 0 else -d)
    return t


def _pair(u: Sequence[object], v: Sequence[object]):
    acc = 0
    for a, b in zip(u, v):
        if a and b:
            acc = acc + a * b
    return acc


@dataclass
class SearchResult:
    n0: int
    subset: tuple[int, ...]
    vector: list[object]
    vanishing_rows: tuple[int, ...]
    subsets_scanned: int

    def to_json(self) -> dict:
        def enc(x: object):
            if isinstance(x, PolyN):
                return x.to_json()
            if isinstance(x, Fraction):
                return str(x) if x.denominator != 1 else int(x)
            return int(x)

        return {
            "n0": self.n0,
            "witness_subset": list(self.subset),
            "witness_vector": [enc(x) for x in self.vector],
            "vanishing_rows": list(self.vanishing_rows),
            "subsets_scanned": self.subsets_scanned,
        }


def algorithm1(v: Sequence[Sequence[object]]) -> SearchResult:
    """Scan all four-row subsets with the early-exit prune; exact over any ring.

    Entries may be ``int``, :class:`~fractions.Fraction` or :class:`PolyN`
    (generic mode); zero testing is the ring's own.
    """
    n = len(v)
    best = 0
    best_s: tuple[int, ...] = ()
    best_t: list[object] = []
    scanned = 0
    for s in combinations(range(n), 4):
        scanned += 1
        t = null_vector([v[i] for i in s])
        if not any(t):
            continue  # rank below four
        count = 0
        for i in range(n):
            if not _pair(v[i], t):
                count += 1
            elif count + (n - i) <= best:
                break  # textbook bound (1-based n - i + 1); the remaining rows cannot beat the incumbent
        if count > best:
            best, best_s, best_t = count, s, t
    zero_rows = tuple(i for i in range(n) if best_t and not _pair(v[i], best_t))
    return SearchResult(best, best_s, best_t, zero_rows, scanned)


# ---------------------------------------------------------------------------
# Vectorized exact engine
# ---------------------------------------------------------------------------

_PAIRS = [(a, b) for a in range(5) for b in range(a + 1, 5)]
_PAIR_INDEX = {p: i for i, p in enumerate(_PAIRS)}


def _laplace_plan() -> list[list[tuple[int, int, int]]]:
    """For each removed column ``j``: (sign, top pair index, bottom pair index) triples."""
    plan = []
    for j in range(5):
        cols = [c for c in range(5) if c != j]
        terms = []
        for (pa, pb) in combinations(range(4), 2):
            rest = [x for x in range(4) if x not in (pa, pb)]
            sign = (-1) ** (pa + pb + 1)  # rows {0,1}, 0-based column positions
            col_sign = 1 if j % 2 == 0 else -1
            top = _PAIR_INDEX[(cols[pa], cols[pb])]
            bot = _PAIR_INDEX[(cols[rest[0]], cols[rest[1]])]
            terms.append((sign * col_sign, top, bot))
        plan.append(terms)
    return plan


_PLAN = _laplace_plan()


def _null_vectors(a: np.ndarray) -> np.ndarray:
    """Cofactor vectors for a stack of 4x5 matrices, shape (c, 4, 5) -> (c, 5)."""
    r0, r1, r2, r3 = a[:, 0], a[:, 1], a[:, 2], a[:, 3]
    top = np.stack([r0[:, x] * r1[:, y] - r0[:, y] * r1[:, x] for x, y in _PAIRS], axis=1)
    bot = np.stack([r2[:, x] * r3[:, y] - r2[:, y] * r3[:, x] for x, y in _PAIRS], axis=1)
    out = np.zeros((a.shape[0], 5), dtype=a.dtype)
    for j, terms in enumerate(_PLAN):
        acc = out[:, j]
        for sign, t, b in terms:
            if sign > 0:
                acc += top[:, t] * bot[:, b]
            else:
                acc -= top[:, t] * bot[:, b]
    return out


def integer_kernel_matrix(v: Sequence[Sequence[PolyN]]) -> list[list[tuple[int, ...]]]:
    """Scale columns so that every entry is an integer polynomial (zero pattern is unchanged)."""
    n, m = len(v), len(v[0])
    out = [[() for _ in range(m)] for _ in range(n)]
    for j in range(m):
        d = lcm(*(PolyN.coerce(v[i][j]).den for i in range(n)))
        for i in range(n):
            p = PolyN.coerce(v[i][j])
            out[i][j] = tuple(c * (d // p.den) for c in p.num)
    return out


def evaluation_points(count: int) -> list[int]:
    """``0, 1, -1, 2, -2, ...``: small integers keep the evaluated entries small."""
    pts = [0]
    k = 1
    while len(pts) < count:
        pts.extend([k, -k])
        k += 1
    return pts[:count]


def _evaluate(vz: Sequence[Sequence[tuple[int, ...]]], x: int) -> list[list[int]]:
    out = []
    for row in vz:
        r = []
        for c in row:
            acc = 0
            for coef in reversed(c):
                acc = acc * x + coef
            r.append(acc)
        out.append(r)
    return out


def _as_array(vals: list[list[int]]) -> np.ndarray:
    bound = max((abs(x) for r in vals for x in r), default=0)
    # |row . cofactor| <= 5 * B * 24 * B^4
    if 120 * bound**5 < INT64_SAFE:
        return np.array(vals, dtype=np.int64)
    return np.array(vals, dtype=object)


def _scan_chunk(args: tuple[list[np.ndarray], np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """Scores for a block of subsets; score 0 marks rank-deficient subsets."""
    evals, subsets = args
    n = evals[0].shape[0]
    zero = np.ones((n, subsets.shape[0]), dtype=bool)
    full_rank = np.zeros(subsets.shape[0], dtype=bool)
    for e in evals:
        t = _null_vectors(e[subsets])
        full_rank |= (t != 0).any(axis=1)
        zero &= (e @ t.T) == 0
    scores = np.where(full_rank, zero.sum(axis=0), 0)
    return scores


def all_subsets(n: int) -> np.ndarray:
    """All 4-subsets of ``range(n)`` in lexicographic order, as an int array."""
    flat = np.fromiter((x for s in combinations(range(n), 4) for x in s), dtype=np.int32,
                       count=4 * comb(n, 4))
    return flat.reshape(-1, 4)


def hyperplane_search(v: Sequence[Sequence[object]], n0: int | None = None,
                      chunk: int = 20_000, threads: int | None = None) -> SearchResult:
    """Exact maximal score over all 4-subsets.

    With ``n0=None`` (generic mode) the entries are polynomials in ``N`` and a
    row vanishes on a line when the corresponding 5x5 determinant is the zero
    polynomial.  That determinant has degree at most ``5d`` for entries of
    degree ``d``, so it is identically zero exactly when it vanishes at
    ``5d + 1`` distinct integers; those evaluations are done in exact
    integer arithmetic.  With an integer ``n0`` a single evaluation is used.
    The maximizing line is then re-verified symbolically.
    """
    polys = [[PolyN.coerce(x) for x in row] for row in v]
    if any(len(r) != 5 for r in polys):
        raise ShapeError("need five columns")
    vz = integer_kernel_matrix(polys)
    if n0 is None:
        deg = max((len(c) - 1 for r in vz for c in r), default=0)
        points = evaluation_points(5 * max(deg, 0) + 1)
    else:
        points = [n0]
    evals = [_as_array(_evaluate(vz, x)) for x in points]
    subsets = all_subsets(len(polys))
    threads = threads or os.cpu_count() or 1
    blocks = [subsets[i:i + chunk] for i in range(0, len(subsets), chunk)]
    if threads > 1 and len(blocks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            scores = np.concatenate(list(ex.map(_scan_chunk, [(evals, b) for b in blocks])))
    else:
        scores = np.concatenate([_scan_chunk((evals, b)) for b in blocks])
    best_idx = int(np.argmax(scores))
    best = int(scores[best_idx])
    s = tuple(int(x) for x in subsets[best_idx])
    # exact re-verification of the witness
    if n0 is None:
        rows = polys
    else:
        rows = [[x.evaluate(n0) for x in r] for r in polys]
    t = null_vector([rows[i] for i in s])
    vanishing = tuple(i for i in range(len(rows)) if not _pair(rows[i], t))
    if len(vanishing) != best:
        raise ArithmeticError("vectorized score disagrees with exact re-verification")
    return SearchResult(best, s, t, vanishing, len(subsets))
