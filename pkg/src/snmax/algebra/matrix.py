"""Matrices over Q(N) with exact fraction-free elimination.

All heavy routines first scale each row to integer polynomials, then run
fraction-free Gauss-Jordan elimination over Z[N] (or over Z after
substituting an integer ``N0``), removing the content of every updated row to
control coefficient growth.  Scaling a row never changes rank, kernel or row
space, so all results are exact.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt, lcm
from typing import Callable, Iterable, Sequence

from ..errors import BudgetError, ShapeError, SpecializationError
from . import zpoly as Z
from .poly import PolyN, RatFuncN

DEFAULT_MAX_ENTRIES = 4_000_000


@dataclass(frozen=True)
class _Ring:
    zero: object
    one: object
    mul: Callable
    sub: Callable
    gcd: Callable
    exquo: Callable
    size: Callable  # pivot cost, smaller is better
    normalize_sign: Callable  # make the leading thing positive; returns (value, flipped)


def _int_sign(x: int) -> tuple[int, bool]:
    return (-x, True) if x < 0 else (x, False)


def _zp_sign(x: Z.ZPoly) -> tuple[Z.ZPoly, bool]:
    return (Z.neg(x), True) if x and x[-1] < 0 else (x, False)


INT_RING = _Ring(
    0, 1, operator.mul, operator.sub, gcd, operator.floordiv,
    lambda x: abs(x).bit_length(), _int_sign,
)
ZPOLY_RING = _Ring(
    Z.ZERO, Z.ONE, Z.mul, Z.sub, Z.gcd_poly, Z.exquo,
    lambda x: (len(x), sum(abs(c).bit_length() for c in x)), _zp_sign,
)


def _row_content(row: Sequence, ring: _Ring):
    g = ring.zero
    for x in row:
        if x:
            g = ring.gcd(g, x) if g else ring.normalize_sign(x)[0]
            if g == ring.one:
                return g
    return g


def _primitive_row(row: list, ring: _Ring, trace: list | None = None) -> list:
    g = _row_content(row, ring)
    if not g or g == ring.one:
        return row
    if trace is not None:
        trace.append(g)
    return [ring.exquo(x, g) if x else ring.zero for x in row]


def _gauss_jordan(rows: list[list], ncols: int, ring: _Ring, reduced: bool = True,
                  pivot_cols: int | None = None, trace: list | None = None) -> list[int]:
    """In-place fraction-free elimination; returns the pivot columns.

    After return the first ``len(pivots)`` rows are the pivot rows, in order.
    When ``reduced`` is set every pivot column is cleared in all other rows.
    ``trace`` collects every row multiplier and every removed row content:
    at a point where none of them vanish, each step specializes to an
    invertible row operation.
    """
    nr = len(rows)
    r = 0
    pivots: list[int] = []
    for c in range(ncols if pivot_cols is None else pivot_cols):
        best, best_cost = -1, None
        for i in range(r, nr):
            e = rows[i][c]
            if e:
                cost = ring.size(e)
                if best_cost is None or cost < best_cost:
                    best, best_cost = i, cost
        if best < 0:
            continue
        rows[r], rows[best] = rows[best], rows[r]
        prow = rows[r]
        p = prow[c]
        targets = range(nr) if reduced else range(r + 1, nr)
        for i in targets:
            if i == r:
                continue
            row = rows[i]
            a = row[c]
            if not a:
                continue
            g = ring.gcd(p, a)
            pm, am = ring.exquo(p, g), ring.exquo(a, g)
            if trace is not None:
                trace.append(pm)
            new = [ring.sub(ring.mul(pm, x), ring.mul(am, y)) if y else ring.mul(pm, x)
                   for x, y in zip(row, prow)]
            rows[i] = _primitive_row(new, ring, trace)
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return pivots


def _check_budget(nrows: int, ncols: int, max_entries: int | None) -> None:
    limit = DEFAULT_MAX_ENTRIES if max_entries is None else max_entries
    if nrows * ncols > limit:
        raise BudgetError(f"{nrows}x{ncols} matrix exceeds budget of {limit} entries")


class MatrixQN:
    """An immutable dense matrix of :class:`RatFuncN` entries."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable[object]], ncols: int | None = None) -> None:
        self.rows = tuple(tuple(RatFuncN.coerce(x) for x in row) for row in rows)
        self.nrows = len(self.rows)
        if self.rows:
            widths = {len(r) for r in self.rows}
            if len(widths) != 1:
                raise ShapeError("ragged matrix rows")
            self.ncols = widths.pop()
        else:
            self.ncols = ncols or 0

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij: tuple[int, int]) -> RatFuncN:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MatrixQN) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def column(self, j: int) -> list[RatFuncN]:
        return [r[j] for r in self.rows]

    def transpose(self) -> MatrixQN:
        return MatrixQN(zip(*self.rows), ncols=self.nrows)

    def vstack(self, other: MatrixQN) -> MatrixQN:
        if self.ncols != other.ncols:
            raise ShapeError("column counts differ")
        return MatrixQN(self.rows + other.rows, ncols=self.ncols)

    def apply(self, v: Sequence[object]) -> list[RatFuncN]:
        """Matrix-vector product ``M v``."""
        if len(v) != self.ncols:
            raise ShapeError(f"vector of length {len(v)} for {self.ncols} columns")
        vv = [RatFuncN.coerce(x) for x in v]
        out = []
        for row in self.rows:
            acc = RatFuncN.coerce(0)
            for a, b in zip(row, vv):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return out

    def __matmul__(self, other: MatrixQN) -> MatrixQN:
        if self.ncols != other.nrows:
            raise ShapeError("inner dimensions differ")
        cols = [other.column(j) for j in range(other.ncols)]
        return MatrixQN(
            ([sum((a * b for a, b in zip(row, col) if a and b), RatFuncN.coerce(0)) for col in cols]
             for row in self.rows),
            ncols=other.ncols,
        )

    def substitute(self, n0: int | Fraction) -> list[list[Fraction]]:
        """Entries evaluated at ``N = n0``; raises SpecializationError on a pole."""
        return [[x.evaluate(n0) for x in row] for row in self.rows]

    def max_degree(self) -> int:
        return max((max(x.num.degree(), x.den.degree()) for r in self.rows for x in r), default=0)

    def __repr__(self) -> str:
        return f"MatrixQN({self.nrows}x{self.ncols})"


def _entry_to_zz(x: RatFuncN) -> tuple[Z.ZPoly, Z.ZPoly]:
    """Write ``x = a / b`` with integer polynomials ``a`` and ``b``."""
    n, d = x.num, x.den
    return Z.scale(n.num, d.den), Z.scale(d.num, n.den)


def _zpoly_rows(m: MatrixQN) -> tuple[list[list[Z.ZPoly]], list[Z.ZPoly]]:
    """Scale each row to integer polynomials; returns the rows and their multipliers."""
    out, mults = [], []
    for row in m.rows:
        if all(x.den.degree() == 0 and x.num.den == 1 for x in row):
            out.append([x.num.num for x in row])
            mults.append(Z.ONE)
            continue
        pairs = [_entry_to_zz(x) if x else (Z.ZERO, Z.ONE) for x in row]
        lint, lpoly = 1, Z.ONE
        for _, b in pairs:
            c = Z.content(b) * (1 if b[-1] > 0 else -1)
            pb = Z.primitive(b)
            lint = lcm(lint, abs(c))
            if len(pb) > 1:
                lpoly = Z.exquo(Z.mul(lpoly, pb), Z.gcd_poly(lpoly, pb))
        zrow = []
        for a, b in pairs:
            if not a:
                zrow.append(Z.ZERO)
                continue
            c = Z.content(b) * (1 if b[-1] > 0 else -1)
            pb = Z.primitive(b)
            zrow.append(Z.mul(Z.scale(a, lint // c), Z.exquo(lpoly, pb)))
        out.append(zrow)
        mults.append(Z.scale(lpoly, lint))
    return out, mults


def _int_rows(m: MatrixQN, n0: int | Fraction) -> list[list[int]]:
    out = []
    for row in m.substitute(n0):
        d = lcm(*(x.denominator for x in row)) if row else 1
        out.append([x.numerator * (d // x.denominator) for x in row])
    return out


def rank_generic(m: MatrixQN, max_entries: int | None = None) -> int:
    """Rank over the field Q(N)."""
    _check_budget(*m.shape, max_entries)
    rows, _ = _zpoly_rows(m)
    return len(_gauss_jordan(rows, m.ncols, ZPOLY_RING, reduced=False))


@dataclass(frozen=True)
class GenericRank:
    rank: int
    pivots: tuple[int, ...]
    exceptional: tuple[PolyN, ...]

    def exceptional_integers(self, lo: int, hi: int) -> list[int]:
        """Integers in ``[lo, hi]`` where some exceptional polynomial vanishes."""
        return [n for n in range(lo, hi + 1) if any(not p.evaluate(n) for p in self.exceptional)]

    def integer_roots(self) -> list[int]:
        """Every integer root of every exceptional polynomial (rational root test)."""
        roots: set[int] = set()
        for p in self.exceptional:
            coeffs = p.num
            low = next(i for i, c in enumerate(coeffs) if c)
            if low:
                roots.add(0)
            c = abs(coeffs[low])
            for d in _divisors(c):
                for r in (d, -d):
                    if not p.evaluate(r):
                        roots.add(r)
        return sorted(roots)

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "pivots": list(self.pivots),
            "exceptional": [p.to_json() for p in self.exceptional],
            "exceptional_integer_roots": self.integer_roots(),
        }


def _divisors(n: int) -> list[int]:
    small = [d for d in range(1, isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def rank_generic_report(m: MatrixQN, max_entries: int | None = None) -> GenericRank:
    """Rank over Q(N) with pivot columns and the exceptional polynomials.

    The exceptional set holds the nonconstant primitive parts of every row
    multiplier, pivot and removed content met during elimination.  At any
    integer avoiding their roots (and the poles of the entries) the rank
    equals the generic rank.
    """
    _check_budget(*m.shape, max_entries)
    rows, _ = _zpoly_rows(m)
    trace: list = []
    pivots = _gauss_jordan(rows, m.ncols, ZPOLY_RING, reduced=False, trace=trace)
    trace.extend(rows[i][c] for i, c in enumerate(pivots))
    seen: dict[tuple[int, ...], PolyN] = {}
    for f in trace:
        if len(f) > 1:
            g = _zp_sign(Z.primitive(f))[0]
            seen.setdefault(g, PolyN.from_zpoly(g))
    return GenericRank(len(pivots), tuple(pivots), tuple(seen[k] for k in sorted(seen)))


def integer_rank(rows: Sequence[Sequence[int]]) -> int:
    """Exact rank over Q of an integer matrix."""
    work = [list(map(int, r)) for r in rows]
    if not work:
        return 0
    return len(_gauss_jordan(work, len(work[0]), INT_RING, reduced=False))


def rank_at(m: MatrixQN, n0: int | Fraction, max_entries: int | None = None) -> int:
    """Exact rank over Q after substituting ``N = n0``."""
    _check_budget(*m.shape, max_entries)
    return integer_rank(_int_rows(m, n0)) if m.nrows else 0


def _kernel_from_rref(rows: list[list], pivots: list[int], ncols: int, ring: _Ring) -> list[list]:
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        mult = ring.one
        for i, c in enumerate(pivots):
            e = rows[i][f]
            if e:
                d = rows[i][c]
                mult = ring.exquo(ring.mul(mult, d), ring.gcd(mult, d))
        vec = [ring.zero] * ncols
        vec[f] = mult
        for i, c in enumerate(pivots):
            e = rows[i][f]
            if e:
                d = rows[i][c]
                vec[c] = ring.sub(ring.zero, ring.mul(e, ring.exquo(mult, d)))
        vec = _primitive_row(vec, ring)
        lead = next(x for x in vec if x)
        if ring.normalize_sign(lead)[1]:
            vec = [ring.sub(ring.zero, x) if x else x for x in vec]
        basis.append(vec)
    return basis


def nullspace_generic(m: MatrixQN, max_entries: int | None = None) -> list[list[PolyN]]:
    """Canonical kernel basis over Q(N).

    One vector per non-pivot column of the reduced echelon form (pivots
    chosen left to right), with denominators cleared, polynomial content
    divided out and the first nonzero entry having positive leading
    coefficient.
    """
    _check_budget(*m.shape, max_entries)
    rows, _ = _zpoly_rows(m)
    pivots = _gauss_jordan(rows, m.ncols, ZPOLY_RING, reduced=True)
    basis = _kernel_from_rref(rows, pivots, m.ncols, ZPOLY_RING)
    return [[PolyN.from_zpoly(x) for x in v] for v in basis]


def nullspace_at(m: MatrixQN, n0: int | Fraction, max_entries: int | None = None) -> list[list[int]]:
    """Canonical kernel basis over Q at ``N = n0`` as primitive integer vectors."""
    _check_budget(*m.shape, max_entries)
    rows = _int_rows(m, n0)
    pivots = _gauss_jordan(rows, m.ncols, INT_RING, reduced=True)
    return _kernel_from_rref(rows, pivots, m.ncols, INT_RING)


def determinant(m: MatrixQN) -> RatFuncN:
    """Exact determinant via Bareiss fraction-free elimination."""
    n = m.nrows
    if n != m.ncols:
        raise ShapeError("determinant of a non-square matrix")
    if n == 0:
        return RatFuncN.coerce(1)
    a, mults = _zpoly_rows(m)
    sign = 1
    prev = Z.ONE
    for k in range(n - 1):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return RatFuncN.coerce(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                t = Z.sub(Z.mul(akk, a[i][j]), Z.mul(aik, a[k][j]))
                a[i][j] = Z.exquo(t, prev) if t else Z.ZERO
        prev = akk
    det = Z.scale(a[n - 1][n - 1], sign)
    denom = Z.ONE
    for x in mults:
        denom = Z.mul(denom, x)
    return RatFuncN(PolyN.from_zpoly(det), PolyN.from_zpoly(denom))


def inverse(m: MatrixQN) -> MatrixQN:
    """Exact inverse over Q(N) by fraction-free Gauss-Jordan on ``[M | I]``."""
    n = m.nrows
    if n != m.ncols:
        raise ShapeError("inverse of a non-square matrix")
    rows, _ = _zpoly_rows(m)
    for i, r in enumerate(rows):
        r.extend(Z.ONE if j == i else Z.ZERO for j in range(n))
    pivots = _gauss_jordan(rows, 2 * n, ZPOLY_RING, reduced=True, pivot_cols=n)
    if len(pivots) < n:
        raise ZeroDivisionError("matrix is singular over Q(N)")
    out = []
    for i in range(n):
        d = PolyN.from_zpoly(rows[i][i])
        out.append([RatFuncN(PolyN.from_zpoly(x), d) if x else RatFuncN.coerce(0)
                    for x in rows[i][n:]])
    return MatrixQN(out)


def in_kernel(m: MatrixQN, v: Sequence[object], n0: int | Fraction | None = None) -> bool:
    """Whether ``M v = 0`` over Q(N), or over Q at ``N = n0``."""
    if n0 is None:
        return all(not x for x in m.apply(v))
    vals = [RatFuncN.coerce(x).evaluate(n0) for x in v]
    return all(sum(a * b for a, b in zip(row, vals)) == 0 for row in m.substitute(n0))


def in_row_span(m: MatrixQN, v: Sequence[object], n0: int | Fraction | None = None) -> bool:
    """Whether ``v`` is a linear combination of the rows of ``M``."""
    aug = m.vstack(MatrixQN([v]))
    if n0 is None:
        return rank_generic(aug) == rank_generic(m)
    return rank_at(aug, n0) == rank_at(m, n0)


def solve_membership(m: MatrixQN, v: Sequence[object], n0: int | Fraction | None = None,
                     mode: str = "kernel") -> bool:
    """Membership of ``v`` in the kernel (``mode="kernel"``) or row span (``mode="rows"``)."""
    if mode == "kernel":
        return in_kernel(m, v, n0)
    if mode == "rows":
        return in_row_span(m, v, n0)
    raise ValueError(f"unknown membership mode {mode!r}")


__all__ = [
    "MatrixQN", "rank_generic", "rank_at", "integer_rank", "nullspace_generic",
    "nullspace_at", "determinant", "inverse", "in_kernel", "in_row_span",
    "solve_membership", "SpecializationError",
]
