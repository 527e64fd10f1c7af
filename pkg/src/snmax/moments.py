"""Moment matrices at levels five and six and their analysis.

A family of diagrams ``T`` from ``k`` points to four points gives a matrix
with one row per ``T`` and one column per crossing partition ``p`` of
``[k]``; the entry is ``N**closed`` when ``T`` sends ``xi_p`` onto the basic
crossing and 0 otherwise.  The kernel of this matrix describes the vectors
that no operator in the family can reduce to the basic crossing.
"""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .algebra import (
    MatrixQN,
    PolyN,
    RatFuncN,
    determinant,
    in_kernel,
    nullspace_at,
    nullspace_generic,
    rank_at,
    rank_generic,
)
from .algebra.poly import N as N_POLY
from .algebra.poly import factored
from .partitions import (
    CROSSING,
    SetPartition,
    TwoLinePartition,
    apply_diagram,
    compose,
    enumerate_partitions,
    reflect,
    rotate,
    tensor,
)


@dataclass(frozen=True)
class Morphism:
    name: str
    diagram: TwoLinePartition


@dataclass(frozen=True)
class MorphismFamily:
    label: str
    members: tuple[Morphism, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Morphism]:
        return iter(self.members)

    def __add__(self, other: MorphismFamily) -> MorphismFamily:
        return MorphismFamily(f"{self.label}+{other.label}", self.members + other.members)


def cyclic_wiring(k: int, merges: Sequence[Iterable[int]], caps: Iterable[int] = (),
                  fans: Sequence[Iterable[int]] = ()) -> TwoLinePartition:
    """Diagram on ``k`` points merging cyclically consecutive groups of points.

    Each group in ``merges`` becomes one output point and each group in
    ``fans`` becomes a block with two output points; points in ``caps`` are
    capped off; the remaining points pass straight through.  Outputs are
    listed in cyclic order starting at the first point that does not
    continue a group from its predecessor, so no group wraps around.
    """
    owner: dict[int, tuple[tuple[int, ...], int]] = {}
    for g in merges:
        key = tuple(sorted(g))
        for x in key:
            owner[x] = (key, 1)
    for g in fans:
        key = tuple(sorted(g))
        for x in key:
            owner[x] = (key, 2)
    capped = set(caps)

    def starts_group(s: int) -> bool:
        prev = (s - 2) % k + 1
        return s not in owner or prev not in owner[s][0]

    start = next(s for s in range(1, k + 1) if starts_group(s))
    groups: list[tuple[tuple[int, ...], int]] = []
    placed = set()
    for step in range(k):
        x = (start + step - 1) % k + 1
        if x in capped:
            continue
        if x in owner:
            key, n_out = owner[x]
            if key not in placed:
                placed.add(key)
                groups.append((key, n_out))
        else:
            groups.append(((x,), 1))
    return TwoLinePartition.wiring(k, groups)


def _cyc(x: int, k: int) -> int:
    return (x - 1) % k + 1


def morphisms_k5() -> MorphismFamily:
    """Five singleton cappings, four adjacent merges, and the wrap-around merge of 5 and 1."""
    k = 5
    members = [
        Morphism(f"S{x}", TwoLinePartition.restriction(k, [y for y in range(1, k + 1) if y != x]))
        for x in range(1, k + 1)
    ]
    members += [Morphism(f"M{x}{x + 1}", TwoLinePartition.merge(k, x)) for x in range(1, k)]
    # wrap-around merge: rotate by one, then merge the first two points
    wrap, _ = compose(TwoLinePartition.rotation(k, 1), TwoLinePartition.merge(k, 1))
    members.append(Morphism("M61", wrap))
    return MorphismFamily("k5", tuple(members))


def morphisms_k6_main() -> MorphismFamily:
    """The 66 diagrams from six points to four points used at moment level six."""
    k = 6
    members = [
        Morphism("R{" + ",".join(map(str, kap)) + "}", TwoLinePartition.restriction(k, kap))
        for kap in combinations(range(1, k + 1), 4)
    ]
    for x in range(1, k + 1):
        for y in range(1, k + 1):
            if x == y:
                continue
            partner = _cyc(y + 1, k) if _cyc(y + 1, k) != x else _cyc(y + 2, k)
            members.append(Morphism(f"T({x},{y})", cyclic_wiring(k, [(y, partner)], caps=[x])))
    for x in range(1, k + 1):
        y = _cyc(x + 1, k)
        rest = [_cyc(x + 2 + j, k) for j in range(4)]
        groups = [((x, y), 0)] + [((z,), 1) for z in rest]
        members.append(Morphism(f"S{{{x},{y}}}", TwoLinePartition.wiring(k, groups)))
    pairs = [(x, _cyc(x + 1, k)) for x in range(1, k + 1)]
    for a, b in combinations(pairs, 2):
        if set(a) & set(b):
            continue
        members.append(Morphism(f"MM{a}{b}".replace(" ", ""), cyclic_wiring(k, [a, b])))
    for x in range(1, k + 1):
        trip = (x, _cyc(x + 1, k), _cyc(x + 2, k))
        members.append(Morphism(f"M3{trip}".replace(" ", ""), cyclic_wiring(k, [trip])))
    return MorphismFamily("k6-main", tuple(members))


def morphisms_k6_aux() -> MorphismFamily:
    """Eighteen diagrams from six points to five points."""
    k = 6
    members = [
        Morphism(f"S{x}", TwoLinePartition.restriction(k, [y for y in range(1, k + 1) if y != x]))
        for x in range(1, k + 1)
    ]
    members += [
        Morphism(f"M({x},{_cyc(x + 1, k)})", cyclic_wiring(k, [(x, _cyc(x + 1, k))]))
        for x in range(1, k + 1)
    ]
    for x in range(1, k + 1):
        trip = (x, _cyc(x + 1, k), _cyc(x + 2, k))
        members.append(Morphism(f"F{trip}".replace(" ", ""), cyclic_wiring(k, [], fans=[trip])))
    return MorphismFamily("k6-aux", tuple(members))


def matrix_entry(t: TwoLinePartition, p: SetPartition, target: SetPartition = CROSSING) -> RatFuncN:
    """``N**closed`` if ``t`` sends ``xi_p`` to ``xi_target``, else 0."""
    q, closed = apply_diagram(p, t)
    if q != target:
        return RatFuncN.coerce(0)
    return RatFuncN.coerce(N_POLY**closed)


def build_matrix(family: MorphismFamily | Sequence[Morphism], columns: Sequence[SetPartition],
                 targets: Sequence[SetPartition] | None = None) -> MatrixQN:
    """Rows per morphism (and per target when ``targets`` is given), columns per partition."""
    members = list(family)
    if targets is None:
        targets = [CROSSING]
    rows = []
    for m in members:
        if m.diagram.upper != columns[0].k:
            raise ValueError(f"{m.name} expects {m.diagram.upper} points")
        for tgt in targets:
            if m.diagram.lower != tgt.k:
                raise ValueError(f"{m.name} produces {m.diagram.lower} points, target has {tgt.k}")
            rows.append([matrix_entry(m.diagram, p, tgt) for p in columns])
    return MatrixQN(rows, ncols=len(columns))


def matrix_csv(m: MatrixQN, row_names: Sequence[str], columns: Sequence[SetPartition]) -> str:
    """CSV dump of a moment matrix for external audit."""
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow([""] + [str(p) for p in columns])
    for name, row in zip(row_names, m.rows):
        w.writerow([name] + [str(x) for x in row])
    return buf.getvalue()


def row_names(family: MorphismFamily, targets: Sequence[SetPartition] | None = None) -> list[str]:
    if targets is None:
        return [m.name for m in family]
    return [f"{m.name}->{t}" for m in family for t in targets]


# ---------------------------------------------------------------------------
# Level five
# ---------------------------------------------------------------------------


def eta_vector(columns: Sequence[SetPartition]) -> list[int]:
    """Coefficients +1 on three-block and -2 on two-block crossing partitions of [5]."""
    out = []
    for p in columns:
        if p.num_blocks not in (2, 3):
            raise ValueError(f"{p} has {p.num_blocks} blocks")
        out.append(1 if p.num_blocks == 3 else -2)
    return out


def proportional(u: Sequence[object], v: Sequence[object]) -> bool:
    """Whether two vectors over Q(N) are nonzero multiples of each other."""
    uu = [RatFuncN.coerce(x) for x in u]
    vv = [RatFuncN.coerce(x) for x in v]
    i = next((j for j, x in enumerate(uu) if x), None)
    if i is None or not vv[i]:
        return False
    ratio = vv[i] / uu[i]
    return all(b == ratio * a for a, b in zip(uu, vv))


@dataclass
class K5Report:
    columns: list[SetPartition]
    matrix: MatrixQN
    det: RatFuncN
    det_matches: bool
    rank_at_4: int
    kernel_at_4: list[list[int]]
    kernel_is_eta: bool
    eta_in_nc_span: bool | None = None

    def to_json(self) -> dict:
        return {
            "matrix_shape": list(self.matrix.shape),
            "det": factored(self.det.as_poly()),
            "det_coeffs": self.det.num.to_json(),
            "det_matches_expected": self.det_matches,
            "rank_at_4": self.rank_at_4,
            "kernel_at_4": self.kernel_at_4,
            "kernel_is_eta": self.kernel_is_eta,
            "eta_in_nc_span_at_4": self.eta_in_nc_span,
            "columns": [str(p) for p in self.columns],
        }


EXPECTED_DET_K5 = -(N_POLY - 4) * (N_POLY**2 - 3 * N_POLY + 1) ** 2


def analyze_k5(check_dense: bool = True) -> K5Report:
    cols = enumerate_partitions(5, "CR")
    m = build_matrix(morphisms_k5(), cols)
    det = determinant(m)
    ker = nullspace_at(m, 4)
    eta = eta_vector(cols)
    report = K5Report(
        columns=cols,
        matrix=m,
        det=det,
        det_matches=det == EXPECTED_DET_K5 or det == -EXPECTED_DET_K5,
        rank_at_4=rank_at(m, 4),
        kernel_at_4=ker,
        kernel_is_eta=len(ker) == 1 and proportional(ker[0], eta),
    )
    if check_dense:
        from .vectors import expand_dense_many, in_dense_span

        dense_eta = sum(c * row for c, row in zip(eta, expand_dense_many(cols, 4)))
        report.eta_in_nc_span = in_dense_span(dense_eta, enumerate_partitions(5, "NC"), 4)
    return report


# ---------------------------------------------------------------------------
# Level six
# ---------------------------------------------------------------------------


def _sweep_worker(args: tuple[MatrixQN, int]) -> tuple[int, int]:
    m, n0 = args
    return n0, rank_at(m, n0)


def rank_sweep(m: MatrixQN, values: Iterable[int], threads: int | None = None) -> Iterator[tuple[int, int]]:
    """Yield ``(N0, rank)`` for each value, in order."""
    vals = list(values)
    threads = threads or os.cpu_count() or 1
    if threads <= 1 or len(vals) < 2:
        for n0 in vals:
            yield n0, rank_at(m, n0)
        return
    with ProcessPoolExecutor(max_workers=threads) as ex:
        yield from ex.map(_sweep_worker, [(m, n0) for n0 in vals])


def coordinate_action(v: Sequence[object], columns: Sequence[SetPartition], perm) -> list[object]:
    """Push a coefficient vector forward along a bijection of the column partitions."""
    index = {p: i for i, p in enumerate(columns)}
    out: list[object] = [0] * len(columns)
    for i, p in enumerate(columns):
        out[index[perm(p)]] = v[i]
    return out


@dataclass
class K6Report:
    columns: list[SetPartition]
    matrix: MatrixQN
    generic_rank: int
    kernel_basis: list[list[PolyN]]
    kernel_degrees: list[int] = field(default_factory=list)
    rank_at: dict[int, int] = field(default_factory=dict)
    rotation_invariant: bool | None = None
    reflection_invariant: bool | None = None
    r3_identity: bool | None = None
    augmented_rank: int | None = None

    @property
    def kernel_dim(self) -> int:
        return len(self.kernel_basis)

    def to_json(self, include_basis: bool = True) -> dict:
        out: dict = {
            "matrix_shape": list(self.matrix.shape),
            "generic_rank": self.generic_rank,
            "kernel_dim": self.kernel_dim,
            "kernel_degrees": self.kernel_degrees,
            "sweep": {str(k): v for k, v in sorted(self.rank_at.items())},
        }
        if include_basis:
            out["kernel_basis"] = [[x.to_json() for x in v] for v in self.kernel_basis]
            out["columns"] = [str(p) for p in self.columns]
        for key in ("rotation_invariant", "reflection_invariant", "r3_identity", "augmented_rank"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        return out


def k6_columns() -> list[SetPartition]:
    return enumerate_partitions(6, "CR")


def k6_matrix() -> MatrixQN:
    return build_matrix(morphisms_k6_main(), k6_columns())


def k6_aux_matrix() -> MatrixQN:
    return build_matrix(morphisms_k6_aux(), k6_columns(), enumerate_partitions(5, "CR"))


def kernel_symmetry(m: MatrixQN, basis: Sequence[Sequence[PolyN]], columns: Sequence[SetPartition]) -> dict[str, bool]:
    """Check that rotation and reflection map the kernel into itself and ``r^3`` fixes it."""
    rot = [coordinate_action(v, columns, lambda p: rotate(p, 1)) for v in basis]
    ref = [coordinate_action(v, columns, reflect) for v in basis]
    r3 = [coordinate_action(v, columns, lambda p: rotate(p, 3)) for v in basis]
    return {
        "rotation_invariant": all(in_kernel(m, w) for w in rot),
        "reflection_invariant": all(in_kernel(m, w) for w in ref),
        "r3_identity": all(list(w) == list(v) for w, v in zip(r3, basis)),
    }


def analyze_k6(sweep: Iterable[int] = (), symmetry: bool = True, augment: bool = True,
               at: Iterable[int] = (4,), threads: int | None = None) -> K6Report:
    cols = k6_columns()
    m = k6_matrix()
    basis = nullspace_generic(m)
    report = K6Report(
        columns=cols,
        matrix=m,
        generic_rank=rank_generic(m),
        kernel_basis=basis,
        kernel_degrees=[max(x.degree() for x in v) for v in basis],
    )
    for n0 in at:
        report.rank_at[n0] = rank_at(m, n0)
    for n0, r in rank_sweep(m, sweep, threads):
        report.rank_at[n0] = r
    if symmetry:
        sym = kernel_symmetry(m, basis, cols)
        report.rotation_invariant = sym["rotation_invariant"]
        report.reflection_invariant = sym["reflection_invariant"]
        report.r3_identity = sym["r3_identity"]
    if augment:
        report.augmented_rank = rank_generic(m.vstack(k6_aux_matrix()))
    return report


def kernel_matrix(basis: Sequence[Sequence[PolyN]]) -> list[list[PolyN]]:
    """Matrix ``V`` whose row ``j`` is the ``j``-th coordinate of every basis vector."""
    return [list(row) for row in zip(*basis)]


# ---------------------------------------------------------------------------
# Hermitian form
# ---------------------------------------------------------------------------


def pairing_diagram() -> TwoLinePartition:
    """The diagram from twelve points to four used to pair two level-six vectors.

    Points 1, 2, 11, 12 are capped as singletons, 5-8 and 6-7 are joined by
    nested caps, and 3, 4, 9, 10 pass through.
    """
    return TwoLinePartition.wiring(
        12, [((3,), 1), ((4,), 1), ((5, 8), 0), ((6, 7), 0), ((9,), 1), ((10,), 1)]
    )


@dataclass
class HermitianReport:
    matrix: list[list[PolyN]]
    pairing_nonzeros: int
    symmetric: bool
    zero_diagonal: bool
    positive_definite: dict[int, bool]

    @property
    def is_zero(self) -> bool:
        return all(not x for row in self.matrix for x in row)

    def to_json(self) -> dict:
        return {
            "B": [[x.to_json() for x in row] for row in self.matrix],
            "pairing_nonzeros": self.pairing_nonzeros,
            "symmetric": self.symmetric,
            "zero_diagonal": self.zero_diagonal,
            "identically_zero": self.is_zero,
            "positive_definite": {str(k): v for k, v in self.positive_definite.items()},
        }


def pairing_matrix(columns: Sequence[SetPartition], reflect_second: bool = True) -> dict[tuple[int, int], int]:
    """Nonzero cells ``(q, r) -> closed`` where the pairing of ``xi_q`` and ``xi_r`` gives the crossing."""
    t = pairing_diagram()
    out = {}
    for a, q in enumerate(columns):
        for b, r in enumerate(columns):
            r2 = reflect(r) if reflect_second else r
            body = tensor(TwoLinePartition.from_vector(q), TwoLinePartition.from_vector(r2)).body
            res, closed = apply_diagram(body, t)
            if res == CROSSING:
                out[(a, b)] = closed
    return out


def hermitian_form_B(basis: Sequence[Sequence[PolyN]], columns: Sequence[SetPartition],
                     sample: Iterable[int] = (6,), reflect_second: bool = True) -> HermitianReport:
    d = pairing_matrix(columns, reflect_second)
    n = len(basis)
    bm = [[PolyN() for _ in range(n)] for _ in range(n)]
    for (a, b), closed in d.items():
        w = N_POLY**closed
        for i in range(n):
            via = basis[i][a]
            if not via:
                continue
            for j in range(n):
                if basis[j][b]:
                    bm[i][j] = bm[i][j] + via * basis[j][b] * w
    pd = {}
    for n0 in sample:
        vals = [[x.evaluate(n0) for x in row] for row in bm]
        pd[n0] = _pd_rational(vals)
    return HermitianReport(
        matrix=bm,
        pairing_nonzeros=len(d),
        symmetric=all(bm[i][j] == bm[j][i] for i in range(n) for j in range(n)),
        zero_diagonal=all(not bm[i][i] for i in range(n)),
        positive_definite=pd,
    )


def _pd_rational(vals: Sequence[Sequence[object]]) -> bool:
    """Positive definiteness of a symmetric rational matrix via exact pivots."""
    n = len(vals)
    a = [[Fraction(x) for x in row] for row in vals]
    for s in range(n):
        piv = a[s][s]
        if piv <= 0:
            return False
        for i in range(s + 1, n):
            f = a[i][s] / piv
            for j in range(s, n):
                a[i][j] -= f * a[s][j]
    return True
