"""Set partitions, crossings, dihedral actions and two-line partition diagrams.

A set partition of ``[k] = {1, ..., k}`` is stored as its restricted growth
string (RGS): ``rgs[i]`` is the index of the block containing point ``i + 1``,
with blocks numbered in order of their minima.  This makes every partition
canonical and hashable, and enumeration in lexicographic RGS order is the
fixed ordering used for indexing throughout the package.

Points are 1-based in every public function.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import ShapeError, SizeError

Crossing = tuple[int, int, int, int]

MAX_ENUMERATION_K = 12
_RGS_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"
FILTERS = ("all", "NC", "CR", "singleton-free")


class _DisjointSet:
    """Union-find with path halving over ``0..n-1``."""

    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def canonical_rgs(labels: Sequence[object]) -> tuple[int, ...]:
    """Relabel an arbitrary label sequence into restricted growth form."""
    seen: dict[object, int] = {}
    out = []
    for lab in labels:
        if lab not in seen:
            seen[lab] = len(seen)
        out.append(seen[lab])
    return tuple(out)


@dataclass(frozen=True, order=True)
class SetPartition:
    """A set partition of ``[k]`` in restricted growth form."""

    rgs: tuple[int, ...]

    def __post_init__(self) -> None:
        top = -1
        for x in self.rgs:
            if not isinstance(x, int) or x < 0 or x > top + 1:
                raise ValueError(f"not a restricted growth string: {self.rgs!r}")
            top = max(top, x)

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_labels(cls, labels: Sequence[object]) -> SetPartition:
        """Partition of positions by equality of labels, e.g. a kernel."""
        return cls(canonical_rgs(labels))

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], k: int | None = None) -> SetPartition:
        blocks = [sorted(b) for b in blocks]
        points = sorted(x for b in blocks for x in b)
        if k is None:
            k = len(points)
        if points != list(range(1, k + 1)):
            raise ValueError(f"blocks {blocks!r} do not partition [1..{k}]")
        labels = [0] * k
        for idx, b in enumerate(blocks):
            for x in b:
                labels[x - 1] = idx
        return cls.from_labels(labels)

    @classmethod
    def parse(cls, text: str) -> SetPartition:
        """Parse block form ``{1,3}{2,4}`` or RGS form ``rgs:0101``."""
        s = text.strip()
        if s.startswith("rgs:"):
            digits = s[4:].strip()
            try:
                return cls(tuple(_RGS_DIGITS.index(ch) for ch in digits.lower()))
            except ValueError as exc:
                raise ValueError(f"bad RGS text {text!r}") from exc
        s = s.replace(" ", "")
        if s in ("", "{}"):
            return cls(())
        if not (s.startswith("{") and s.endswith("}")):
            raise ValueError(f"bad partition text {text!r}")
        blocks = []
        for chunk in s[1:-1].split("}{"):
            if not chunk:
                raise ValueError(f"empty block in {text!r}")
            blocks.append([int(x) for x in chunk.split(",")])
        return cls.from_blocks(blocks)

    @classmethod
    def discrete(cls, k: int) -> SetPartition:
        return cls(tuple(range(k)))

    @classmethod
    def one_block(cls, k: int) -> SetPartition:
        return cls((0,) * k)

    # -- basic data -------------------------------------------------------
    @property
    def k(self) -> int:
        return len(self.rgs)

    @property
    def num_blocks(self) -> int:
        return max(self.rgs) + 1 if self.rgs else 0

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.num_blocks)]
        for i, b in enumerate(self.rgs):
            out[b].append(i + 1)
        return tuple(tuple(b) for b in out)

    def same_block(self, a: int, b: int) -> bool:
        return self.rgs[a - 1] == self.rgs[b - 1]

    def singletons(self) -> tuple[int, ...]:
        return tuple(b[0] for b in self.blocks if len(b) == 1)

    def has_singleton(self) -> bool:
        return bool(self.singletons())

    def is_noncrossing(self) -> bool:
        return not any(True for _ in _iter_crossings(self.rgs))

    def __str__(self) -> str:
        return "".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks)

    def to_rgs_text(self) -> str:
        return "rgs:" + "".join(_RGS_DIGITS[x] for x in self.rgs)


CROSSING = SetPartition((0, 1, 0, 1))
"""The basic crossing ``{1,3}{2,4}`` of four points."""


def _iter_crossings(rgs: Sequence[int]) -> Iterator[Crossing]:
    k = len(rgs)
    for a in range(k):
        for c in range(a + 2, k):
            if rgs[a] != rgs[c]:
                continue
            for b in range(a + 1, c):
                if rgs[b] == rgs[a]:
                    continue
                for d in range(c + 1, k):
                    if rgs[d] == rgs[b]:
                        yield (a + 1, b + 1, c + 1, d + 1)


def crossings(p: SetPartition) -> frozenset[Crossing]:
    """All quadruples ``a < b < c < d`` with ``a ~ c``, ``b ~ d`` and ``a`` not ``~ b``."""
    return frozenset(_iter_crossings(p.rgs))


def crossers(p: SetPartition) -> tuple[int, ...]:
    """Sorted points that occur in at least one crossing."""
    return tuple(sorted({x for q in _iter_crossings(p.rgs) for x in q}))


def restrict(p: SetPartition, points: Iterable[int]) -> tuple[SetPartition, int]:
    """Restrict ``p`` to ``points`` (relabelled increasingly).

    Returns the restricted partition together with the number of blocks of
    ``p`` that contain none of the retained points.
    """
    keep = sorted(set(points))
    if not keep:
        raise ValueError("cannot restrict to an empty set of points")
    if keep[0] < 1 or keep[-1] > p.k:
        raise ValueError(f"points {keep} outside [1..{p.k}]")
    labels = [p.rgs[x - 1] for x in keep]
    deleted = p.num_blocks - len(set(labels))
    return SetPartition.from_labels(labels), deleted


def crossing_decomposition(p: SetPartition) -> tuple[SetPartition, SetPartition, tuple[int, ...]]:
    """Split ``p`` into its restriction to crossers and to non-crossers."""
    chi = crossers(p)
    rest = [x for x in range(1, p.k + 1) if x not in set(chi)]
    empty = SetPartition(())
    pcr = restrict(p, chi)[0] if chi else empty
    pnc = restrict(p, rest)[0] if rest else empty
    return pcr, pnc, chi


def rotation_map(k: int, n: int) -> tuple[int, ...]:
    """Images of ``1..k`` under the cyclic shift by ``n``."""
    return tuple((i + n - 1) % k + 1 for i in range(1, k + 1))


def reflection_map(k: int) -> tuple[int, ...]:
    """Images of ``1..k`` under the reversal ``i -> (k - i) mod k + 1``."""
    return tuple((k - i) % k + 1 for i in range(1, k + 1))


def permute(p: SetPartition, sigma: Sequence[int]) -> SetPartition:
    """The partition with blocks ``sigma(B)``; ``sigma[i-1]`` is the image of ``i``."""
    if sorted(sigma) != list(range(1, p.k + 1)):
        raise ValueError(f"{sigma!r} is not a permutation of [1..{p.k}]")
    labels = [0] * p.k
    for i, b in enumerate(p.rgs):
        labels[sigma[i] - 1] = b
    return SetPartition.from_labels(labels)


def rotate(p: SetPartition, n: int) -> SetPartition:
    return permute(p, rotation_map(p.k, n)) if p.k else p


def reflect(p: SetPartition) -> SetPartition:
    return permute(p, reflection_map(p.k)) if p.k else p


def refines(p: SetPartition, q: SetPartition) -> bool:
    """True when every block of ``p`` lies inside a block of ``q``."""
    if p.k != q.k:
        raise ShapeError("partitions of different sizes")
    image: dict[int, int] = {}
    for a, b in zip(p.rgs, q.rgs):
        if image.setdefault(a, b) != b:
            return False
    return True


def join(p: SetPartition, q: SetPartition) -> SetPartition:
    """Least upper bound in the lattice of all set partitions."""
    if p.k != q.k:
        raise ShapeError("partitions of different sizes")
    ds = _DisjointSet(p.k)
    for part in (p, q):
        first: dict[int, int] = {}
        for i, b in enumerate(part.rgs):
            ds.union(first.setdefault(b, i), i)
    return SetPartition.from_labels([ds.find(i) for i in range(p.k)])


def kernel(indices: Sequence[object]) -> SetPartition:
    """The partition of positions of a multi-index by equal values."""
    return SetPartition.from_labels(indices)


def _iter_rgs(k: int) -> Iterator[tuple[int, ...]]:
    if k == 0:
        yield ()
        return
    rgs = [0] * k
    top = [0] * k  # top[i] = max(rgs[:i+1])
    while True:
        yield tuple(rgs)
        i = k - 1
        while i > 0 and rgs[i] > top[i - 1]:
            i -= 1
        if i == 0:
            return
        rgs[i] += 1
        top[i] = max(top[i - 1], rgs[i])
        for j in range(i + 1, k):
            rgs[j] = 0
            top[j] = top[i]


def iter_partitions(k: int, filter: str = "all") -> Iterator[SetPartition]:
    """Lazily enumerate partitions of ``[k]`` in lexicographic RGS order."""
    if filter not in FILTERS:
        raise ValueError(f"unknown filter {filter!r}; expected one of {FILTERS}")
    if not 1 <= k <= MAX_ENUMERATION_K:
        raise SizeError(f"k={k} outside supported range 1..{MAX_ENUMERATION_K}")
    for rgs in _iter_rgs(k):
        if filter == "all":
            yield SetPartition(rgs)
            continue
        if filter == "singleton-free":
            if all(rgs.count(b) > 1 for b in set(rgs)):
                yield SetPartition(rgs)
            continue
        crossing = next(_iter_crossings(rgs), None) is not None
        if crossing == (filter == "CR"):
            yield SetPartition(rgs)


def enumerate_partitions(k: int, filter: str = "all") -> list[SetPartition]:
    """All partitions of ``[k]`` passing ``filter``, in lexicographic RGS order."""
    return list(iter_partitions(k, filter))


# ---------------------------------------------------------------------------
# Two-line partitions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TwoLinePartition:
    """A partition of ``upper + lower`` points drawn on two rows.

    ``body`` is a partition of ``[upper + lower]`` where points
    ``1..upper`` are the upper row and ``upper+1..upper+lower`` the lower
    row, both read left to right.  As a linear map it sends tensors of
    rank ``upper`` to tensors of rank ``lower``.
    """

    upper: int
    lower: int
    body: SetPartition

    def __post_init__(self) -> None:
        if self.body.k != self.upper + self.lower:
            raise ShapeError(
                f"body has {self.body.k} points, expected {self.upper}+{self.lower}"
            )

    @classmethod
    def from_vector(cls, p: SetPartition) -> TwoLinePartition:
        """View ``p`` as a diagram with no upper points."""
        return cls(0, p.k, p)

    def to_vector(self) -> SetPartition:
        if self.upper != 0:
            raise ShapeError("diagram has upper points")
        return self.body

    @classmethod
    def identity(cls, k: int) -> TwoLinePartition:
        return cls(k, k, SetPartition.from_labels(list(range(k)) * 2))

    @classmethod
    def permutation(cls, sigma: Sequence[int]) -> TwoLinePartition:
        """Diagram joining upper ``i`` to lower ``sigma(i)``; it sends ``p`` to ``sigma(p)``."""
        k = len(sigma)
        if sorted(sigma) != list(range(1, k + 1)):
            raise ValueError(f"{sigma!r} is not a permutation")
        labels = list(range(k)) + [0] * k
        for i, s in enumerate(sigma):
            labels[k + s - 1] = i
        return cls(k, k, SetPartition.from_labels(labels))

    @classmethod
    def rotation(cls, k: int, n: int = 1) -> TwoLinePartition:
        return cls.permutation(rotation_map(k, n))

    @classmethod
    def reflection(cls, k: int) -> TwoLinePartition:
        return cls.permutation(reflection_map(k))

    @classmethod
    def wiring(cls, k: int, groups: Sequence[tuple[Iterable[int], int]]) -> TwoLinePartition:
        """Build a diagram from ``k`` upper points by listing its blocks.

        ``groups`` is a sequence of ``(upper_points, n_lower)`` in output
        order; each group becomes one block containing those upper points and
        the next ``n_lower`` lower points.  Upper points not mentioned become
        singleton blocks.
        """
        labels: list[int] = [-1] * k
        lower_labels: list[int] = []
        for gid, (pts, n_lower) in enumerate(groups):
            for x in pts:
                if not 1 <= x <= k or labels[x - 1] != -1:
                    raise ValueError(f"bad or repeated upper point {x}")
                labels[x - 1] = gid
            lower_labels.extend([gid] * n_lower)
        nxt = len(groups)
        for i in range(k):
            if labels[i] == -1:
                labels[i] = nxt
                nxt += 1
        return cls(k, len(lower_labels), SetPartition.from_labels(labels + lower_labels))

    @classmethod
    def restriction(cls, k: int, points: Iterable[int]) -> TwoLinePartition:
        """Diagram keeping ``points`` as through-lines and capping the rest."""
        return cls.wiring(k, [((x,), 1) for x in sorted(set(points))])

    @classmethod
    def semicircle(cls, k: int, i: int, j: int) -> TwoLinePartition:
        """Join points ``i < j`` with a cap, cap everything strictly between them, keep the rest."""
        if not 1 <= i < j <= k:
            raise ValueError(f"need 1 <= i < j <= k, got {i}, {j}, {k}")
        groups: list[tuple[Iterable[int], int]] = [((x,), 1) for x in range(1, i)]
        groups.append(((i, j), 0))
        groups.extend(((x,), 1) for x in range(j + 1, k + 1))
        return cls.wiring(k, groups)

    @classmethod
    def merge(cls, k: int, x: int) -> TwoLinePartition:
        """Merge adjacent upper points ``x, x+1`` into one lower point."""
        if not 1 <= x < k:
            raise ValueError(f"need 1 <= x < k, got {x}, {k}")
        groups = [((y,), 1) for y in range(1, x)] + [((x, x + 1), 1)]
        groups += [((y,), 1) for y in range(x + 2, k + 1)]
        return cls.wiring(k, groups)

    def __str__(self) -> str:
        return f"P({self.upper},{self.lower}):{self.body}"


def cup() -> TwoLinePartition:
    """Two upper points joined, no lower points."""
    return TwoLinePartition(2, 0, SetPartition((0, 0)))


def cap() -> TwoLinePartition:
    """Two lower points joined, no upper points."""
    return TwoLinePartition(0, 2, SetPartition((0, 0)))


def compose(top: TwoLinePartition, bottom: TwoLinePartition) -> tuple[TwoLinePartition, int]:
    """Stack ``top`` above ``bottom``, gluing ``top``'s lower row to ``bottom``'s upper row.

    Returns the composite and the number of closed components, i.e. blocks
    that live entirely on the glued middle row.  As linear maps,
    ``dense(bottom) @ dense(top) == N**closed * dense(result)``.
    """
    if top.lower != bottom.upper:
        raise ShapeError(f"cannot glue {top.lower} lower points to {bottom.upper} upper points")
    k, m, r = top.upper, top.lower, bottom.lower
    n = k + m + r
    ds = _DisjointSet(n)
    # global indices: top upper 0..k-1, middle k..k+m-1, bottom lower k+m..n-1
    first: dict[int, int] = {}
    for i, b in enumerate(top.body.rgs):
        ds.union(first.setdefault(b, i), i)
    first = {}
    for i, b in enumerate(bottom.body.rgs):
        g = k + i  # bottom upper i is middle point i; bottom lower maps past the middle
        ds.union(first.setdefault(b, g), g)
    outer = list(range(k)) + list(range(k + m, n))
    outer_roots = {ds.find(x) for x in outer}
    closed = len({ds.find(x) for x in range(k, k + m)} - outer_roots)
    body = SetPartition.from_labels([ds.find(x) for x in outer])
    return TwoLinePartition(k, r, body), closed


def apply_diagram(p: SetPartition, t: TwoLinePartition) -> tuple[SetPartition, int]:
    """Apply a diagram to a partition vector, returning the image and closed loops."""
    res, closed = compose(TwoLinePartition.from_vector(p), t)
    return res.body, closed


def tensor(a: TwoLinePartition, b: TwoLinePartition) -> TwoLinePartition:
    """Place ``a`` to the left of ``b``."""
    ka, la, kb, lb = a.upper, a.lower, b.upper, b.lower
    labels: list[tuple[int, int]] = [(0, 0)] * (ka + kb + la + lb)
    for i, x in enumerate(a.body.rgs):
        pos = i if i < ka else ka + kb + (i - ka)
        labels[pos] = (0, x)
    for i, x in enumerate(b.body.rgs):
        pos = ka + i if i < kb else ka + kb + la + (i - kb)
        labels[pos] = (1, x)
    return TwoLinePartition(ka + kb, la + lb, SetPartition.from_labels(labels))


def involute(t: TwoLinePartition) -> TwoLinePartition:
    """Swap the two rows (the adjoint diagram)."""
    rgs = t.body.rgs
    return TwoLinePartition(t.lower, t.upper, SetPartition.from_labels(rgs[t.upper:] + rgs[: t.upper]))


def subsets_of_size_at_least(k: int, m: int) -> Iterator[tuple[int, ...]]:
    """Subsets of ``[k]`` with at least ``m`` elements, by size then lexicographically."""
    for size in range(m, k + 1):
        yield from combinations(range(1, k + 1), size)
