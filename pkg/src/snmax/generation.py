"""Witnesses that a combination of partition vectors generates the basic crossing.

The tools here turn case analyses on crossing sets into checkable objects:
crossing-set Venn profiles, unique-crossing witnesses, indicator matrices,
the three-term case dispatcher, and a bounded breadth-first search for an
explicit operator sequence sending a vector to a nonzero multiple of the
basic crossing.  Every certificate can be replayed symbolically and against
dense expansions.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Mapping, Sequence

import numpy as np

from .algebra import RatFuncN, integer_rank
from .algebra.poly import factored
from .errors import ShapeError, SpecializationError
from .partitions import (
    CROSSING,
    Crossing,
    SetPartition,
    TwoLinePartition,
    crossers,
    crossing_decomposition,
    crossings,
    enumerate_partitions,
    refines,
    restrict,
)
from .vectors import PartitionVector, apply_morphism, dense_apply, expand_dense_vector, red_cr


# ---------------------------------------------------------------------------
# Crossing profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CrossingProfile:
    partitions: tuple[SetPartition, ...]
    crossing_sets: tuple[frozenset[Crossing], ...]
    venn: Mapping[str, frozenset[Crossing]]

    @classmethod
    def of(cls, ps: Sequence[SetPartition]) -> CrossingProfile:
        if len({p.k for p in ps}) > 1:
            raise ShapeError("partitions on different numbers of points")
        sets = tuple(crossings(p) for p in ps)
        cells: dict[str, set[Crossing]] = {}
        for kap in set().union(*sets) if sets else set():
            key = "".join("1" if kap in s else "0" for s in sets)
            cells.setdefault(key, set()).add(kap)
        return cls(tuple(ps), sets, {k: frozenset(v) for k, v in sorted(cells.items())})

    def shaded(self, weight: int) -> list[str]:
        return [k for k in self.venn if k.count("1") == weight]


def unique_crossing_witness(ps: Sequence[SetPartition], j: int) -> Crossing | None:
    """Smallest crossing of ``ps[j]`` (0-based) that no other partition has."""
    mine = crossings(ps[j])
    others = set().union(*(crossings(p) for i, p in enumerate(ps) if i != j))
    unique = sorted(mine - others)
    return unique[0] if unique else None


def indicator_matrix(ps: Sequence[SetPartition]) -> tuple[list[Crossing], list[list[int]]]:
    """One row per crossing in the union of crossing sets; entry 1 when it lies in ``cr(ps[j])``."""
    sets = [crossings(p) for p in ps]
    kappas = sorted(set().union(*sets)) if sets else []
    return kappas, [[1 if kap in s else 0 for s in sets] for kap in kappas]


def spanning(ps: Sequence[SetPartition]) -> bool:
    """Whether the crossing indicator vectors span ``Q^m`` for ``m = len(ps)``."""
    _, rows = indicator_matrix(ps)
    return integer_rank(rows) == len(ps)


LEVEL3_LABELS = (
    "all-NC", "unique-crossing", "all-equal", "equal-plus-two",
    "all-pairwise", "disjoint-union", "reduce-to-two",
)


@dataclass(frozen=True)
class Level3Case:
    label: str
    profile: CrossingProfile
    detail: str

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "detail": self.detail,
            "venn": {k: [list(c) for c in sorted(v)] for k, v in self.profile.venn.items()},
        }


def classify_level3(p1: SetPartition, p2: SetPartition, p3: SetPartition) -> Level3Case:
    """Dispatch a three-term combination to the case that settles it."""
    prof = CrossingProfile.of([p1, p2, p3])
    w1, w2, w3 = prof.shaded(1), prof.shaded(2), prof.shaded(3)
    if not prof.venn:
        return Level3Case("all-NC", prof, "no partition has a crossing")
    if w1:
        j = w1[0].index("1")
        return Level3Case("unique-crossing", prof, f"a crossing unique to p{j + 1}")
    if w3 and not w2:
        return Level3Case("all-equal", prof, "all crossing sets coincide")
    if w3:
        return Level3Case("equal-plus-two", prof, "a common crossing and one missing from a single partition")
    if len(w2) == 3:
        return Level3Case("all-pairwise", prof, "each partition misses a crossing shared by the other two")
    if len(w2) == 2:
        common = [i for i in range(3) if all(k[i] == "1" for k in w2)][0]
        return Level3Case("disjoint-union", prof, f"cr(p{common + 1}) is the disjoint union of the other two")
    empty = w2[0].index("0")
    return Level3Case("reduce-to-two", prof, f"p{empty + 1} is noncrossing and drops out")


# ---------------------------------------------------------------------------
# Structural checks on crossing sets
# ---------------------------------------------------------------------------


def check_blocks_are_crossing_or_not(k: int) -> bool:
    """Every point in a block meeting a crossing lies in a crossing itself."""
    for p in enumerate_partitions(k, "CR"):
        chi = set(crossers(p))
        for b in p.blocks:
            if chi & set(b) and not set(b) <= chi:
                return False
    return True


def check_equal_crossings_equal_parts(k: int) -> bool:
    """Equal crossing sets force equal crossing parts (with equal crosser sets)."""
    groups: dict[frozenset[Crossing], set[tuple[tuple[int, ...], SetPartition]]] = {}
    for p in enumerate_partitions(k, "CR"):
        cr_part, _, chi = crossing_decomposition(p)
        groups.setdefault(crossings(p), set()).add((chi, cr_part))
    return all(len(v) == 1 for v in groups.values())


def check_contained_crossings_refine(k: int) -> bool:
    """``cr(p) <= cr(q)`` implies the crossing part of ``p`` refines ``q`` restricted to the crossers of ``p``."""
    cr = enumerate_partitions(k, "CR")
    info = [(p, crossings(p), crossers(p)) for p in cr]
    for p, cp, chi in info:
        pcr = restrict(p, chi)[0]
        for q, cq, _ in info:
            if cp <= cq and not refines(pcr, restrict(q, chi)[0]):
                return False
    return True


# ---------------------------------------------------------------------------
# Certificate search
# ---------------------------------------------------------------------------


def op_diagram(op: Mapping) -> TwoLinePartition:
    kind, k = op["kind"], int(op["k"])
    if kind == "restriction":
        return TwoLinePartition.restriction(k, op["points"])
    if kind == "semicircle":
        return TwoLinePartition.semicircle(k, int(op["i"]), int(op["j"]))
    if kind == "merge":
        return TwoLinePartition.merge(k, int(op["x"]))
    if kind == "rotation":
        return TwoLinePartition.rotation(k, int(op["n"]))
    if kind == "reflection":
        return TwoLinePartition.reflection(k)
    raise ValueError(f"unknown operator kind {kind!r}")


def op_alphabet(k: int) -> Iterator[dict]:
    """All moves from ``k`` points that keep at least four points."""
    for size in range(4, k):
        for pts in combinations(range(1, k + 1), size):
            yield {"kind": "restriction", "k": k, "points": list(pts)}
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            if k - (j - i + 1) >= 4:
                yield {"kind": "semicircle", "k": k, "i": i, "j": j}
    if k > 4:
        for x in range(1, k):
            yield {"kind": "merge", "k": k, "x": x}
    for n in range(1, k):
        yield {"kind": "rotation", "k": k, "n": n}
    yield {"kind": "reflection", "k": k}


def is_crossing_multiple(v: PartitionVector, at_n: int | None = None) -> bool:
    """Whether ``v`` is a nonzero multiple of the crossing, optionally nonzero at ``N = at_n``."""
    if not (v.k == 4 and list(v.terms) == [CROSSING]):
        return False
    if at_n is None:
        return True
    try:
        return v.coefficient(CROSSING).evaluate(at_n) != 0
    except SpecializationError:
        return False


@dataclass
class GenerationCertificate:
    input: PartitionVector
    steps: list[tuple[dict, PartitionVector]] = field(default_factory=list)
    conclusion: str = "inconclusive"
    final_coefficient: RatFuncN | None = None
    explored: int = 0
    at_n: int | None = None

    def to_json(self) -> dict:
        out = {
            "input": self.input.to_json(),
            "steps": [{"op": op, "result": vec.to_json()} for op, vec in self.steps],
            "conclusion": self.conclusion,
            "explored": self.explored,
        }
        if self.at_n is not None:
            out["at_n"] = self.at_n
        if self.final_coefficient is not None:
            c = self.final_coefficient
            out["final_coefficient"] = c.to_json()
            out["final_coefficient_text"] = str(c)
            out["coefficient_vanishing_factor"] = factored(c.num)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: Mapping) -> GenerationCertificate:
        cert = cls(PartitionVector.from_json(data["input"]))
        cert.steps = [(dict(s["op"]), PartitionVector.from_json(s["result"])) for s in data["steps"]]
        cert.conclusion = data["conclusion"]
        if "final_coefficient" in data:
            cert.final_coefficient = RatFuncN.from_json(data["final_coefficient"])
        cert.explored = int(data.get("explored", 0))
        cert.at_n = data.get("at_n")
        return cert


def certify(v: PartitionVector, depth: int = 3, oracle_n0: int | None = None,
            max_nodes: int = 200_000, at_n: int | None = None) -> GenerationCertificate:
    """Breadth-first search for a move sequence reaching a nonzero multiple of the crossing.

    Every node is reduced modulo noncrossing terms; visited vectors are
    memoized up to scale.  Coefficients are symbolic in ``N``; with ``at_n``
    a path only counts when its final coefficient is nonzero at that value.
    Returns an inconclusive certificate when the depth or node budget runs
    out.
    """
    if depth > 6:
        raise ValueError("depth is limited to 6")
    if v.is_zero():
        raise ValueError("cannot certify the zero vector")
    start = red_cr(v)
    cert = GenerationCertificate(v, at_n=at_n)
    if is_crossing_multiple(start, at_n):
        cert.conclusion = "reaches-basic-crossing"
        cert.final_coefficient = start.coefficient(CROSSING)
        return cert
    if start.is_zero():
        return cert
    seen = {start.normalized()}
    queue: deque[tuple[PartitionVector, list[tuple[dict, PartitionVector]]]] = deque([(start, [])])
    explored = 0
    while queue:
        node, path = queue.popleft()
        if len(path) >= depth:
            continue
        for op in op_alphabet(node.k):
            if explored >= max_nodes:
                cert.explored = explored
                return cert
            nxt = red_cr(apply_morphism(node, op_diagram(op)))
            explored += 1
            if nxt.is_zero():
                continue
            key = nxt.normalized()
            if key in seen:
                continue
            seen.add(key)
            new_path = path + [(op, nxt)]
            if is_crossing_multiple(nxt, at_n):
                cert.steps = new_path
                cert.conclusion = "reaches-basic-crossing"
                cert.final_coefficient = nxt.coefficient(CROSSING)
                cert.explored = explored
                if oracle_n0 is not None and not dense_replay(cert, oracle_n0):
                    raise ArithmeticError("certificate failed its dense replay")
                return cert
            queue.append((nxt, new_path))
    cert.explored = explored
    return cert


def replay(cert: GenerationCertificate) -> bool:
    """Re-apply every step symbolically and compare with the recorded vectors."""
    cur = red_cr(cert.input)
    for op, recorded in cert.steps:
        cur = red_cr(apply_morphism(cur, op_diagram(op)))
        if cur != recorded:
            return False
    if cert.conclusion == "reaches-basic-crossing":
        return is_crossing_multiple(cur, cert.at_n) and cur.coefficient(CROSSING) == cert.final_coefficient
    return True


def dense_replay(cert: GenerationCertificate, n0: int) -> bool:
    """Check each step against dense expansions at ``N = n0``.

    Each move is applied to the dense expansion of the previous reduced
    vector and compared with the expansion of the unreduced symbolic image;
    the final vector must expand to ``c(n0)`` times the crossing.
    """
    cur = red_cr(cert.input)
    for op, recorded in cert.steps:
        t = op_diagram(op)
        image = apply_morphism(cur, t)
        lhs = dense_apply(t, expand_dense_vector(cur, n0), n0)
        if not np.array_equal(lhs, expand_dense_vector(image, n0)):
            return False
        cur = red_cr(image)
        if cur != recorded:
            return False
    if cert.conclusion != "reaches-basic-crossing":
        return True
    c = cert.final_coefficient.evaluate(n0)
    target = expand_dense_vector(PartitionVector.basis(CROSSING, 1), n0) * c
    return bool(np.array_equal(expand_dense_vector(cur, n0), target))
