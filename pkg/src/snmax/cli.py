"""Command-line entry point: every subcommand prints one JSON run report.

Exit codes: 0 on success, 2 on argument errors, 3 when a memory or work
budget would be exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from typing import Callable, Iterator

from . import __version__
from . import vectors as _vectors
from .errors import BudgetError
from .partitions import FILTERS, SetPartition, crossers, crossing_decomposition, crossings, enumerate_partitions

EXIT_OK, EXIT_ARGS, EXIT_BUDGET = 0, 2, 3


@dataclass
class RunReport:
    command: str
    parameters: dict
    payload: object
    elapsed_ms: float
    version: str = __version__

    def render(self, pretty: bool = False) -> str:
        data = {
            "command": self.command,
            "parameters": self.parameters,
            "payload": self.payload,
            "elapsed_ms": round(self.elapsed_ms, 3),
            "version": self.version,
        }
        return json.dumps(data, indent=2 if pretty else None, sort_keys=False)


class _ArgError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _partition(text: str) -> SetPartition:
    try:
        return SetPartition.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _range(text: str) -> range:
    try:
        a, b = text.split("..")
        lo, hi = int(a), int(b)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from exc
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return range(lo, hi + 1)


# ---------------------------------------------------------------------------
# Subcommand bodies: each returns a payload, or an iterator of payloads to stream
# ---------------------------------------------------------------------------


def cmd_enumerate(a: argparse.Namespace) -> dict:
    ps = enumerate_partitions(a.k, a.filter)
    return {"k": a.k, "filter": a.filter, "count": len(ps), "partitions": [str(p) for p in ps]}


def cmd_crossings(a: argparse.Namespace) -> dict:
    p = a.partition
    pcr, pnc, chi = crossing_decomposition(p)
    return {
        "partition": str(p),
        "noncrossing": p.is_noncrossing(),
        "crossings": [list(c) for c in sorted(crossings(p))],
        "crossers": list(crossers(p)),
        "crossing_part": str(pcr),
        "noncrossing_part": str(pnc),
    }


def cmd_moment5(a: argparse.Namespace) -> dict:
    from .algebra import nullspace_at, rank_at
    from .moments import analyze_k5, build_matrix, eta_vector, morphisms_k5, proportional

    if a.kernel:
        cols = enumerate_partitions(5, "CR")
        m = build_matrix(morphisms_k5(), cols)
        ker = nullspace_at(m, a.at_n)
        eta = eta_vector(cols)
        return {
            "n": a.at_n,
            "rank": rank_at(m, a.at_n),
            "kernel": ker,
            "kernel_is_eta": len(ker) == 1 and proportional(ker[0], eta),
            "columns": [str(p) for p in cols],
        }
    rep = analyze_k5(check_dense=not a.det)
    full = rep.to_json()
    if a.det:
        return {k: full[k] for k in ("det", "det_coeffs", "det_matches_expected")}
    return full


def cmd_moment6(a: argparse.Namespace) -> dict | Iterator[dict]:
    from .algebra import nullspace_generic, rank_at, rank_generic, rank_generic_report
    from .moments import (
        hermitian_form_B, k6_aux_matrix, k6_columns, k6_matrix, kernel_symmetry, rank_sweep,
    )

    m = k6_matrix()
    if a.rank and a.sweep is not None:
        return ({"n": n0, "rank": r} for n0, r in rank_sweep(m, a.sweep, a.threads))
    out: dict = {}
    if a.rank and a.at_n is not None:
        out["rank"] = rank_at(m, a.at_n)
    elif a.rank:
        rep = rank_generic_report(m)
        out["rank"] = rep.rank
        out["exceptional_integer_roots"] = rep.integer_roots()
    need_basis = a.kernel or a.symmetry or a.hermitian_b
    if need_basis:
        basis = nullspace_generic(m)
        cols = k6_columns()
        if a.kernel:
            out["kernel_dim"] = len(basis)
            out["kernel_degrees"] = [max(x.degree() for x in v) for v in basis]
            out["kernel_basis"] = [[x.to_json() for x in v] for v in basis]
        if a.symmetry:
            out.update(kernel_symmetry(m, basis, cols))
        if a.hermitian_b:
            out["hermitian_b"] = hermitian_form_B(basis, cols, sample=(6,)).to_json()
    if a.augment:
        out["augmented_rank"] = rank_generic(m.vstack(k6_aux_matrix()))
        out["aux_rows"] = k6_aux_matrix().nrows
    if not out:
        out["rank"] = rank_generic(m)
    return out


def cmd_hyperplanes(a: argparse.Namespace) -> dict:
    from .algebra import nullspace_generic
    from .hyperplanes import hyperplane_search
    from .moments import k6_matrix, kernel_matrix

    v = kernel_matrix(nullspace_generic(k6_matrix()))
    res = hyperplane_search(v, n0=a.at_n, threads=a.threads)
    out = res.to_json()
    out["mode"] = "generic" if a.at_n is None else f"N={a.at_n}"
    out["rows"] = len(v)
    out["bound"] = len(v) - 1 - res.n0
    return out


def cmd_weingarten(a: argparse.Namespace) -> dict:
    from .weingarten import moment

    if len(a.i) != a.k or len(a.j) != a.k:
        raise _ArgError(f"--i and --j must both have {a.k} entries")
    h = moment(a.i, a.j)
    return {"i": a.i, "j": a.j, "moment": str(h), "moment_json": h.to_json()}


def cmd_basis(a: argparse.Namespace) -> dict:
    from .vectors import dense_rank, gw_basis
    from .weingarten import counts

    basis = gw_basis(a.k, a.n)
    out = counts(a.k, a.n)
    out["gw_basis_size"] = len(basis)
    out["gw_basis_dense_rank"] = dense_rank(basis, a.n)
    out["all_partitions_dense_rank"] = dense_rank(enumerate_partitions(a.k), a.n)
    out["intersection_dim_nc_cr"] = _vectors.intersection_dim_nc_cr(a.k, a.n)
    out["expansion_injective"] = out["all_partitions_dense_rank"] == out["bell"]
    return out


def cmd_mobius(a: argparse.Namespace) -> dict:
    from .vectors import PartitionVector, expand_dense_vector, mobius_expand_discrete

    v = mobius_expand_discrete(a.k)
    out = {"k": a.k, "n": a.k - 1, "coefficients": {str(p): int(c.as_poly().evaluate(0)) for p, c in v.terms.items()}}
    if a.k >= 2:
        disc = PartitionVector.basis(SetPartition.discrete(a.k))
        out["dense_verified"] = bool(
            (expand_dense_vector(v, a.k - 1) == expand_dense_vector(disc, a.k - 1)).all()
        )
    return out


def cmd_certify(a: argparse.Namespace) -> dict:
    from .generation import certify, dense_replay, replay
    from .vectors import PartitionVector

    with open(a.vector, encoding="utf-8") as fh:
        v = PartitionVector.loads(fh.read())
    cert = certify(v, depth=a.depth, oracle_n0=a.oracle_n, at_n=a.at_n)
    out = cert.to_json()
    out["replay_ok"] = replay(cert)
    if a.oracle_n is not None:
        out["dense_replay_ok"] = dense_replay(cert, a.oracle_n)
    return out


def cmd_replay(a: argparse.Namespace) -> dict:
    from .generation import GenerationCertificate, dense_replay, replay

    with open(a.certificate, encoding="utf-8") as fh:
        data = json.load(fh)
    if "payload" in data and "command" in data:
        data = data["payload"]  # accept a saved run report as well
    cert = GenerationCertificate.from_json(data)
    out = {"conclusion": cert.conclusion, "steps": len(cert.steps), "replay_ok": replay(cert)}
    if a.oracle_n is not None:
        out["dense_replay_ok"] = dense_replay(cert, a.oracle_n)
    return out


def cmd_classify(a: argparse.Namespace) -> dict:
    from .generation import classify_level3

    if not a.p1.k == a.p2.k == a.p3.k:
        raise _ArgError("the three partitions must have the same number of points")
    return classify_level3(a.p1, a.p2, a.p3).to_json()


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _resource_flags(p: argparse.ArgumentParser, default: object) -> None:
    p.add_argument("--threads", type=int, default=default, help="worker processes (default: all CPUs)")
    p.add_argument("--budget-bytes", type=int, default=default, help="memory budget for dense expansions")
    p.add_argument("--pretty", action="store_true", default=default if default is argparse.SUPPRESS else False,
                   help="indent the JSON output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="snmax", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    _resource_flags(parser, None)
    common = argparse.ArgumentParser(add_help=False)
    _resource_flags(common, argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name: str, func: Callable, text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=text, description=text)
        p.set_defaults(func=func)
        return p

    p = add("enumerate", cmd_enumerate,
            "List set partitions of [k] in RGS order; counts follow Bell (all) and Catalan (NC) numbers.")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--filter", choices=FILTERS, default="all")

    p = add("crossings", cmd_crossings,
            "Crossings, crossers and the crossing/noncrossing decomposition of one partition.")
    p.add_argument("partition", type=_partition, help="block form {1,3}{2,4} or rgs:0101")

    p = add("moment5", cmd_moment5,
            "Level-five certificate: the 10x10 matrix has det -(N-4)(N^2-3N+1)^2, rank 9 at N=4 "
            "with kernel spanned by eta, and eta lies in the noncrossing span at N=4.")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--det", action="store_true", help="only the determinant")
    g.add_argument("--kernel", action="store_true", help="rank and kernel at --at-n")
    p.add_argument("--at-n", type=int, default=4)

    p = add("moment6", cmd_moment6,
            "Level-six certificate: the 66x71 matrix has generic rank 66 and a 5-dimensional kernel, "
            "rank 54 at N=4, a dihedrally invariant kernel, inert auxiliary equations, and a Hermitian "
            "form B that is symmetric with zero diagonal but not positive definite.")
    p.add_argument("--rank", action="store_true")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--generic", action="store_true", help="rank over Q(N) (default)")
    mode.add_argument("--at-n", type=int, default=None, help="rank at one integer N")
    mode.add_argument("--sweep", type=_range, default=None, metavar="A..B",
                      help="rank for every integer N in A..B, one JSON line each")
    p.add_argument("--kernel", action="store_true")
    p.add_argument("--symmetry", action="store_true")
    p.add_argument("--augment", action="store_true")
    p.add_argument("--hermitian-b", action="store_true")

    p = add("hyperplanes", cmd_hyperplanes,
            "Maximal hyperplane intersection on the level-six kernel: n0 = 39 generically and at N=6, "
            "giving the bound 70 - 39 = 31.")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--generic", action="store_true", help="polynomial entries (default)")
    mode.add_argument("--at-n", type=int, default=None)

    p = add("weingarten", cmd_weingarten,
            "Exact Haar moment h(u_{i1 j1}...u_{ik jk}); e.g. the fifth moment "
            "(N-3)/(N(N-1)(N-2)(N^2-3N+1)) for i=1,2,1,2,3 and j=1,2,1,3,2.")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--i", type=_int_list, required=True)
    p.add_argument("--j", type=_int_list, required=True)

    p = add("basis", cmd_basis,
            "Dimension data at N=n: partitions with at most n blocks form a basis, and the "
            "noncrossing/crossing intersection dimension.")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)

    p = add("mobius", cmd_mobius,
            "Expansion of the discrete partition vector through coarser partitions at N=k-1.")
    p.add_argument("--k", type=int, required=True)

    p = add("certify", cmd_certify,
            "Search for an operator sequence sending a vector to a nonzero multiple of the basic "
            "crossing, with symbolic and dense replay.")
    p.add_argument("--vector", required=True, help="partition-vector JSON file")
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--oracle-n", type=int, default=None)
    p.add_argument("--at-n", type=int, default=None,
                   help="only accept final coefficients that are nonzero at this N")

    p = add("replay", cmd_replay, "Replay a saved generation certificate symbolically and densely.")
    p.add_argument("--certificate", required=True)
    p.add_argument("--oracle-n", type=int, default=None)

    p = add("classify", cmd_classify,
            "Case dispatch for a three-term combination by the weights of its crossing-set Venn diagram.")
    for name in ("--p1", "--p2", "--p3"):
        p.add_argument(name, type=_partition, required=True)
    return parser


def _parameters(a: argparse.Namespace) -> dict:
    out = {}
    for key, val in sorted(vars(a).items()):
        if key in ("func", "command", "pretty"):
            continue
        if isinstance(val, range):
            val = f"{val.start}..{val.stop - 1}"
        elif isinstance(val, SetPartition):
            val = str(val)
        out[key] = val
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    saved_budget = _vectors.DEFAULT_DENSE_BUDGET
    if args.budget_bytes is not None:
        _vectors.DEFAULT_DENSE_BUDGET = args.budget_bytes
    try:
        return _run(args)
    finally:
        _vectors.DEFAULT_DENSE_BUDGET = saved_budget  # in-process callers keep their own budget


def _run(args: argparse.Namespace) -> int:
    start = time.perf_counter()
    try:
        payload = args.func(args)
        if isinstance(payload, Iterator):
            for item in payload:
                rep = RunReport(args.command, _parameters(args), item, (time.perf_counter() - start) * 1e3)
                print(rep.render(False), flush=True)
            return EXIT_OK
    except BudgetError as exc:
        print(json.dumps({"error": "budget", "message": str(exc)}), file=sys.stderr)
        return EXIT_BUDGET
    except (_ArgError, ValueError, OSError) as exc:
        print(json.dumps({"error": "argument", "message": str(exc)}), file=sys.stderr)
        return EXIT_ARGS
    rep = RunReport(args.command, _parameters(args), payload, (time.perf_counter() - start) * 1e3)
    print(rep.render(args.pretty))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
