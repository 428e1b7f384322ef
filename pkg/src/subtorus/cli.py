"""Command-line front end.

Exit codes: 0 success, 1 computational error (non-primitive input, ambient
mismatch, infinite-order translation, failed checks), 2 I/O or parse error.
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys
from pathlib import Path
from typing import Optional

from . import __version__
from .corpus import CorpusError, PairFailure, check_claims, load_corpus, pairwise_table
from .errors import MatrixParseError, SubtorusError
from .lattice import IntMatrix, Sublattice, hnf, saturate, snf
from .oracle import run_oracle_suite
from .torus import (
    Empty,
    Finite,
    FiniteCoset,
    NonTransversal,
    SubtorusSpec,
    TorusPoint,
    intersect,
    intersect_translated,
)

JSON_SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_COMPUTE = 1
EXIT_IO = 2


class InputError(Exception):
    """Raised for anything that maps to exit code 2."""


def dump_json(obj) -> str:
    """Canonical JSON: sorted keys, fixed indentation, so output round-trips byte for byte."""
    return json.dumps(obj, sort_keys=True, indent=2)


def result_to_json(res) -> dict:
    if isinstance(res, Finite):
        g = res.group
        return {
            "kind": res.kind,
            "invariant_factors": list(g.invariant_factors),
            "generators": [p.to_strings() for p in g.generators],
            "order": g.order,
        }
    if isinstance(res, FiniteCoset):
        return {"kind": res.kind, "points": [p.to_strings() for p in res.members]}
    if isinstance(res, Empty):
        return {"kind": res.kind}
    if isinstance(res, NonTransversal):
        return {"kind": res.kind, "overlap_rank": res.overlap_rank}
    if isinstance(res, PairFailure):
        return {"kind": res.kind, "error": res.error}
    raise TypeError(f"not an intersection result: {res!r}")


def describe_result(res) -> str:
    if isinstance(res, Finite):
        g = res.group
        if not g.invariant_factors:
            return "trivial group"
        gens = ", ".join(str(p) for p in g.generators)
        noun = "generator" if len(g.generators) == 1 else "generators"
        return f"{g.describe()}, {noun} {gens}"
    if isinstance(res, FiniteCoset):
        return f"finite coset of {len(res.members)} point(s): " + ", ".join(str(p) for p in res.members)
    if isinstance(res, Empty):
        return "empty intersection"
    if isinstance(res, NonTransversal):
        return f"non-transversal, overlap rank {res.overlap_rank}"
    return f"error: {res.error}"


def _read_matrix(path: str) -> IntMatrix:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        return IntMatrix.parse(text)
    except MatrixParseError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _parse_translation(token: str, n: int) -> TorusPoint:
    """``exp:0,1/2,...`` gives exponents; otherwise coordinate values like ``1,-1,i``."""
    try:
        if token.startswith("exp:"):
            point = TorusPoint.from_strings(token[4:].split(","))
        else:
            point = TorusPoint.from_values(token.split(","))
    except SubtorusError:
        raise
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad translation {token!r}: {exc}") from exc
    if len(point) != n:
        raise InputError(f"translation {token!r} has {len(point)} coordinates, expected {n}")
    return point


def _matrix_json(M: IntMatrix) -> dict:
    return {"rows": M.rows, "cols": M.cols, "entries": M.tolist()}


# --- Subcommands -------------------------------------------------------------


def cmd_snf(args) -> tuple[int, str]:
    M = _read_matrix(args.path)
    sd = snf(M)
    if args.json:
        payload = {"schema_version": JSON_SCHEMA_VERSION, "factors": list(sd.factors)}
        if args.witness:
            payload.update(U=_matrix_json(sd.U), D=_matrix_json(sd.D), V=_matrix_json(sd.V))
        return EXIT_OK, dump_json(payload)
    lines = ["factors: " + " ".join(str(d) for d in sd.factors)]
    if args.witness:
        for label, W in (("U", sd.U), ("D", sd.D), ("V", sd.V)):
            lines += [f"{label}:", W.to_text().rstrip()]
    return EXIT_OK, "\n".join(lines)


def cmd_hnf(args) -> tuple[int, str]:
    M = _read_matrix(args.path)
    H, U = hnf(M)
    if args.json:
        payload = {"schema_version": JSON_SCHEMA_VERSION, "H": _matrix_json(H)}
        if args.witness:
            payload["U"] = _matrix_json(U)
        return EXIT_OK, dump_json(payload)
    lines = ["H:", H.to_text().rstrip()]
    if args.witness:
        lines += ["U:", U.to_text().rstrip()]
    return EXIT_OK, "\n".join(lines)


def cmd_saturate(args) -> tuple[int, str]:
    M = _read_matrix(args.path)
    S = Sublattice(M.cols, M)
    sat = saturate(S)
    index = 1
    for d in snf(M).factors:
        index *= d
    if args.json:
        payload = {
            "schema_version": JSON_SCHEMA_VERSION,
            "basis": _matrix_json(sat.basis),
            "index": index,
            "primitive": index == 1,
        }
        return EXIT_OK, dump_json(payload)
    return EXIT_OK, f"index: {index}\n" + sat.basis.to_text().rstrip()


def cmd_intersect(args) -> tuple[int, str]:
    MA, MB = _read_matrix(args.path_a), _read_matrix(args.path_b)
    A, B = Sublattice(MA.cols, MA), Sublattice(MB.cols, MB)
    rho_a = rho_b = None
    if args.translated:
        rho_a = _parse_translation(args.translated[0], A.ambient_rank)
        rho_b = _parse_translation(args.translated[1], B.ambient_rank)
    S, T = SubtorusSpec(A, rho_a), SubtorusSpec(B, rho_b)
    if args.translated:
        res = intersect_translated(S, T, auto_saturate=args.saturate)
    else:
        res = intersect(S, T, auto_saturate=args.saturate)
    if args.json:
        payload = {"schema_version": JSON_SCHEMA_VERSION, "result": result_to_json(res)}
        return EXIT_OK, dump_json(payload)
    return EXIT_OK, describe_result(res)


def cmd_corpus(args) -> tuple[int, str]:
    try:
        records = load_corpus(args.corpus_id)
    except CorpusError as exc:
        raise InputError(str(exc)) from exc
    table = pairwise_table(records)
    report = check_claims(table) if args.corpus_id == "deleted-b3" else None
    code = EXIT_OK if report is None or report.passed else EXIT_COMPUTE
    if args.json:
        payload = {
            "schema_version": JSON_SCHEMA_VERSION,
            "corpus": args.corpus_id,
            "components": [r.name for r in records],
            "pairs": [
                {"a": a, "b": b, "result": result_to_json(res)} for (a, b), res in table.entries.items()
            ],
            "summary": table.summary,
        }
        if report is not None:
            payload["claims"] = [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in report.claims]
            payload["all_claims_pass"] = report.passed
        return code, dump_json(payload)
    lines = [f"corpus {args.corpus_id}: {len(records)} components"]
    width = max((len(f"{a} ∩ {b}") for a, b in table.entries), default=0)
    for (a, b), res in table.entries.items():
        lines.append(f"  {f'{a} ∩ {b}':<{width}}  {describe_result(res)}")
    lines.append("summary: " + ", ".join(f"{k}={v}" for k, v in table.summary.items()))
    if report is not None:
        lines.append("claims:")
        for c in report.claims:
            lines.append(f"  [{'PASS' if c.passed else 'FAIL'}] {c.name}  ({c.detail})")
    return code, "\n".join(lines)


def cmd_verify(args) -> tuple[int, str]:
    seed = args.seed if args.seed is not None else secrets.randbits(32)
    suite = run_oracle_suite(seed, cases=args.cases, max_rank=args.max_rank)
    code = EXIT_OK if suite.passed else EXIT_COMPUTE
    if args.json:
        payload = {
            "schema_version": JSON_SCHEMA_VERSION,
            "seed": seed,
            "passed": suite.passed,
            "cases": [
                {
                    "index": c.index,
                    "ambient_rank": c.ambient_rank,
                    "a": c.a_rows,
                    "b": c.b_rows,
                    "invariant_factors": list(c.factors),
                    "passed": c.passed,
                    "detail": c.detail,
                }
                for c in suite.cases
            ],
        }
        return code, dump_json(payload)
    lines = [f"seed: {seed}"]
    for c in suite.cases:
        status = "PASS" if c.passed else "FAIL"
        factors = " ".join(str(d) for d in c.factors) or "-"
        line = f"case {c.index:3d}: n={c.ambient_rank} A={c.a_rows} B={c.b_rows} factors=[{factors}] {status}"
        if c.detail:
            line += f"  {c.detail}"
        lines.append(line)
    passed = sum(c.passed for c in suite.cases)
    lines.append(f"{passed}/{len(suite.cases)} cases passed (seed {seed})")
    return code, "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subtorus", description="Exact intersections of rational subtori of (C*)^n."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(func=func)
        return p

    p = add("snf", cmd_snf, "Smith normal form of a matrix file")
    p.add_argument("path")
    p.add_argument("--witness", action="store_true", help="also print U, D, V with U M V = D")

    p = add("hnf", cmd_hnf, "row Hermite normal form of a matrix file")
    p.add_argument("path")
    p.add_argument("--witness", action="store_true", help="also print U with U M = H")

    p = add("saturate", cmd_saturate, "primitive closure of the row lattice")
    p.add_argument("path")

    p = add("intersect", cmd_intersect, "intersect the subtori of two tangent lattices")
    p.add_argument("path_a")
    p.add_argument("path_b")
    p.add_argument("--saturate", action="store_true", help="saturate non-primitive inputs instead of failing")
    p.add_argument(
        "--translated",
        nargs=2,
        metavar=("RHO_A", "RHO_B"),
        help="translations as values '1,-1,i,...' or exponents 'exp:0,1/2,...'",
    )

    p = add("corpus", cmd_corpus, "pairwise table and claim checks for a corpus")
    p.add_argument("corpus_id", help="deleted-b3, remark-c4, or a corpus JSON path")

    p = add("verify", cmd_verify, "randomized oracle-equivalence suite")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--cases", type=int, default=200)
    p.add_argument("--max-rank", type=int, default=5)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code, text = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SubtorusError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
