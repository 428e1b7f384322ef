"""Bundled arrangement corpora, pairwise intersection tables and claim checks."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources
from itertools import combinations
from pathlib import Path
from typing import Optional, Union

from .errors import SubtorusError
from .lattice import IntMatrix, Sublattice, is_primitive, solve_integer
from .torus import (
    Finite,
    IntersectionResult,
    NonTransversal,
    SubtorusSpec,
    TorusPoint,
    intersect,
)

SCHEMA_VERSION = 1
KINDS = ("local", "non-local", "translated", "untranslated")

# Regression lock on the shipped data files.
CHECKSUMS = {
    "deleted-b3": "6d096f187155b7e699da95a7c428242d0ebae91f92c8ee9699a0ed1aa049b35b",
    "remark-c4": "1c629b8fe641115ae0b73da5d8ec143a44c85987ecd5f11ebc5579ecb94a2684",
}

RHO_W = TorusPoint.from_values("1,-1,-1,-1,1,1,1".split(","))
RHO_W_PRIME = TorusPoint.from_values("-1,1,-1,1,-1,1,1".split(","))


class CorpusError(ValueError):
    """Unknown corpus id, bad checksum, or malformed corpus JSON."""


@dataclass(frozen=True)
class ComponentRecord:
    name: str
    spec: SubtorusSpec
    provenance: str
    kind: str


def equations_kernel(equations: list[list[int]], n: int) -> Sublattice:
    """Integer solutions ``x`` of ``E x = 0``; always a primitive lattice."""
    E = IntMatrix.from_rows(equations, cols=n)
    _, kernel = solve_integer(E.transpose(), [0] * E.rows)
    return Sublattice(n, Sublattice.span(kernel.tolist(), n).basis)


def _parse_component(raw: dict, n: int) -> ComponentRecord:
    try:
        name = raw["name"]
        kind = raw.get("kind", "untranslated")
        if kind not in KINDS:
            raise CorpusError(f"component {name}: unknown kind {kind!r}")
        if "tangent" in raw:
            tangent = Sublattice(n, IntMatrix.from_rows(raw["tangent"], cols=n))
        elif "equations" in raw:
            tangent = equations_kernel(raw["equations"], n)
        else:
            raise CorpusError(f"component {name}: needs 'tangent' or 'equations'")
        translation = raw.get("translation")
        point = TorusPoint.from_strings(translation) if translation is not None else None
        spec = SubtorusSpec(tangent, point)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, CorpusError):
            raise
        raise CorpusError(f"malformed component {raw!r}: {exc}") from exc
    if not is_primitive(tangent):
        raise CorpusError(f"component {name}: tangent lattice is not primitive")
    return ComponentRecord(name, spec, raw.get("provenance", ""), kind)


def parse_corpus(obj: dict) -> list[ComponentRecord]:
    if obj.get("schema_version", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise CorpusError(f"unsupported schema_version {obj.get('schema_version')!r}")
    try:
        n = int(obj["ambient_rank"])
        raws = obj["components"]
    except (KeyError, TypeError, ValueError) as exc:
        raise CorpusError(f"corpus needs 'ambient_rank' and 'components': {exc}") from exc
    records = [_parse_component(raw, n) for raw in raws]
    names = [r.name for r in records]
    if len(set(names)) != len(names):
        raise CorpusError("component names must be unique")
    return records


def corpus_bytes(corpus_id: str) -> bytes:
    if corpus_id not in CHECKSUMS:
        raise CorpusError(f"unknown corpus {corpus_id!r}; bundled: {', '.join(sorted(CHECKSUMS))}")
    return resources.files("subtorus").joinpath("data", f"{corpus_id}.json").read_bytes()


def load_corpus(source: Union[str, Path]) -> list[ComponentRecord]:
    """Load a bundled corpus by id, or any corpus JSON file by path."""
    if str(source) in CHECKSUMS:
        data = corpus_bytes(str(source))
        digest = hashlib.sha256(data).hexdigest()
        if digest != CHECKSUMS[str(source)]:
            raise CorpusError(f"corpus {source} checksum mismatch: {digest}")
    else:
        path = Path(source)
        if not path.is_file():
            raise CorpusError(f"unknown corpus {str(source)!r}; bundled: {', '.join(sorted(CHECKSUMS))}")
        data = path.read_bytes()
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise CorpusError(f"invalid corpus JSON: {exc}") from exc
    return parse_corpus(obj)


# --- Pairwise table ------------------------------------------------------------


@dataclass(frozen=True)
class PairFailure:
    """A pair whose computation raised; the table keeps going."""

    error: str
    kind = "error"

    def points(self):
        raise ValueError(self.error)


@dataclass
class PairTable:
    names: list[str]
    entries: dict[tuple[str, str], Union[IntersectionResult, PairFailure]] = field(default_factory=dict)

    def get(self, a: str, b: str):
        if (a, b) in self.entries:
            return self.entries[(a, b)]
        return self.entries[(b, a)]

    def points(self, a: str, b: str) -> Optional[set[TorusPoint]]:
        """Point set of a finite entry, ``None`` for anything else."""
        res = self.get(a, b)
        if isinstance(res, (NonTransversal, PairFailure)):
            return None
        return set(res.points())

    @property
    def summary(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for res in self.entries.values():
            counts[res.kind] = counts.get(res.kind, 0) + 1
        return dict(sorted(counts.items()))


def pairwise_table(corpus: list[ComponentRecord]) -> PairTable:
    ranks = {rec.spec.ambient_rank for rec in corpus}
    if len(ranks) > 1:
        raise CorpusError(f"components live in different ambient ranks: {sorted(ranks)}")
    table = PairTable([rec.name for rec in corpus])
    for r1, r2 in combinations(corpus, 2):
        try:
            res = intersect(r1.spec, r2.spec)
        except SubtorusError as exc:
            res = PairFailure(f"{type(exc).__name__}: {exc}")
        table.entries[(r1.name, r2.name)] = res
    return table


# --- Claim checks ----------------------------------------------------------------


@dataclass(frozen=True)
class Claim:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ClaimReport:
    claims: list[Claim]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)


def _fmt(points: Optional[set[TorusPoint]]) -> str:
    if points is None:
        return "not finite"
    return "{" + ", ".join(str(p) for p in sorted(points)) + "}"


def _pair_equals(table: PairTable, a: str, b: str, expected: set[TorusPoint]) -> Claim:
    name = f"{a}∩{b} = {_fmt(expected)}"
    try:
        got = table.points(a, b)
    except KeyError:
        return Claim(name, False, "pair missing from table")
    return Claim(name, got == expected, f"computed {_fmt(got)}")


def _common_point(table: PairTable, names: list[str], point: TorusPoint, label: str) -> list[Claim]:
    """Membership of ``point`` in every pairwise set, and equality of the joint set."""
    member = f"{label} ∈ {'∩'.join(names)}"
    exact = f"{'∩'.join(names)} = {{{label}}}"
    try:
        sets = [table.points(a, b) for a, b in combinations(names, 2)]
    except KeyError:
        return [Claim(member, False, "pair missing from table"), Claim(exact, False, "pair missing from table")]
    if any(s is None for s in sets):
        return [Claim(member, False, "a pair is not finite"), Claim(exact, False, "a pair is not finite")]
    missing = [f"{a}∩{b}" for (a, b), s in zip(combinations(names, 2), sets) if point not in s]
    common = set.intersection(*sets)
    return [
        Claim(member, not missing, "missing from " + ", ".join(missing) if missing else "in all six pairs"),
        Claim(exact, common == {point}, f"joint set {_fmt(common)}"),
    ]


def check_claims(table: PairTable) -> ClaimReport:
    """Check the deleted-B3 statements against a computed table."""
    one = TorusPoint.identity(len(RHO_W))
    claims = [
        _pair_equals(table, "V8", "V9", {one, RHO_W}),
        _pair_equals(table, "V8", "V10", {one, RHO_W}),
        _pair_equals(table, "V9", "V10", {one, RHO_W}),
    ]
    claims += _common_point(table, ["W", "V8", "V9", "V10"], RHO_W, "rho_W")
    claims += _common_point(table, ["W", "V10", "V11", "V12"], RHO_W_PRIME, "rho'_W")

    special = [{"V8", "V9", "V10"}, {"V10", "V11", "V12"}]
    nontrivial = []
    logged = []
    for (a, b), res in table.entries.items():
        if "W" in (a, b):
            continue
        if any({a, b} <= tri for tri in special):
            logged.append(f"{a}∩{b}={_fmt(table.points(a, b))}")
            continue
        if not (isinstance(res, Finite) and res.group.order == 1):
            nontrivial.append(f"{a}∩{b}: {res.kind}")
    detail = "; ".join(nontrivial) if nontrivial else "triangle pairs: " + ", ".join(logged)
    claims.append(Claim("all other untranslated pairs are trivial", not nontrivial, detail))
    return ClaimReport(claims)
