import hashlib
import json
from dataclasses import replace

import pytest

from subtorus.corpus import (
    CHECKSUMS,
    RHO_W,
    RHO_W_PRIME,
    CorpusError,
    PairFailure,
    check_claims,
    corpus_bytes,
    equations_kernel,
    load_corpus,
    pairwise_table,
)
from subtorus.lattice import Sublattice, is_primitive, saturate
from subtorus.torus import Finite, FiniteAbelianGroup, NonTransversal, TorusPoint


@pytest.fixture(scope="module")
def b3():
    return load_corpus("deleted-b3")


@pytest.fixture(scope="module")
def b3_table(b3):
    return pairwise_table(b3)


def test_checksums_lock_bundled_data():
    for cid, digest in CHECKSUMS.items():
        assert hashlib.sha256(corpus_bytes(cid)).hexdigest() == digest


def test_deleted_b3_shape(b3):
    assert len(b3) == 13
    assert sum(not r.spec.translated for r in b3) == 12
    assert [r.name for r in b3 if r.spec.translated] == ["W"]
    assert {r.spec.ambient_rank for r in b3} == {7}
    assert [r.kind for r in b3].count("local") == 7
    assert [r.kind for r in b3].count("non-local") == 5


def test_deleted_b3_lattices_verbatim(b3):
    by_name = {r.name: r for r in b3}
    assert by_name["V1"].spec.tangent == Sublattice.span([[1, 0, -1, 0, 0, 0, 0], [0, 1, -1, 0, 0, 0, 0]])
    assert by_name["V7"].spec.tangent.rank == 3
    assert by_name["V12"].spec.tangent == Sublattice.span(
        [[1, -1, 0, 0, 0, 0, -1], [0, -1, 1, 0, 1, 0, -1]]
    )
    assert by_name["W"].spec.translation == RHO_W
    assert by_name["W"].spec.tangent == Sublattice.span([[1, -1, 0, -1, 1, 2, -2]])


def test_all_lattices_primitive(b3):
    for rec in b3:
        assert is_primitive(rec.spec.tangent)
        assert saturate(rec.spec.tangent) == rec.spec.tangent


def test_remark_c4():
    recs = load_corpus("remark-c4")
    assert [r.name for r in recs] == ["E1", "E2"]
    assert all(r.spec.tangent.rank == 3 and r.spec.ambient_rank == 6 for r in recs)
    # spot-check: kernel vectors satisfy the ideals
    for v in recs[0].spec.tangent.basis.tolist():
        assert v[0] + v[1] + v[2] + v[5] == 0 and v[3] == v[4] == 0
    for v in recs[1].spec.tangent.basis.tolist():
        assert v[0] == v[5] == 0 and v[1] + v[2] + v[3] + v[4] == 0
    table = pairwise_table(recs)
    assert table.get("E1", "E2") == NonTransversal(1)
    assert table.summary == {"non_transversal": 1}


def test_equations_kernel():
    assert equations_kernel([[1, 1]], 2) == Sublattice.span([[1, -1]])
    assert equations_kernel([], 2) == Sublattice.full(2)


def test_unknown_corpus():
    with pytest.raises(CorpusError):
        load_corpus("no-such-corpus")


def test_user_corpus_file(tmp_path):
    path = tmp_path / "tiny.json"
    path.write_text(
        json.dumps(
            {
                "ambient_rank": 2,
                "components": [
                    {"name": "A", "kind": "local", "tangent": [[1, 1]]},
                    {"name": "B", "kind": "local", "tangent": [[1, -1]], "translation": ["0/1", "0/1"]},
                    {"name": "C", "kind": "translated", "tangent": [], "translation": ["1/2", "0/1"]},
                ],
            }
        )
    )
    recs = load_corpus(path)
    table = pairwise_table(recs)
    assert table.get("A", "B").group.invariant_factors == (2,)
    assert table.get("A", "C").kind == "empty"
    assert table.points("C", "B") == set()


@pytest.mark.parametrize(
    "bad",
    [
        {"components": []},
        {"ambient_rank": 2, "components": [{"name": "A", "tangent": [[2, 0]]}]},
        {"ambient_rank": 2, "components": [{"name": "A", "tangent": [[1, 0]]}, {"name": "A", "tangent": []}]},
        {"ambient_rank": 2, "components": [{"name": "A", "kind": "weird", "tangent": []}]},
        {"ambient_rank": 2, "components": [{"name": "A"}]},
        {"ambient_rank": 2, "schema_version": 99, "components": []},
    ],
)
def test_malformed_corpora(tmp_path, bad):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    with pytest.raises(CorpusError):
        load_corpus(path)


def test_table_complete_and_symmetric(b3_table):
    assert len(b3_table.entries) == 13 * 12 // 2
    assert b3_table.get("V9", "V8") is b3_table.get("V8", "V9")
    assert b3_table.summary == {"empty": 7, "finite": 66, "finite_coset": 5}


def test_table_values(b3_table):
    v8v9 = b3_table.get("V8", "V9")
    assert v8v9.group.invariant_factors == (2,)
    assert v8v9.group.generators == (RHO_W,)
    v1v2 = b3_table.get("V1", "V2")
    assert isinstance(v1v2, Finite) and v1v2.group.order == 1
    assert b3_table.points("W", "V10") == {RHO_W, RHO_W_PRIME}


def test_table_is_deterministic(b3):
    assert pairwise_table(b3).entries == pairwise_table(b3).entries


def test_rho_w_prime_value():
    assert RHO_W_PRIME.format_values() == "(-1,1,-1,1,-1,1,1)"


def test_claims_pass(b3_table):
    report = check_claims(b3_table)
    assert report.passed, [c for c in report.claims if not c.passed]
    assert len(report.claims) == 8


def test_forged_entry_fails_claim_a(b3_table):
    forged = replace(b3_table, entries=dict(b3_table.entries))
    forged.entries[("V8", "V9")] = Finite(FiniteAbelianGroup((), (), 7))
    report = check_claims(forged)
    assert not report.passed
    assert not report.claims[0].passed
    assert report.claims[1].passed


def test_failures_are_recorded_not_raised(b3_table):
    forged = replace(b3_table, entries=dict(b3_table.entries))
    forged.entries[("V10", "V11")] = PairFailure("boom")
    forged.entries[("V1", "V2")] = Finite(FiniteAbelianGroup((3,), (TorusPoint.identity(7),), 7))
    report = check_claims(forged)
    failed = {c.name for c in report.claims if not c.passed}
    assert "all other untranslated pairs are trivial" in failed
    assert "rho'_W ∈ W∩V10∩V11∩V12" in failed
