import pytest

from bruteforge import bpt, sat
from bruteforge.bpt import (
    AllSatisfiable,
    Coloring,
    DomainGapError,
    MissingVariableError,
    VALID,
    coloring_from_model,
    coloring_to_model,
    encode,
    exhaustive_satisfiable,
    find_threshold,
    members,
    triples,
    verify_coloring,
)
from bruteforge.logic import Assignment


def _brute_triples(m):
    out = []
    for a in range(1, m + 1):
        for b in range(a + 1, m + 1):
            for c in range(b + 1, m + 1):
                if a * a + b * b == c * c:
                    out.append((a, b, c))
    return sorted(out, key=lambda t: (t[2], t[0]))


class TestTriples:
    def test_against_cubic_scan(self):
        for m in (1, 5, 13, 20, 60, 100):
            assert list(triples(m).triples) == _brute_triples(m)

    def test_twenty(self):
        assert triples(20).triples == (
            (3, 4, 5),
            (6, 8, 10),
            (5, 12, 13),
            (9, 12, 15),
            (8, 15, 17),
            (12, 16, 20),
        )

    def test_members_twenty(self):
        assert len(members(20)) == 13

    def test_no_triples_below_five(self):
        assert triples(4).triples == ()
        assert members(4) == set()

    def test_invalid_bound(self):
        with pytest.raises(ValueError):
            triples(0)


class TestEncode:
    def test_smallest_nontrivial_encoding(self):
        cnf, varmap = encode(5)
        assert cnf.num_vars == 3
        assert len(cnf.clauses) == 2
        assert set(varmap) == {3, 4, 5}

    def test_block_shape(self):
        cnf, varmap = encode(5)
        pos = frozenset(varmap.values())
        neg = frozenset(-v for v in varmap.values())
        assert {c.lits for c in cnf.clauses} == {pos, neg}

    def test_counts_track_structure(self):
        for m in (5, 20, 50, 120):
            cnf, varmap = encode(m)
            assert cnf.num_vars == len(members(m))
            assert len(cnf.clauses) == 2 * len(triples(m).triples)
            assert set(varmap) == members(m)


class TestColorings:
    def test_verify_valid(self):
        c = Coloring(5, {3: 1, 4: 1, 5: 0})
        assert verify_coloring(c, 5) == VALID

    def test_verify_returns_witness(self):
        c = Coloring(5, {3: 1, 4: 1, 5: 1})
        assert verify_coloring(c, 5) == (3, 4, 5)

    def test_domain_gap(self):
        with pytest.raises(DomainGapError):
            verify_coloring(Coloring(5, {3: 1}), 5)

    def test_model_roundtrip(self):
        _, varmap = encode(20)
        coloring = Coloring(20, {i: i % 2 for i in members(20)})
        model = coloring_to_model(coloring, varmap)
        assert coloring_from_model(model, varmap, 20) == coloring

    def test_missing_variable(self):
        _, varmap = encode(5)
        with pytest.raises(MissingVariableError):
            coloring_from_model(Assignment({}), varmap)


class TestSolvePipeline:
    def test_solver_agrees_with_exhaustive_small(self):
        for m in range(1, 31):
            cnf, varmap = encode(m)
            verdict = sat.solve(cnf)
            assert verdict.satisfiable == exhaustive_satisfiable(m)
            if verdict.satisfiable and varmap:
                coloring = coloring_from_model(verdict.model, varmap, m)
                assert verify_coloring(coloring, m) == VALID

    def test_scan_all_satisfiable(self):
        result = find_threshold(60, step=20)
        assert isinstance(result, AllSatisfiable)
        assert result.max_m == 60
        for m, coloring in result.colorings.items():
            assert verify_coloring(coloring, m) == VALID

    def test_scan_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            find_threshold(0)
        with pytest.raises(ValueError):
            find_threshold(10, step=0)
