import random

import pytest
from hypothesis import given, settings, strategies as st

from bruteforge import sat
from bruteforge.logic import Assignment, Clause, Cnf
from bruteforge.sat import (
    BudgetExhausted,
    CONFLICT,
    Certificate,
    MalformedCertificateError,
    PartialAssignmentError,
    PivotAbsentError,
    STABLE,
    check_certificate,
    resolve,
    solve,
    solve_with_cubes,
    truth_table_satisfiable,
    unit_propagate,
    verify_model,
)


def _random_cnf(rng, max_vars=8, max_clauses=25):
    n = rng.randint(1, max_vars)
    clauses = []
    for _ in range(rng.randint(1, max_clauses)):
        width = rng.randint(1, 3)
        lits = {rng.choice([1, -1]) * rng.randint(1, n) for _ in range(width)}
        clauses.append(Clause(frozenset(lits)))
    return Cnf.of(clauses, n)


class TestUnitPropagation:
    def test_propagation_chain(self):
        # (p|q) & (~p|r) & (~r|s) & p  with p=1, q=2, r=3, s=4
        cnf = Cnf.of(
            [Clause.of(1, 2), Clause.of(-1, 3), Clause.of(-3, 4), Clause.of(1)], 4
        )
        a, status = unit_propagate(cnf, Assignment())
        assert status == STABLE
        assert a.values[1] is True
        assert a.values[3] is True
        assert a.values[4] is True
        assert 2 not in a.values  # q stays unconstrained

    def test_conflict_detected(self):
        cnf = Cnf.of([Clause.of(1), Clause.of(-1)], 1)
        _, status = unit_propagate(cnf, Assignment())
        assert status == CONFLICT

    def test_no_units_is_fixpoint(self):
        cnf = Cnf.of([Clause.of(1, 2)], 2)
        a, status = unit_propagate(cnf, Assignment())
        assert status == STABLE
        assert a.values == {}

    def test_does_not_mutate_input(self):
        cnf = Cnf.of([Clause.of(1)], 1)
        start = Assignment()
        unit_propagate(cnf, start)
        assert start.values == {}


class TestResolve:
    def test_textbook_resolution(self):
        c = resolve(Clause.of(1, 2), Clause.of(-1, 3), 1)
        assert c.lits == frozenset({2, 3})

    def test_pivot_absent(self):
        with pytest.raises(PivotAbsentError):
            resolve(Clause.of(2), Clause.of(-1), 1)
        with pytest.raises(PivotAbsentError):
            resolve(Clause.of(1), Clause.of(3), 1)

    def test_empty_clause_from_units(self):
        assert resolve(Clause.of(1), Clause.of(-1), 1).lits == frozenset()


class TestVerifyModel:
    def test_accepts_model(self):
        cnf = Cnf.of([Clause.of(1, -2)], 2)
        assert verify_model(cnf, Assignment({1: True, 2: True}))

    def test_rejects_non_model(self):
        cnf = Cnf.of([Clause.of(1)], 1)
        assert not verify_model(cnf, Assignment({1: False}))

    def test_partial_assignment_rejected(self):
        cnf = Cnf.of([Clause.of(1, 2)], 2)
        with pytest.raises(PartialAssignmentError):
            verify_model(cnf, Assignment({1: True}))


class TestSolve:
    def test_sat_with_model(self):
        cnf = Cnf.of([Clause.of(1, 2), Clause.of(-1, 2)], 2)
        v = solve(cnf)
        assert v.satisfiable
        assert verify_model(cnf, v.model)

    def test_unsat_with_certificate(self):
        cnf = Cnf.of(
            [Clause.of(1, 2), Clause.of(1, -2), Clause.of(-1, 2), Clause.of(-1, -2)], 2
        )
        v = solve(cnf)
        assert not v.satisfiable
        assert v.certificate.lines[-1].lits == frozenset()
        assert check_certificate(cnf, v.certificate)

    def test_empty_formula_is_satisfiable(self):
        assert solve(Cnf.of([], 0)).satisfiable

    def test_empty_clause_is_unsatisfiable(self):
        cnf = Cnf.of([Clause(frozenset())], 0)
        v = solve(cnf)
        assert not v.satisfiable
        assert check_certificate(cnf, v.certificate)

    def test_deterministic(self):
        rng = random.Random(5)
        cnf = _random_cnf(rng)
        assert solve(cnf) == solve(cnf)

    def test_step_limit_raises(self):
        rng = random.Random(6)
        cnf = _random_cnf(rng, max_vars=8, max_clauses=4)
        with pytest.raises(BudgetExhausted):
            solve(cnf, step_limit=1)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(min_value=0, max_value=10**9))
    def test_agrees_with_truth_table(self, seed):
        rng = random.Random(seed)
        cnf = _random_cnf(rng)
        v = solve(cnf)
        assert v.satisfiable == truth_table_satisfiable(cnf)
        if v.satisfiable:
            assert verify_model(cnf, v.model)
        else:
            assert check_certificate(cnf, v.certificate)


class TestCubes:
    @settings(max_examples=40, deadline=None)
    @given(
        st.integers(min_value=0, max_value=10**9),
        st.integers(min_value=1, max_value=3),
    )
    def test_cube_split_agrees_with_plain_solve(self, seed, k):
        rng = random.Random(seed)
        cnf = _random_cnf(rng)
        v = solve_with_cubes(cnf, k)
        assert v.satisfiable == solve(cnf).satisfiable
        if v.satisfiable:
            assert verify_model(cnf, v.model)
        else:
            assert check_certificate(cnf, v.certificate)

    def test_zero_cubes_degenerates_to_solve(self):
        cnf = Cnf.of([Clause.of(1)], 1)
        assert solve_with_cubes(cnf, 0) == solve(cnf)


class TestCertificates:
    def test_text_roundtrip(self):
        cert = Certificate((Clause.of(1, -2), Clause.of(-1), Clause(frozenset())))
        assert Certificate.from_text(cert.to_text()) == cert

    def test_malformed_line_rejected(self):
        with pytest.raises(MalformedCertificateError):
            Certificate.from_text("1 2\n")

    def test_rejects_non_rup_line(self):
        cnf = Cnf.of([Clause.of(1, 2)], 2)
        bogus = Certificate((Clause.of(1), Clause(frozenset())))
        assert not check_certificate(cnf, bogus)

    def test_rejects_missing_empty_clause(self):
        cnf = Cnf.of([Clause.of(1), Clause.of(-1)], 1)
        assert not check_certificate(cnf, Certificate((Clause.of(1),)))

    def test_literal_out_of_range(self):
        cnf = Cnf.of([Clause.of(1)], 1)
        with pytest.raises(MalformedCertificateError):
            check_certificate(cnf, Certificate((Clause.of(5), Clause(frozenset()))))


class TestTruthTableOracle:
    def test_known_small_cases(self):
        assert truth_table_satisfiable(Cnf.of([Clause.of(1)], 1))
        assert not truth_table_satisfiable(Cnf.of([Clause.of(1), Clause.of(-1)], 1))

    def test_chunked_region_agrees_with_solver(self):
        # more variables than the bitmask chunk width exercises the
        # explicit-enumeration path
        rng = random.Random(11)
        for _ in range(5):
            cnf = _random_cnf(rng, max_vars=22, max_clauses=40)
            assert truth_table_satisfiable(cnf) == solve(cnf).satisfiable
