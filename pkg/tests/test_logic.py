import pytest
from hypothesis import given, strategies as st

from bruteforge.logic import (
    App,
    Assignment,
    BOOLEAN_SIG,
    Clause,
    Cnf,
    DimacsError,
    GROUP_SIG,
    ROBBINS_SIG,
    TermSyntaxError,
    UnknownSymbolError,
    Var,
    format_term,
    parse_dimacs,
    parse_term,
    term_size,
    term_vars,
    var_id,
    var_name,
    with_constants,
    write_dimacs,
)


class TestTermParsing:
    def test_single_variable(self):
        assert parse_term("x", BOOLEAN_SIG) == Var(0)
        assert parse_term("y", BOOLEAN_SIG) == Var(1)
        assert parse_term("x0", BOOLEAN_SIG) == Var(3)

    def test_disjunction_left_associative(self):
        t = parse_term("x v x v x", ROBBINS_SIG)
        assert t == App("v", (App("v", (Var(0), Var(0))), Var(0)))

    def test_first_witness_term(self):
        t = parse_term("x v x", ROBBINS_SIG)
        assert t == App("v", (Var(0), Var(0)))

    def test_second_witness_term(self):
        t = parse_term("-(-(x v x v x) v x)", ROBBINS_SIG)
        inner = App("v", (App("v", (Var(0), Var(0))), Var(0)))
        assert t == App("-", (App("v", (App("-", (inner,)), Var(0))),))

    def test_precedence_conj_binds_tighter(self):
        t = parse_term("x v y ^ z", BOOLEAN_SIG)
        assert t == App("v", (Var(0), App("^", (Var(1), Var(2)))))

    def test_function_call_syntax(self):
        t = parse_term("i(x * e)", GROUP_SIG)
        assert t == App("i", (App("*", (Var(0), App("e"))),))

    def test_constants(self):
        assert parse_term("0", BOOLEAN_SIG) == App("0")
        assert parse_term("e", GROUP_SIG) == App("e")

    def test_unknown_symbol_rejected(self):
        with pytest.raises(UnknownSymbolError):
            parse_term("x * y", BOOLEAN_SIG)
        with pytest.raises(UnknownSymbolError):
            parse_term("f(x)", BOOLEAN_SIG)

    def test_syntax_error_carries_position(self):
        with pytest.raises(TermSyntaxError) as err:
            parse_term("x v", BOOLEAN_SIG)
        assert err.value.pos == 3

    def test_arity_enforced(self):
        with pytest.raises(TermSyntaxError):
            parse_term("i(x, y)", GROUP_SIG)

    def test_with_constants(self):
        sig = with_constants(ROBBINS_SIG, "a", "b")
        assert parse_term("a v b", sig) == App("v", (App("a"), App("b")))

    def test_var_naming_bijection(self):
        for vid in range(20):
            assert var_id(var_name(vid)) == vid


def _terms(signature):
    def extend(children):
        apps = []
        for sym, arity in signature.items():
            if arity == 1:
                apps.append(st.builds(lambda a, s=sym: App(s, (a,)), children))
            elif arity == 2:
                apps.append(
                    st.builds(lambda a, b, s=sym: App(s, (a, b)), children, children)
                )
        return st.one_of(*apps)

    leaves = st.one_of(
        st.integers(min_value=0, max_value=5).map(Var),
        *[st.just(App(s)) for s, a in signature.items() if a == 0],
    )
    return st.recursive(leaves, extend, max_leaves=12)


class TestTermFormatting:
    @given(_terms(BOOLEAN_SIG))
    def test_boolean_roundtrip(self, t):
        assert parse_term(format_term(t), BOOLEAN_SIG) == t

    @given(_terms(GROUP_SIG))
    def test_group_roundtrip(self, t):
        assert parse_term(format_term(t), GROUP_SIG) == t

    @given(_terms(BOOLEAN_SIG))
    def test_size_and_vars_consistent(self, t):
        assert term_size(t) >= 1
        assert all(v >= 0 for v in term_vars(t))


class TestClauses:
    def test_of_rejects_zero(self):
        with pytest.raises(ValueError):
            Clause.of(1, 0)

    def test_tautology_flagged_not_dropped(self):
        c = Clause.of(1, -1, 2)
        assert c.is_tautological
        assert c.lits == frozenset({1, -1, 2})

    def test_duplicate_literals_collapse(self):
        assert Clause.of(1, 1, 2).lits == frozenset({1, 2})

    def test_cnf_rejects_out_of_range_literal(self):
        with pytest.raises(ValueError):
            Cnf((Clause.of(3),), 2)


class TestAssignment:
    def test_literal_valuation(self):
        a = Assignment({1: True, 2: False})
        assert a.value(1) is True
        assert a.value(-1) is False
        assert a.value(-2) is True
        assert a.value(3) is None

    def test_is_total(self):
        assert Assignment({1: True, 2: False}).is_total(2)
        assert not Assignment({1: True}).is_total(2)


class TestDimacs:
    def test_roundtrip(self):
        cnf = Cnf.of([Clause.of(1, -2), Clause.of(2, 3), Clause.of(-1)], 3)
        assert parse_dimacs(write_dimacs(cnf)) == cnf

    def test_empty_formula(self):
        cnf = Cnf.of([], 0)
        assert write_dimacs(cnf) == "p cnf 0 0\n"
        assert parse_dimacs("p cnf 0 0\n") == cnf

    def test_comments_and_blank_lines_ignored(self):
        text = "c a comment\n\np cnf 2 1\nc another\n1 -2 0\n"
        assert parse_dimacs(text) == Cnf.of([Clause.of(1, -2)], 2)

    def test_clause_count_mismatch(self):
        with pytest.raises(DimacsError):
            parse_dimacs("p cnf 2 2\n1 0\n")

    def test_literal_out_of_declared_range(self):
        with pytest.raises(DimacsError):
            parse_dimacs("p cnf 1 1\n2 0\n")

    def test_missing_header(self):
        with pytest.raises(DimacsError):
            parse_dimacs("1 0\n")

    def test_missing_terminator(self):
        with pytest.raises(DimacsError):
            parse_dimacs("p cnf 2 1\n1 -2\n")
