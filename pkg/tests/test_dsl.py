import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from secassess.dsl import (
    CERTAIN, Compare, Conj, Const, Disj, Fact, IsMinus, ListTerm, Lit, Num,
    Pair, ParseError, Prob, Program, Query, Rule, Struct, Var, make_conj,
    make_disj, parse_program, print_program,
)


def one(text):
    program = parse_program(text)
    assert len(program.statements) == 1
    return program.statements[0]


class TestFacts:
    def test_plain_fact_is_certain(self):
        stmt = one("resource_monitoring(edge1).")
        assert stmt == Fact(Struct("resource_monitoring", (Const("edge1"),)), CERTAIN)

    def test_annotated_fact(self):
        stmt = one("0.9999::firewall(cloud1).")
        assert stmt == Fact(Struct("firewall", (Const("cloud1"),)), Prob(0.9999))

    def test_leading_dot_probability(self):
        stmt = one(".9::trusts(appOp, edgeOp).")
        assert stmt.label == Prob(0.9)

    def test_pair_label(self):
        stmt = one("(0.9,0.8)::trusts(appOp, edgeOp).")
        assert stmt.label == Pair(0.9, 0.8)
        assert stmt.atom == Struct("trusts", (Const("appOp"), Const("edgeOp")))

    def test_negative_trust_pair(self):
        stmt = one("(-0.1,0.7)::trusts(cloudOp2, cloudOp1).")
        assert stmt.label == Pair(-0.1, 0.7)

    def test_two_node_declaration(self):
        stmt = one("node(cloud1, cloudOp1).")
        assert stmt == Fact(Struct("node", (Const("cloud1"), Const("cloudOp1"))))

    def test_app_with_service_list(self):
        stmt = one("app(smartfarming, [s1, s2, s3]).")
        services = stmt.atom.args[1]
        assert isinstance(services, ListTerm)
        assert services.items == (Const("s1"), Const("s2"), Const("s3"))
        assert services.tail is None

    def test_zero_arity_fact(self):
        assert one("maintenance_mode.") == Fact(Struct("maintenance_mode", ()))


class TestRules:
    def test_unit_clause_with_variables_is_a_rule(self):
        stmt = one("trusts(X,X).")
        assert stmt == Rule(Struct("trusts", (Var("X"), Var("X"))), None)

    def test_conjunction_body(self):
        stmt = one("securityRequirements(s2, N) :- secureStorage(N), resource_monitoring(N).")
        assert isinstance(stmt, Rule)
        assert isinstance(stmt.body, Conj)
        assert len(stmt.body.items) == 2

    def test_parenthesised_disjunction(self):
        stmt = one("secureStorage(N) :- backup(N), (encrypted_storage(N); obfuscated_storage(N)).")
        body = stmt.body
        assert isinstance(body, Conj)
        assert isinstance(body.items[1], Disj)

    def test_semicolon_binds_looser_than_comma(self):
        stmt = one("r(N) :- b(N), c(N); d(N).")
        body = stmt.body
        assert isinstance(body, Disj)
        assert isinstance(body.items[0], Conj)
        assert body.items[1] == Lit(Struct("d", (Var("N"),)))

    def test_negation(self):
        stmt = one("t(A,B) :- \\+dir(A,B), ind(A,B).")
        negated = stmt.body.items[0]
        assert negated == Lit(Struct("dir", (Var("A"), Var("B"))), positive=False)

    def test_cons_pattern_and_nested_term(self):
        stmt = one("deployment(OpA,[C|Cs],[d(C,N,OpN)|D]) :- node(N,OpN), deployment(OpA,Cs,D).")
        head = stmt.head
        assert head.args[1] == ListTerm((Var("C"),), Var("Cs"))
        inner = head.args[2]
        assert inner.items[0] == Struct("d", (Var("C"), Var("N"), Var("OpN")))
        assert inner.tail == Var("D")

    def test_anonymous_variable(self):
        stmt = one("deployment(_,[],[]).")
        assert stmt == Rule(
            Struct("deployment", (Var("_"), ListTerm(), ListTerm())), None)

    def test_radius_builtins(self):
        stmt = one("trusts2(A,B,D) :- D > 0, trusts(A,C), NewD is D - 1, trusts2(C,B,NewD).")
        items = stmt.body.items
        assert items[0] == Compare(Var("D"), ">", Num(0))
        assert items[2] == IsMinus(Var("NewD"), Var("D"), Num(1))

    def test_numeric_argument(self):
        stmt = one("trusts2(A,B) :- trusts2(A,B,3).")
        assert stmt.body == Lit(Struct("trusts2", (Var("A"), Var("B"), Num(3))))


class TestQueries:
    def test_query_statement(self):
        stmt = one("query(trusts2(srcOp, dstOp)).")
        assert stmt == Query(Struct("trusts2", (Const("srcOp"), Const("dstOp"))))

    def test_query_with_variable(self):
        stmt = one("query(secFog(appOp, weatherApp, D)).")
        assert isinstance(stmt, Query)
        assert stmt.atom.args[2] == Var("D")


class TestErrors:
    def test_missing_period(self):
        with pytest.raises(ParseError) as err:
            parse_program("f(a)")
        assert "'.'" in str(err.value)

    def test_probability_out_of_range(self):
        with pytest.raises(ParseError, match="outside"):
            parse_program("1.5::g(b).")

    def test_negative_probability(self):
        with pytest.raises(ParseError, match="outside"):
            parse_program("-0.5::g(b).")

    def test_pair_trust_out_of_range(self):
        with pytest.raises(ParseError, match="outside"):
            parse_program("(2,0.5)::t(a,b).")

    def test_pair_confidence_out_of_range(self):
        with pytest.raises(ParseError, match="outside"):
            parse_program("(0.5,1.5)::t(a,b).")

    def test_annotated_non_ground(self):
        with pytest.raises(ParseError, match="ground"):
            parse_program("0.5::f(X).")

    def test_labelled_rule_rejected(self):
        with pytest.raises(ParseError, match="label"):
            parse_program("0.5::r(N) :- c(N).")

    def test_position_reported(self):
        with pytest.raises(ParseError) as err:
            parse_program("f(a).\ng(@).")
        assert err.value.line == 2
        assert err.value.col == 3

    def test_unbalanced_parenthesis(self):
        with pytest.raises(ParseError):
            parse_program("r(N) :- (a(N); b(N).")


class TestSpans:
    def test_spans_cover_statements(self):
        text = "f(a).\n  0.5::g(b).  % trailing comment\nh(c)."
        program = parse_program(text)
        assert [text[start:end] for start, end in program.spans] == [
            "f(a).", "0.5::g(b).", "h(c).",
        ]

    def test_spans_do_not_affect_equality(self):
        a = parse_program("f(a).")
        b = parse_program("   f(a).   ")
        assert a == b
        assert a.spans != b.spans


class TestPrinting:
    def test_certain_fact(self):
        assert print_program(Program((Fact(Struct("f", (Const("a"),))),))) == "f(a).\n"

    def test_annotated_fact(self):
        program = Program((Fact(Struct("g", (Const("b"),)), Prob(0.5)),))
        assert print_program(program) == "0.5::g(b).\n"

    def test_disjunction_parenthesised_under_conjunction(self):
        text = "s(N) :- b(N),(e(N);o(N)).\n"
        assert print_program(parse_program(text)) == text


# -- round-trip property ------------------------------------------------------

_names = st.sampled_from("alpha beta gamma delta eps".split())
_constants = st.builds(Const, _names)
_numbers = st.builds(Num, st.one_of(st.integers(-20, 20),
                                    st.floats(0, 1, allow_nan=False)))
_ground_terms = st.one_of(_constants, _numbers,
                          st.builds(lambda xs: ListTerm(tuple(xs)),
                                    st.lists(_constants, min_size=0, max_size=3)))
_ground_atoms = st.builds(lambda n, a: Struct(n, tuple(a)),
                          _names, st.lists(_ground_terms, max_size=3))
_vars = st.sampled_from([Var("N"), Var("M"), Var("X")])
_head_atoms = st.builds(lambda n, v: Struct(n, (v,)), _names, _vars)
_labels = st.one_of(
    st.just(CERTAIN),
    st.builds(Prob, st.floats(0, 1, allow_nan=False)),
    st.builds(Pair, st.floats(-1, 1, allow_nan=False),
              st.floats(0, 1, allow_nan=False)),
)
_body_atoms = st.builds(lambda n, v: Struct(n, (v,)), _names, _vars)
_literals = st.builds(Lit, _body_atoms, st.booleans())
_builtins = st.one_of(
    st.builds(Compare, _vars, st.just(">"), st.builds(Num, st.integers(0, 9))),
    st.builds(IsMinus, st.just(Var("M")), st.just(Var("N")),
              st.builds(Num, st.integers(1, 3))),
)
_bodies = st.recursive(
    st.one_of(_literals, _builtins),
    lambda inner: st.one_of(
        st.builds(lambda xs: make_conj(xs), st.lists(inner, min_size=2, max_size=3)),
        st.builds(lambda xs: make_disj(xs), st.lists(inner, min_size=2, max_size=3)),
    ),
    max_leaves=8,
)
_statements = st.one_of(
    st.builds(Fact, _ground_atoms, _labels),
    st.builds(Rule, _head_atoms, _bodies),
    st.builds(Rule, _head_atoms, st.none()),
    st.builds(Query, _ground_atoms.filter(lambda a: a.args)),
)
_programs = st.builds(lambda ss: Program(tuple(ss)),
                      st.lists(_statements, max_size=8))


@settings(max_examples=200, deadline=None)
@given(_programs)
def test_round_trip(program):
    assert parse_program(print_program(program)) == program
