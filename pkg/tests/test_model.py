import random

import pytest

from secassess.dsl import CERTAIN, Const, Pair, Prob, Program, Struct, parse_program
from secassess.model import (
    CAPABILITY_VOCABULARY, DuplicateLabelError, LabelRangeError,
    RecursivePolicyError, UnknownNodeError, UnsafeRuleError, ValidationError,
    build_kb, lint_vocabulary,
)
from secassess.semiring import STAR, TC_MAX

from conftest import load_kb


def kb_of(text, semiring=None):
    program = parse_program(text)
    if semiring is None:
        return build_kb(program)
    return build_kb(program, semiring)


class TestFacts:
    def test_annotated_capability(self):
        kb = kb_of("node(cloud1, cloudOp1). 0.9999::firewall(cloud1).")
        assert kb.nodes == {"cloud1": "cloudOp1"}
        assert kb.capabilities[("firewall", "cloud1")] == Prob(0.9999)

    def test_plain_fact_is_certain(self):
        kb = kb_of("node(edge1, appOp). resource_monitoring(edge1).")
        assert kb.capabilities[("resource_monitoring", "edge1")] == CERTAIN

    def test_undeclared_capability_is_absent(self):
        kb = kb_of("node(edge1, appOp). resource_monitoring(edge1).")
        assert ("firewall", "edge1") not in kb.capabilities

    def test_apps_keep_declaration_order(self):
        kb = kb_of("app(smart, [c, a, b]).")
        assert kb.apps["smart"] == ("c", "a", "b")

    def test_trust_edges_collected(self):
        kb = kb_of("0.9::trusts(a, b). trusts(b, c).")
        assert kb.trust.edges[("a", "b")] == Prob(0.9)
        assert kb.trust.edges[("b", "c")] == CERTAIN
        assert kb.trust.operators == {"a", "b", "c"}

    def test_dir_flags_collected(self):
        kb = kb_of("0.9::trusts(a, b). dir(a, b).")
        assert kb.direct_flags == {("a", "b")}

    def test_queries_recorded(self):
        kb = load_kb("trust_simple.sf")
        assert kb.queries == (Struct("trusts2", (Const("srcOp"), Const("dstOp"))),)


class TestValidation:
    def test_conflicting_labels(self):
        with pytest.raises(DuplicateLabelError):
            kb_of("node(n, op). 0.5::f(n). 0.6::f(n).")

    def test_identical_redeclaration_is_idempotent(self):
        kb = kb_of("node(n, op). 0.5::f(n). 0.5::f(n).")
        assert kb.capabilities[("f", "n")] == Prob(0.5)

    def test_unknown_node(self):
        with pytest.raises(UnknownNodeError):
            kb_of("firewall(ghost).")

    def test_node_order_does_not_matter(self):
        kb = kb_of("firewall(n). node(n, op).")
        assert ("firewall", "n") in kb.capabilities

    def test_recursive_policy(self):
        with pytest.raises(RecursivePolicyError):
            kb_of("a(N) :- b(N). b(N) :- a(N).")

    def test_unsafe_rule(self):
        with pytest.raises(UnsafeRuleError):
            kb_of("securityRequirements(s, N) :- f(M).")

    def test_pair_label_under_probability_semiring(self):
        with pytest.raises(LabelRangeError):
            kb_of("(0.9,0.8)::trusts(a, b).")

    def test_probability_label_under_tc_semiring(self):
        with pytest.raises(LabelRangeError):
            kb_of("0.9::trusts(a, b).", TC_MAX)

    def test_negative_trust_needs_star(self):
        text = "(-0.1,0.9)::trusts(a, b)."
        with pytest.raises(LabelRangeError):
            kb_of(text, TC_MAX)
        kb = kb_of(text, STAR)
        assert kb.trust.edges[("a", "b")] == Pair(-0.1, 0.9)

    def test_annotated_node_rejected(self):
        with pytest.raises(ValidationError):
            kb_of("0.9::node(n, op).")

    def test_unrecognised_fact(self):
        with pytest.raises(ValidationError):
            kb_of("latency(n1, n2, 20).")

    def test_duplicate_service_in_app(self):
        with pytest.raises(ValidationError):
            kb_of("app(a, [s, s]).")


class TestEngineRules:
    def test_strategy_file_loads_and_adds_nothing(self):
        plain = load_kb("weather_app.sf", "weather_infra.sf")
        with_rules = load_kb("weather_app.sf", "weather_infra.sf",
                             "strategy_rules.sf")
        assert with_rules.policies == plain.policies
        assert with_rules.nodes == plain.nodes
        assert len(with_rules.queries) == 1

    def test_directly_trusts_facts_are_edges(self):
        kb = kb_of("0.7::directly_trusts(a, b).")
        assert kb.trust.edges[("a", "b")] == Prob(0.7)


class TestOrderInsensitivity:
    def test_statement_permutation(self):
        text = (
            "node(n1, op1). node(n2, op2). 0.9::f(n1). g(n2). "
            "app(a, [s]). securityRequirements(s, N) :- f(N). "
            "p(N) :- g(N); f(N). 0.5::trusts(op1, op2). dir(op1, op2). "
            "query(trusts2(op1, op2))."
        )
        statements = list(parse_program(text).statements)
        reference = build_kb(Program(tuple(statements)))
        rng = random.Random(7)
        for _ in range(5):
            rng.shuffle(statements)
            assert build_kb(Program(tuple(statements))) == reference

    def test_merge_split_points_do_not_matter(self):
        parts = ["node(n1, op1).", "0.9::f(n1). app(a, [s]).",
                 "securityRequirements(s, N) :- f(N)."]
        programs = [parse_program(p) for p in parts]
        assert build_kb(programs) == build_kb([parse_program(" ".join(parts))])
        assert build_kb(programs) == build_kb(list(reversed(programs)))


class TestLint:
    def test_vocabulary_member(self):
        kb = kb_of("node(n1, op). firewall(n1).")
        assert lint_vocabulary(kb) == []

    def test_unknown_capability_warns_once(self):
        kb = kb_of("node(n1, op). node(n2, op). quantum_shield(n1). "
                   "quantum_shield(n2).")
        warnings = lint_vocabulary(kb)
        assert len(warnings) == 1
        assert "quantum_shield" in str(warnings[0])
        assert warnings[0].nodes == ("n1", "n2")

    def test_all_vocabulary_names_pass(self):
        decls = "node(n, op). " + " ".join(
            f"{name}(n)." for name in sorted(CAPABILITY_VOCABULARY))
        kb = kb_of(decls)
        assert len(CAPABILITY_VOCABULARY) == 21
        assert lint_vocabulary(kb) == []
