import pytest

from secassess.dsl import Lit, Struct, Var, parse_program
from secassess.formula import FALSE, TRUE, And, Atom, Not, Or, atoms_in
from secassess.grounder import (
    GroundingError, NegatedAnnotatedAtomError, NoRequirementError,
    candidate_nodes, ground_requirement,
)
from secassess.formula import AtomTable
from secassess.model import KnowledgeBase, PolicyRule, TrustNetwork, build_kb
from secassess.semiring import PROBABILITY
from secassess.wmc import enumerate_probability, formula_probability


def atom_names(formula):
    return sorted(str(formula.table.atom(i)) for i in formula.atom_ids())


class TestWeatherExample:
    def test_cloud_grounding(self, weather_kb):
        gf = ground_requirement(weather_kb, "weatherMonitor", "cloud")
        # wireless_security(cloud) is undeclared, so the second disjunction
        # collapses to the single encryption atom.
        assert isinstance(gf.root, And)
        assert len(gf.root.children) == 2
        assert isinstance(gf.root.children[0], Or)
        assert isinstance(gf.root.children[1], Atom)
        assert atom_names(gf) == [
            "access_control(cloud)", "anti_tampering(cloud)",
            "iot_data_encryption(cloud)",
        ]

    def test_edge_grounding(self, weather_kb):
        gf = ground_requirement(weather_kb, "weatherMonitor", "edge")
        assert isinstance(gf.root, And)
        assert isinstance(gf.root.children[0], Atom)
        assert isinstance(gf.root.children[1], Or)
        assert atom_names(gf) == [
            "anti_tampering(edge)", "iot_data_encryption(edge)",
            "wireless_security(edge)",
        ]

    def test_candidates(self, weather_kb):
        assert candidate_nodes(weather_kb, "weatherMonitor") == {"cloud", "edge"}


class TestClosedWorld:
    def test_all_undeclared_collapses_to_false(self):
        kb = build_kb(parse_program(
            "node(n, op). app(a, [s]). "
            "securityRequirements(s, N) :- audit(N), backup(N)."))
        assert ground_requirement(kb, "s", "n").is_false()
        assert candidate_nodes(kb, "s") == set()

    def test_no_constant_leaks_into_mixed_formula(self, weather_kb):
        gf = ground_requirement(weather_kb, "weatherMonitor", "cloud")

        def no_constants(node):
            if node is TRUE or node is FALSE:
                return False
            if isinstance(node, (And, Or)):
                return all(no_constants(c) for c in node.children)
            if isinstance(node, Not):
                return no_constants(node.child)
            return True

        assert no_constants(gf.root)


class TestPolicies:
    def test_multiple_requirement_clauses_are_alternatives(self):
        kb = build_kb(parse_program(
            "node(n, op). 0.5::audit(n). 0.6::backup(n). app(a, [s]). "
            "securityRequirements(s, N) :- audit(N). "
            "securityRequirements(s, N) :- backup(N)."))
        gf = ground_requirement(kb, "s", "n")
        assert isinstance(gf.root, Or)
        assert formula_probability(gf) == pytest.approx(0.5 + 0.6 - 0.3)

    def test_policy_inlining(self, smartbuilding_kb):
        gf = ground_requirement(smartbuilding_kb, "data_storage", "cloud1")
        names = atom_names(gf)
        assert "backup(cloud1)" in names
        assert "encrypted_storage(cloud1)" in names
        # the policy head itself never appears as an atom
        assert not any(name.startswith("secure_storage") for name in names)

    def test_unit_policy_grounds_to_true(self):
        kb = build_kb(parse_program(
            "node(n, op). always_ok(N). app(a, [s]). "
            "securityRequirements(s, N) :- always_ok(N)."))
        assert ground_requirement(kb, "s", "n").is_true()

    def test_missing_requirement(self, weather_kb):
        with pytest.raises(NoRequirementError):
            ground_requirement(weather_kb, "ghostService", "cloud")

    def test_unknown_node(self, weather_kb):
        with pytest.raises(GroundingError):
            ground_requirement(weather_kb, "weatherMonitor", "ghost")


class TestNegation:
    def test_negated_undeclared_capability_holds(self):
        kb = build_kb(parse_program(
            "node(n, op). 0.8::backup(n). app(a, [s]). "
            "securityRequirements(s, N) :- backup(N), \\+legacy_stack(N)."))
        gf = ground_requirement(kb, "s", "n")
        assert isinstance(gf.root, Atom)  # negation simplified away
        assert formula_probability(gf) == pytest.approx(0.8)

    def test_negated_certain_capability_stays(self):
        kb = build_kb(parse_program(
            "node(n, op). 0.8::backup(n). legacy_stack(n). app(a, [s]). "
            "securityRequirements(s, N) :- backup(N), \\+legacy_stack(N)."))
        gf = ground_requirement(kb, "s", "n")
        assert formula_probability(gf) == pytest.approx(0.0)

    def test_negated_annotated_capability_rejected(self):
        kb = build_kb(parse_program(
            "node(n, op). 0.8::backup(n). 0.5::legacy_stack(n). app(a, [s]). "
            "securityRequirements(s, N) :- backup(N), \\+legacy_stack(N)."))
        with pytest.raises(NegatedAnnotatedAtomError):
            ground_requirement(kb, "s", "n")

    def test_negated_policy_rejected(self):
        kb = build_kb(parse_program(
            "node(n, op). 0.8::backup(n). app(a, [s]). "
            "p(N) :- backup(N). "
            "securityRequirements(s, N) :- backup(N), \\+p(N)."))
        with pytest.raises(NegatedAnnotatedAtomError):
            ground_requirement(kb, "s", "n")


class TestSharing:
    def test_shared_table_across_services(self, weather_kb):
        table = AtomTable()
        ground_requirement(weather_kb, "weatherMonitor", "cloud", table=table)
        before = len(table)
        ground_requirement(weather_kb, "weatherMonitor", "cloud", table=table)
        assert len(table) == before  # same atoms, same ids

    def test_simplification_preserves_semantics(self, weather_kb):
        for node in ("cloud", "edge"):
            gf = ground_requirement(weather_kb, "weatherMonitor", node)
            assert formula_probability(gf) == pytest.approx(
                enumerate_probability(gf), abs=1e-12)


class TestDepthGuard:
    def test_cycle_that_escaped_validation_is_caught(self):
        # Hand-built KB with a policy cycle (build_kb would reject it).
        policies = (
            PolicyRule("a", None, "N", Lit(Struct("b", (Var("N"),)))),
            PolicyRule("b", None, "N", Lit(Struct("a", (Var("N"),)))),
            PolicyRule("securityRequirements", "s", "N",
                       Lit(Struct("a", (Var("N"),)))),
        )
        kb = KnowledgeBase(
            nodes={"n": "op"}, capabilities={}, apps={"app": ("s",)},
            policies=policies, trust=TrustNetwork({}, frozenset()),
            direct_flags=frozenset(), queries=(), semiring=PROBABILITY)
        with pytest.raises(GroundingError, match="depth"):
            ground_requirement(kb, "s", "n")
