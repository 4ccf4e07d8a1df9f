"""Expansion of security requirements into ground formulas.

Policies are non-recursive, so a requirement for a (service, node) pair can
be unfolded by plain macro expansion: policy heads are inlined, capability
atoms become weighted formula atoms if the node declares them, and become
``FALSE`` otherwise (closed world).  The resulting AND-OR tree is the exact
shape an explanation renders, and the object every evaluator consumes.
"""

from __future__ import annotations

from .dsl import Certain, Compare, Conj, Const, Disj, IsMinus, Lit, Struct
from .formula import (
    FALSE, TRUE, Atom, AtomTable, GroundFormula, make_and, make_not, make_or,
)
from .model import KnowledgeBase

__all__ = [
    "GroundingError", "NoRequirementError", "NegatedAnnotatedAtomError",
    "ground_requirement", "candidate_nodes",
    "GroundFormula", "AtomTable",
]

# Defensive bound in case a cyclic policy set slips past validation.
MAX_UNFOLD_DEPTH = 64


class GroundingError(Exception):
    """Requirement expansion failed."""


class NoRequirementError(GroundingError):
    """No securityRequirements clause matches the service."""


class NegatedAnnotatedAtomError(GroundingError):
    """Negation is only defined over plain (Certain) capability facts."""


def _ground_body(kb: KnowledgeBase, body, node: str, table: AtomTable, depth: int):
    if body is None:
        return TRUE
    if isinstance(body, Conj):
        return make_and(_ground_body(kb, item, node, table, depth)
                        for item in body.items)
    if isinstance(body, Disj):
        return make_or(_ground_body(kb, item, node, table, depth)
                       for item in body.items)
    if isinstance(body, (Compare, IsMinus)):
        raise GroundingError(f"arithmetic literal {body} in a policy body")
    if isinstance(body, Lit):
        return _ground_literal(kb, body, node, table, depth)
    raise GroundingError(f"unsupported body node {body!r}")


def _ground_literal(kb: KnowledgeBase, lit: Lit, node: str, table: AtomTable,
                    depth: int):
    if depth > MAX_UNFOLD_DEPTH:
        raise GroundingError(
            f"policy unfolding exceeded depth {MAX_UNFOLD_DEPTH}; "
            f"policies are probably cyclic")
    name = lit.atom.name

    clauses = kb.policy_clauses(name)
    if clauses:
        if not lit.positive:
            raise NegatedAnnotatedAtomError(
                f"\\+{name}(...) negates a policy; only plain capability "
                f"facts may be negated")
        return make_or(_ground_body(kb, clause.body, node, table, depth + 1)
                       for clause in clauses)

    # Extensional capability atom over the policy's node variable.
    label = kb.capabilities.get((name, node))
    if label is None:
        ground = FALSE
    else:
        if not lit.positive and not isinstance(label, Certain):
            raise NegatedAnnotatedAtomError(
                f"\\+{name}({node}) negates an annotated fact")
        ground = Atom(table.intern(Struct(name, (Const(node),)), label))
    return ground if lit.positive else make_not(ground)


def ground_requirement(kb: KnowledgeBase, service: str, node: str,
                       table: AtomTable | None = None) -> GroundFormula:
    """Unfold the security requirement of ``service`` on ``node``.

    Alternative requirement clauses for the same service are OR-ed.  Pass a
    shared ``table`` to make atoms common to several calls (same node used
    by several services, for instance) intern to the same id.
    """
    if node not in kb.nodes:
        raise GroundingError(f"unknown node {node!r}")
    clauses = kb.policy_clauses("securityRequirements", service)
    if not clauses:
        raise NoRequirementError(
            f"no securityRequirements clause for service {service!r}")
    if table is None:
        table = AtomTable()
    root = make_or(_ground_body(kb, clause.body, node, table, 0)
                   for clause in clauses)
    return GroundFormula(root, table)


def candidate_nodes(kb: KnowledgeBase, service: str) -> set[str]:
    """Nodes whose grounded requirement for ``service`` is not constant false."""
    out = set()
    for node in kb.nodes:
        if not ground_requirement(kb, service, node).is_false():
            out.add(node)
    return out
