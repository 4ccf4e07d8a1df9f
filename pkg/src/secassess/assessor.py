"""Generate & test: enumerate eligible deployments and score them.

A deployment assigns every service of an application to a declared node
(and thereby to that node's operator).  Eligibility requires each service's
grounded requirement to be satisfiable on its node and, when a trust
network is declared, the node's operator to be trust-reachable from the
deploying operator.  Without any trust edges the trust conjunct is dropped
entirely, matching the plain strategy.

Each eligible deployment is scored on one joint formula — the conjunction
of every service's requirement and every needed trust-reachability
formula — with a single shared atom table.  Sharing makes a capability
exploited by several services count once, and lets the score factor into
requirement x trust exactly when their atoms are disjoint.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .formula import FALSE, AtomTable, GroundFormula, make_and
from .grounder import candidate_nodes, ground_requirement
from .model import KnowledgeBase
from .semiring import (
    ProbValue, SemiringId, enumerate_proofs, evaluate_proofs, formula_labels,
)
from .trust import TRANSITIVE, trust_formula
from .wmc import formula_probability

__all__ = [
    "Deployment", "Assessment",
    "UnknownAppError", "InconsistentPartialError",
    "enumerate_deployments", "deployment_formula", "assess", "rank",
]


class UnknownAppError(Exception):
    """The queried application was never declared."""


class InconsistentPartialError(Exception):
    """A partial deployment contradicts the knowledge base."""


@dataclass(frozen=True)
class Deployment:
    """Assignment of services to (node, operator) pairs, in app order."""
    app: str
    operator: str
    assignments: tuple  # ((service, node, node_operator), ...)

    def nodes(self) -> tuple:
        return tuple(node for (_service, node, _op) in self.assignments)

    def __str__(self):
        inner = ",".join(f"d({s},{n},{o})" for (s, n, o) in self.assignments)
        return f"[{inner}]"


@dataclass(frozen=True)
class Assessment:
    """A deployment with its security level and the formula behind it."""
    deployment: Deployment
    level: object            # semiring value
    formula: GroundFormula


def _normalize_partial(kb: KnowledgeBase, services, partial) -> dict:
    """Partial deployment -> {service: node}, validated against the KB."""
    if partial is None:
        return {}
    if isinstance(partial, Deployment):
        items = [(s, n, o) for (s, n, o) in partial.assignments]
    else:  # mapping service -> node
        items = [(s, n, None) for s, n in partial.items()]
    fixed: dict[str, str] = {}
    for service, node, operator in items:
        if service not in services:
            raise InconsistentPartialError(
                f"service {service!r} is not part of the application")
        if service in fixed:
            raise InconsistentPartialError(f"service {service!r} fixed twice")
        if node not in kb.nodes:
            raise InconsistentPartialError(f"unknown node {node!r}")
        if operator is not None and kb.nodes[node] != operator:
            raise InconsistentPartialError(
                f"node {node!r} is operated by {kb.nodes[node]!r}, not {operator!r}")
        fixed[service] = node
    return fixed


def _reachable(kb: KnowledgeBase, operator: str, node_operator: str,
               trust_mode) -> bool:
    if operator == node_operator or kb.trust.is_empty():
        return True
    known = kb.trust.operators
    if operator not in known or node_operator not in known:
        return False
    return not trust_formula(kb, operator, node_operator,
                             mode=trust_mode).is_false()


def enumerate_deployments(kb: KnowledgeBase, app: str, operator: str,
                          partial=None, trust_mode=TRANSITIVE) -> list:
    """All eligible deployments, deterministically ordered.

    Services keep application order; each service ranges over its
    requirement-satisfiable, trust-reachable nodes in lexicographic order.
    ``partial`` (a Deployment subset or {service: node} mapping) pins
    services to nodes.
    """
    if app not in kb.apps:
        raise UnknownAppError(f"unknown application {app!r}")
    services = kb.apps[app]
    fixed = _normalize_partial(kb, services, partial)

    reachable_cache: dict[str, bool] = {}

    def ok(node: str) -> bool:
        node_op = kb.nodes[node]
        if node_op not in reachable_cache:
            reachable_cache[node_op] = _reachable(kb, operator, node_op, trust_mode)
        return reachable_cache[node_op]

    choices = []
    for service in services:
        nodes = sorted(n for n in candidate_nodes(kb, service) if ok(n))
        if service in fixed:
            nodes = [n for n in nodes if n == fixed[service]]
        choices.append(nodes)

    return [
        Deployment(app, operator,
                   tuple((s, n, kb.nodes[n]) for s, n in zip(services, combo)))
        for combo in product(*choices)
    ]


def deployment_formula(kb: KnowledgeBase, deployment: Deployment,
                       trust_mode=TRANSITIVE) -> GroundFormula:
    """Joint formula of a complete deployment, over one shared atom table."""
    table = AtomTable()
    conjuncts = []
    for (service, node, node_op) in deployment.assignments:
        requirement = ground_requirement(kb, service, node, table=table)
        conjuncts.append(requirement.root)
        if deployment.operator == node_op or kb.trust.is_empty():
            continue
        known = kb.trust.operators
        if deployment.operator not in known or node_op not in known:
            conjuncts.append(FALSE)
        else:
            reach = trust_formula(kb, deployment.operator, node_op,
                                  mode=trust_mode, table=table)
            conjuncts.append(reach.root)
    return GroundFormula(make_and(conjuncts), table)


def assess(kb: KnowledgeBase, deployment: Deployment,
           semiring: SemiringId | None = None,
           trust_mode=TRANSITIVE) -> Assessment:
    """Security level of one deployment under the active semiring."""
    if semiring is None:
        semiring = kb.semiring
    formula = deployment_formula(kb, deployment, trust_mode=trust_mode)
    if semiring.name == "prob":
        level = ProbValue(formula_probability(formula))
    else:
        level = evaluate_proofs(semiring, enumerate_proofs(formula),
                                formula_labels(formula, semiring))
    return Assessment(deployment, level, formula)


def _sort_key(assessment: Assessment, semiring: SemiringId, rank_by: str):
    nodes = assessment.deployment.nodes()
    level = assessment.level
    if semiring.name == "prob":
        return (-level.p, nodes)
    if rank_by == "value":
        return (-level.t, -level.c, nodes)
    return (-level.c, -level.t, nodes)


def rank(kb: KnowledgeBase, app: str, operator: str, partial=None,
         semiring: SemiringId | None = None, trust_mode=TRANSITIVE,
         rank_by: str = "confidence") -> list:
    """Assess every eligible deployment and sort, best first.

    Probability levels sort descending with lexicographic node tuples as
    tie-break.  Pair levels sort confidence-major by default;
    ``rank_by="value"`` switches to trust-major.
    """
    if semiring is None:
        semiring = kb.semiring
    assessments = [
        assess(kb, d, semiring=semiring, trust_mode=trust_mode)
        for d in enumerate_deployments(kb, app, operator, partial=partial,
                                       trust_mode=trust_mode)
    ]
    assessments.sort(key=lambda a: _sort_key(a, semiring, rank_by))
    return assessments
