"""Knowledge base construction and validation.

Parsed programs are merged into an immutable :class:`KnowledgeBase` holding
nodes, capability labels, applications, security policies, trust edges and
direct-trust flags.  Conventions enforced here:

* a plain fact carries the Certain label and is treated as probability 1;
* an undeclared capability is simply absent and treated as false
  (closed world) — the same convention applies to trust edges;
* every ground atom has exactly one label, and merging is insensitive to
  statement order across and within programs.

Rules that (re)define the engine's built-in machinery — the trust closure
and the deployment search — are recognised and skipped: the engine provides
those semantics natively, so input files may include them verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .dsl import (
    CERTAIN, Certain, Compare, Conj, Const, Disj, Fact, IsMinus, Lit, Pair,
    Prob, Program, Query, Rule, Struct, Var, ListTerm, term_variables,
)
from .semiring import PROBABILITY, SemiringId, label_in_carrier

__all__ = [
    "KnowledgeBase", "PolicyRule", "TrustNetwork", "LintWarning",
    "ValidationError", "DuplicateLabelError", "UnknownNodeError",
    "RecursivePolicyError", "LabelRangeError", "UnsafeRuleError",
    "build_kb", "lint_vocabulary", "CAPABILITY_VOCABULARY",
]


class ValidationError(Exception):
    """A program is well-formed syntactically but inconsistent as a model."""


class DuplicateLabelError(ValidationError):
    """Two different labels declared for the same ground atom."""


class UnknownNodeError(ValidationError):
    """A capability fact references a node nobody declared."""


class RecursivePolicyError(ValidationError):
    """Security policies must not be (mutually) recursive."""


class LabelRangeError(ValidationError):
    """A label lies outside the active semiring's carrier set."""


class UnsafeRuleError(ValidationError):
    """A head variable does not occur in any positive body literal."""


# Rules whose heads or bodies touch these predicates re-state machinery the
# engine implements natively; they are accepted and skipped.
_ENGINE_PREDICATES = frozenset({
    "trusts", "trusts2", "directly_trusts", "indirectly_trusts", "deployment",
})

# The shared capability vocabulary; open — unknown names lint, never fail.
CAPABILITY_VOCABULARY = frozenset({
    "access_logs", "authentication", "host_ids", "process_isolation",
    "permission_model", "resource_monitoring", "restore_points",
    "user_data_isolation",
    "certificates", "iot_data_encryption", "firewall",
    "node_isolation_mechanism", "network_ids", "public_key_cryptography",
    "wireless_security",
    "backup", "encrypted_storage", "obfuscated_storage",
    "access_control", "anti_tampering",
    "audit",
})


@dataclass(frozen=True)
class PolicyRule:
    """One clause of a security policy or requirement.

    ``head_name`` with ``service`` None is a unary policy over a node
    variable; ``service`` set means a requirement clause for that service.
    Several clauses for the same head are alternatives (OR).
    """
    head_name: str
    service: str | None
    node_var: str | None
    body: object  # BodyExpr or None for a unit clause


@dataclass(frozen=True)
class TrustNetwork:
    """Directed trust opinions between operators; at most one edge per pair."""
    edges: dict = field(default_factory=dict)   # (from, to) -> Label
    operators: frozenset = frozenset()

    def is_empty(self) -> bool:
        return not self.edges

    def successors(self, operator: str):
        return sorted(b for (a, b) in self.edges if a == operator)


@dataclass(frozen=True)
class KnowledgeBase:
    """Validated model of infrastructure, applications, policies and trust.

    Immutable after :func:`build_kb`; safe to share between threads.
    """
    nodes: dict                      # node -> operator
    capabilities: dict               # (capability, node) -> Label
    apps: dict                       # app -> tuple of services
    policies: tuple                  # PolicyRule, in declaration order
    trust: TrustNetwork
    direct_flags: frozenset          # (from, to) pairs with dir/2 set
    queries: tuple                   # recorded query atoms (informational)
    semiring: SemiringId

    def policy_clauses(self, head_name: str, service: str | None = None):
        return [p for p in self.policies
                if p.head_name == head_name and p.service == service]

    def services(self):
        out = []
        for app in self.apps.values():
            out.extend(app)
        return out

    def app_of_service(self, service: str) -> str | None:
        for app, services in self.apps.items():
            if service in services:
                return app
        return None


@dataclass(frozen=True)
class LintWarning:
    capability: str
    nodes: tuple
    message: str

    def __str__(self):
        return self.message


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

def _const_name(term, context: str) -> str:
    if not isinstance(term, Const):
        raise ValidationError(f"{context} must be a constant, got {term}")
    return term.name


def _mentions_engine_predicate(body) -> bool:
    if body is None:
        return False
    if isinstance(body, Lit):
        return body.atom.name in _ENGINE_PREDICATES
    if isinstance(body, (Conj, Disj)):
        return any(_mentions_engine_predicate(i) for i in body.items)
    return False


def _body_literals(body):
    """Flatten a body into its Lit / Compare / IsMinus leaves."""
    if body is None:
        return
    if isinstance(body, (Conj, Disj)):
        for item in body.items:
            yield from _body_literals(item)
    else:
        yield body


def _check_range_restriction(rule: Rule):
    if rule.body is None:
        return
    head_vars = {v for v in term_variables(rule.head) if v != "_"}
    positive: set[str] = set()
    for leaf in _body_literals(rule.body):
        if isinstance(leaf, Lit) and leaf.positive:
            positive |= term_variables(leaf.atom)
        elif isinstance(leaf, IsMinus):
            positive.add(leaf.result.name)
    missing = head_vars - positive
    if missing:
        raise UnsafeRuleError(
            f"head variable(s) {', '.join(sorted(missing))} of "
            f"{rule.head} not bound by any positive body literal")


def _classify_policy(rule: Rule) -> PolicyRule:
    head = rule.head
    if head.name == "securityRequirements" and head.arity == 2:
        service = _const_name(head.args[0], "securityRequirements service")
        node = head.args[1]
        if not isinstance(node, Var):
            raise ValidationError(
                f"securityRequirements node argument must be a variable, got {node}")
        return PolicyRule(head.name, service, node.name, rule.body)
    if head.arity == 1 and isinstance(head.args[0], Var):
        return PolicyRule(head.name, None, head.args[0].name, rule.body)
    raise ValidationError(
        f"unsupported rule head {head}: expected policy(N) or "
        f"securityRequirements(service, N)")


def _policy_body_ok(policy: PolicyRule):
    """Policy bodies may only reference the head's node variable."""
    for leaf in _body_literals(policy.body):
        if isinstance(leaf, (Compare, IsMinus)):
            raise ValidationError(
                f"arithmetic is not allowed in policy {policy.head_name}")
        extra = term_variables(leaf.atom) - {policy.node_var, "_"}
        if extra:
            raise ValidationError(
                f"policy {policy.head_name} uses unbound variable(s) "
                f"{', '.join(sorted(extra))}")
        for arg in leaf.atom.args:
            if isinstance(arg, ListTerm):
                raise ValidationError(
                    f"lists may not appear in policy {policy.head_name}")


def _check_acyclic(policies):
    deps: dict[str, set[str]] = {}
    heads = {p.head_name for p in policies}
    for p in policies:
        edges = deps.setdefault(p.head_name, set())
        for leaf in _body_literals(p.body):
            if isinstance(leaf, Lit) and leaf.atom.name in heads:
                edges.add(leaf.atom.name)

    visiting: set[str] = set()
    done: set[str] = set()

    def visit(name: str, path):
        if name in done:
            return
        if name in visiting:
            cycle = " -> ".join(path + [name])
            raise RecursivePolicyError(f"recursive policy: {cycle}")
        visiting.add(name)
        for dep in sorted(deps.get(name, ())):
            visit(dep, path + [name])
        visiting.discard(name)
        done.add(name)

    for name in sorted(deps):
        visit(name, [])


def build_kb(programs, semiring: SemiringId = PROBABILITY) -> KnowledgeBase:
    """Merge parsed programs into a validated knowledge base.

    Accepts a single :class:`Program` or an iterable of them; merging is
    associative and insensitive to statement order.
    """
    if isinstance(programs, Program):
        programs = [programs]

    nodes: dict[str, str] = {}
    capabilities: dict[tuple[str, str], object] = {}
    apps: dict[str, tuple] = {}
    policies: list[PolicyRule] = []
    edges: dict[tuple[str, str], object] = {}
    direct_flags: set[tuple[str, str]] = set()
    queries: list[Struct] = []

    def put(store, key, label, what):
        if key in store and store[key] != label:
            raise DuplicateLabelError(
                f"conflicting labels for {what}: {store[key]} vs {label}")
        store[key] = label

    for program in programs:
        for stmt in program:
            if isinstance(stmt, Query):
                queries.append(stmt.atom)
                continue
            if isinstance(stmt, Rule):
                if stmt.head.name in _ENGINE_PREDICATES \
                        or _mentions_engine_predicate(stmt.body):
                    continue  # built-in machinery re-stated in the input
                _check_range_restriction(stmt)
                policy = _classify_policy(stmt)
                _policy_body_ok(policy)
                policies.append(policy)
                continue

            atom, label = stmt.atom, stmt.label
            if not label_in_carrier(label, semiring):
                raise LabelRangeError(
                    f"label {label}{atom} outside the {semiring.name} carrier")
            if atom.name == "node" and atom.arity == 2:
                if not isinstance(label, Certain):
                    raise ValidationError(f"node declaration {atom} cannot be annotated")
                node = _const_name(atom.args[0], "node id")
                operator = _const_name(atom.args[1], "node operator")
                put(nodes, node, operator, f"node {node}")
            elif atom.name == "app" and atom.arity == 2:
                if not isinstance(label, Certain):
                    raise ValidationError(f"app declaration {atom} cannot be annotated")
                app = _const_name(atom.args[0], "app id")
                services_term = atom.args[1]
                if not isinstance(services_term, ListTerm) or services_term.tail is not None:
                    raise ValidationError(f"app {app} must list its services")
                services = tuple(_const_name(s, "service id") for s in services_term.items)
                if not services:
                    raise ValidationError(f"app {app} has no services")
                if len(set(services)) != len(services):
                    raise ValidationError(f"app {app} lists a service twice")
                put(apps, app, services, f"app {app}")
            elif atom.name in ("trusts", "directly_trusts") and atom.arity == 2:
                src = _const_name(atom.args[0], "trust source")
                dst = _const_name(atom.args[1], "trust target")
                put(edges, (src, dst), label, f"trust edge {src}->{dst}")
            elif atom.name == "dir" and atom.arity == 2:
                if not isinstance(label, Certain):
                    raise ValidationError(f"dir flag {atom} cannot be annotated")
                direct_flags.add((_const_name(atom.args[0], "operator"),
                                  _const_name(atom.args[1], "operator")))
            elif atom.arity == 1:
                node = _const_name(atom.args[0], f"node in {atom}")
                put(capabilities, (atom.name, node), label, str(atom))
            else:
                raise ValidationError(f"unrecognised fact {atom}")

    for (capability, node) in capabilities:
        if node not in nodes:
            raise UnknownNodeError(
                f"capability {capability}({node}) declared for unknown node {node}")

    _check_acyclic(policies)

    # Clause order has no meaning (alternatives are OR-ed); canonicalise it
    # so that two programs differing only in statement order build the same KB.
    policies.sort(key=lambda p: (p.head_name, p.service or "", str(p.body)))
    queries.sort(key=str)

    operators = frozenset(op for edge in edges for op in edge)
    return KnowledgeBase(
        nodes=nodes,
        capabilities=capabilities,
        apps=apps,
        policies=tuple(policies),
        trust=TrustNetwork(edges=edges, operators=operators),
        direct_flags=frozenset(direct_flags),
        queries=tuple(queries),
        semiring=semiring,
    )


def lint_vocabulary(kb: KnowledgeBase) -> list[LintWarning]:
    """Warn about capability names outside the shared vocabulary.

    The vocabulary is open: unknown names are legal, but flagging them
    catches typos like ``firewal``.  One warning per unknown name.
    """
    by_name: dict[str, list[str]] = {}
    for (capability, node) in kb.capabilities:
        if capability not in CAPABILITY_VOCABULARY:
            by_name.setdefault(capability, []).append(node)
    warnings = []
    for capability in sorted(by_name):
        nodes = tuple(sorted(by_name[capability]))
        warnings.append(LintWarning(
            capability, nodes,
            f"capability {capability!r} (declared for {', '.join(nodes)}) "
            f"is not in the shared vocabulary"))
    return warnings
