"""Trust queries over the stakeholder network.

The trust degree between two operators is the probability that at least one
chain of declared opinions connects them when every edge is present
independently with its declared weight — the two-terminal reliability of
the trust network.  A query compiles to an OR over all simple directed
paths, each path an AND of its edge atoms; shared edges are interned once,
so the count is exact even when paths overlap.

Three query modes:

* transitive — the default closure over all simple paths;
* radius(d)  — only paths of at most ``d`` edges propagate opinions
  (``d`` counts edges, not operators);
* direct-preferred — for pairs flagged ``dir(A, B)`` with a declared direct
  edge, only that edge counts; all other pairs fall back to the closure.
  The flag is plain (Certain) data, so this is a deterministic case split,
  never a probabilistic negation.

Everyone fully trusts themselves: a self-query is constant true and
contributes no atoms.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .dsl import Const, Struct
from .formula import TRUE, Atom, AtomTable, GroundFormula, make_and, make_or
from .model import KnowledgeBase
from .semiring import (
    ProbValue, SemiringId, enumerate_proofs, evaluate_proofs,
    formula_labels, one,
)
from .wmc import formula_probability

__all__ = [
    "Transitive", "DirectPreferred", "Radius",
    "TRANSITIVE", "DIRECT_PREFERRED",
    "UnknownOperatorError", "TooManyPathsError",
    "trust_paths", "trust_formula", "trust_degree", "trust_value",
    "parse_trust_mode", "default_path_limit",
]

DEFAULT_PATH_LIMIT = 10 ** 6
PATH_LIMIT_ENV = "SECASSESS_MAX_PATHS"


@dataclass(frozen=True)
class Transitive:
    def __str__(self):
        return "transitive"


@dataclass(frozen=True)
class DirectPreferred:
    def __str__(self):
        return "direct-preferred"


@dataclass(frozen=True)
class Radius:
    depth: int

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError(f"radius must be at least 1, got {self.depth}")

    def __str__(self):
        return f"radius:{self.depth}"


TRANSITIVE = Transitive()
DIRECT_PREFERRED = DirectPreferred()


def parse_trust_mode(text: str):
    """Parse a mode name: ``transitive``, ``direct-preferred``, ``radius:<d>``."""
    if text == "transitive":
        return TRANSITIVE
    if text == "direct-preferred":
        return DIRECT_PREFERRED
    if text.startswith("radius:"):
        try:
            return Radius(int(text.split(":", 1)[1]))
        except ValueError:
            raise ValueError(f"bad radius in trust mode {text!r}") from None
    raise ValueError(f"unknown trust mode {text!r}")


def default_path_limit() -> int:
    """Path cap, overridable through the SECASSESS_MAX_PATHS variable."""
    raw = os.environ.get(PATH_LIMIT_ENV)
    if raw is None:
        return DEFAULT_PATH_LIMIT
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{PATH_LIMIT_ENV}={raw!r} is not an integer") from None


class UnknownOperatorError(Exception):
    """A trust query names an operator absent from the network."""


class TooManyPathsError(Exception):
    """Path enumeration exceeded the configured cap."""


def trust_paths(kb: KnowledgeBase, source: str, target: str,
                max_edges: int | None = None,
                path_limit: int | None = None) -> list:
    """All simple directed paths source -> target, as edge tuples.

    Deterministic: successors are explored in sorted order.  Raises once
    more than ``path_limit`` paths exist.
    """
    if path_limit is None:
        path_limit = default_path_limit()
    successors: dict[str, list[str]] = {}
    for (a, b) in kb.trust.edges:
        successors.setdefault(a, []).append(b)
    for outs in successors.values():
        outs.sort()

    paths: list[tuple] = []

    def dfs(current: str, visited: set, prefix: list):
        for nxt in successors.get(current, ()):
            if nxt == target:
                if len(paths) >= path_limit:
                    raise TooManyPathsError(
                        f"more than {path_limit} trust paths "
                        f"{source} -> {target}; raise {PATH_LIMIT_ENV} if intended")
                paths.append(tuple(prefix + [(current, nxt)]))
            elif nxt not in visited:
                if max_edges is not None and len(prefix) + 1 >= max_edges:
                    continue
                visited.add(nxt)
                prefix.append((current, nxt))
                dfs(nxt, visited, prefix)
                prefix.pop()
                visited.discard(nxt)

    if max_edges is None or max_edges >= 1:
        dfs(source, {source}, [])
    return paths


def _edge_atom(kb: KnowledgeBase, table: AtomTable, edge) -> Atom:
    a, b = edge
    label = kb.trust.edges[edge]
    return Atom(table.intern(Struct("trusts", (Const(a), Const(b))), label))


def trust_formula(kb: KnowledgeBase, source: str, target: str,
                  mode=TRANSITIVE, table: AtomTable | None = None,
                  path_limit: int | None = None) -> GroundFormula:
    """Ground formula for "source can establish a trust chain to target"."""
    if table is None:
        table = AtomTable()
    if source == target:
        return GroundFormula(TRUE, table)
    known = kb.trust.operators
    missing = [op for op in (source, target) if op not in known]
    if missing:
        raise UnknownOperatorError(
            f"operator(s) not in the trust network: {', '.join(missing)}")

    if isinstance(mode, DirectPreferred) and (source, target) in kb.direct_flags \
            and (source, target) in kb.trust.edges:
        return GroundFormula(_edge_atom(kb, table, (source, target)), table)

    max_edges = mode.depth if isinstance(mode, Radius) else None
    paths = trust_paths(kb, source, target, max_edges=max_edges,
                        path_limit=path_limit)
    root = make_or(
        make_and(_edge_atom(kb, table, edge) for edge in path)
        for path in paths
    )
    return GroundFormula(root, table)


def trust_degree(kb: KnowledgeBase, source: str, target: str,
                 mode=TRANSITIVE, path_limit: int | None = None) -> float:
    """Probability that a trust chain from source to target exists."""
    formula = trust_formula(kb, source, target, mode=mode, path_limit=path_limit)
    return formula_probability(formula)


def trust_value(kb: KnowledgeBase, source: str, target: str,
                mode=TRANSITIVE, semiring: SemiringId | None = None,
                path_limit: int | None = None):
    """Trust as a semiring value; the algebraic counterpart of trust_degree."""
    if semiring is None:
        semiring = kb.semiring
    if semiring.name == "prob":
        return ProbValue(trust_degree(kb, source, target, mode=mode,
                                      path_limit=path_limit))
    if source == target:
        return one(semiring)
    formula = trust_formula(kb, source, target, mode=mode, path_limit=path_limit)
    return evaluate_proofs(semiring, enumerate_proofs(formula),
                           formula_labels(formula, semiring))
