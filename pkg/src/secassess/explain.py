"""Machine-checkable explanations for query results.

Two complementary views:

* ``export_ground_graph`` renders the AND-OR tree of a ground formula as a
  Graphviz digraph, leaves annotated with their weights — how a result is
  structured.
* ``disjoint_proofs`` lists mutually exclusive proofs with their
  probability contributions — why the number is what it is.  Proofs are
  the root-to-true paths of the compiled decision diagram; distinct paths
  disagree on at least one decision, so they are exclusive by construction
  and their contributions sum to the query probability.  Negative literals
  (facts that must be absent) render as ``¬atom``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dsl import Certain, Pair, Prob
from .formula import FALSE, TRUE, And, Atom, GroundFormula, Not, Or
from .wmc import compile_formula, formula_weights

__all__ = ["DisjointProof", "disjoint_proofs", "export_ground_graph",
           "format_literal"]


@dataclass(frozen=True)
class DisjointProof:
    """A signed partial assignment and the probability mass it carries."""
    literals: tuple          # ((atom_id, positive), ...) in decision order
    contribution: float


def disjoint_proofs(formula: GroundFormula, weights=None) -> list:
    """Mutually exclusive proofs of the formula, largest contribution first.

    Atoms skipped along a diagram path are marginalised out, so each
    contribution is the product of p (taken branch true) or 1-p (branch
    false) over decided atoms only.
    """
    if weights is None:
        weights = formula_weights(formula)
    dd = compile_formula(formula)
    proofs = []
    for path in dd.paths_to_true():
        contribution = 1.0
        for atom_id, positive in path:
            p = weights[atom_id]
            contribution *= p if positive else (1.0 - p)
        proofs.append(DisjointProof(tuple(path), contribution))
    proofs.sort(key=lambda pr: (-pr.contribution, pr.literals))
    return proofs


def format_literal(formula: GroundFormula, atom_id: int, positive: bool) -> str:
    atom = formula.table.atom(atom_id)
    return str(atom) if positive else f"¬{atom}"


def _weight_text(label) -> str:
    if isinstance(label, Certain):
        return ""
    if isinstance(label, Prob):
        text = f"{label.p:.6f}".rstrip("0").rstrip(".")
        return f": {text or '0'}"
    if isinstance(label, Pair):
        return f": ({label.t:g},{label.c:g})"
    return ""


def export_ground_graph(formula: GroundFormula) -> str:
    """DOT digraph of the formula's AND-OR structure.

    Node ids are assigned in depth-first preorder and leaves are shared per
    atom, so output is byte-identical for identical inputs.  Leaf labels
    truncate probabilities to six decimals; use the JSON proof listing for
    full precision.
    """
    lines = ["digraph ground_program {", "  rankdir=TB;"]
    decls: list[str] = []
    edges: list[str] = []
    leaf_ids: dict[int, str] = {}
    counter = 0

    def fresh() -> str:
        nonlocal counter
        name = f"n{counter}"
        counter += 1
        return name

    def visit(node) -> str:
        if isinstance(node, Atom):
            name = leaf_ids.get(node.atom_id)
            if name is None:
                name = fresh()
                leaf_ids[node.atom_id] = name
                atom = formula.table.atom(node.atom_id)
                label = formula.table.label(node.atom_id)
                decls.append(
                    f'  {name} [label="{atom}{_weight_text(label)}", shape=ellipse];')
            return name
        name = fresh()
        if node is TRUE or node is FALSE:
            decls.append(f'  {name} [label="{node}", shape=ellipse];')
            return name
        if isinstance(node, Not):
            decls.append(f'  {name} [label="NOT", shape=octagon];')
            edges.append(f"  {name} -> {visit(node.child)};")
            return name
        if isinstance(node, And):
            decls.append(f'  {name} [label="AND", shape=box];')
        elif isinstance(node, Or):
            decls.append(f'  {name} [label="OR", shape=diamond];')
        else:
            raise TypeError(f"not a formula node: {node!r}")
        for child in node.children:
            edges.append(f"  {name} -> {visit(child)};")
        return name

    visit(formula.root)
    lines.extend(decls)
    lines.extend(edges)
    lines.append("}")
    return "\n".join(lines) + "\n"
