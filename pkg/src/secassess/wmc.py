"""Exact weighted model counting over ground formulas.

Formulas are compiled to reduced ordered binary decision diagrams and the
query probability is read off with one bottom-up pass:

    P(false) = 0,  P(true) = 1,
    P(node)  = (1 - p) * P(low) + p * P(high)

which sums, over all satisfying truth assignments, the product of per-atom
weights.  Instances here are desk-scale (tens of atoms), so a plain BDD
with first-appearance variable ordering is exact, deterministic and fast;
no dynamic reordering is attempted.

``enumerate_probability`` is the independent oracle: a brute-force sum over
all 2^n assignments, kept deliberately separate from the diagram path.
"""

from __future__ import annotations

from .dsl import Certain, Pair, Prob
from .formula import (
    FALSE, TRUE, And, Atom, GroundFormula, Not, Or, atoms_in,
)

__all__ = [
    "DecisionDiagram", "UnsupportedLabelError", "SizeLimitError",
    "TooManyAtomsError", "label_weight", "formula_weights",
    "compile_formula", "probability", "formula_probability",
    "enumerate_probability",
]

DEFAULT_NODE_LIMIT = 10 ** 7
ENUMERATION_LIMIT = 25


class UnsupportedLabelError(Exception):
    """A non-probability label reached the probability pipeline."""


class SizeLimitError(Exception):
    """Diagram grew past the configured node limit."""


class TooManyAtomsError(Exception):
    """Brute-force enumeration is capped at ENUMERATION_LIMIT atoms."""


def label_weight(label) -> float:
    if isinstance(label, Certain):
        return 1.0
    if isinstance(label, Prob):
        return label.p
    if isinstance(label, Pair):
        raise UnsupportedLabelError(
            f"pair label ({label.t!r},{label.c!r}) has no probability reading")
    raise UnsupportedLabelError(f"unknown label {label!r}")


def formula_weights(formula: GroundFormula) -> dict:
    """Probability weight per atom id, from the formula's own labels."""
    return {atom_id: label_weight(label)
            for atom_id, _atom, label in formula.table.items()}


class DecisionDiagram:
    """A reduced ordered BDD over atom ids.

    Terminals are node ids 0 (false) and 1 (true); decision nodes are
    (level, low, high) triples interned in a unique table, so equivalent
    functions share one canonical root.
    """

    def __init__(self, order, node_limit: int = DEFAULT_NODE_LIMIT):
        self.order = list(order)
        self._level_of = {atom_id: lvl for lvl, atom_id in enumerate(self.order)}
        self._nodes: list = [None, None]  # ids 0/1 are the terminals
        self._unique: dict = {}
        self._cache: dict = {}
        self._limit = node_limit
        self.root = 0

    # -- construction -------------------------------------------------------

    def _mk(self, level: int, low: int, high: int) -> int:
        if low == high:
            return low
        key = (level, low, high)
        node = self._unique.get(key)
        if node is None:
            if len(self._nodes) >= self._limit + 2:
                raise SizeLimitError(
                    f"decision diagram exceeded {self._limit} nodes")
            node = len(self._nodes)
            self._nodes.append(key)
            self._unique[key] = node
        return node

    def _var(self, atom_id: int) -> int:
        return self._mk(self._level_of[atom_id], 0, 1)

    def _level(self, u: int) -> int:
        if u < 2:
            return len(self.order)  # terminals sit below every variable
        return self._nodes[u][0]

    def _apply(self, op: str, u: int, v: int) -> int:
        if op == "and":
            if u == 0 or v == 0:
                return 0
            if u == 1:
                return v
            if v == 1:
                return u
        else:
            if u == 1 or v == 1:
                return 1
            if u == 0:
                return v
            if v == 0:
                return u
        if u == v:
            return u
        if u > v:
            u, v = v, u
        key = (op, u, v)
        out = self._cache.get(key)
        if out is not None:
            return out
        lu, lv = self._level(u), self._level(v)
        level = min(lu, lv)
        u_low, u_high = (self._nodes[u][1], self._nodes[u][2]) if lu == level else (u, u)
        v_low, v_high = (self._nodes[v][1], self._nodes[v][2]) if lv == level else (v, v)
        out = self._mk(level,
                       self._apply(op, u_low, v_low),
                       self._apply(op, u_high, v_high))
        self._cache[key] = out
        return out

    def _negate(self, u: int) -> int:
        if u < 2:
            return 1 - u
        key = ("not", u)
        out = self._cache.get(key)
        if out is None:
            level, low, high = self._nodes[u]
            out = self._mk(level, self._negate(low), self._negate(high))
            self._cache[key] = out
        return out

    def _build(self, node, memo: dict) -> int:
        out = memo.get(node)
        if out is not None:
            return out
        if node is TRUE:
            out = 1
        elif node is FALSE:
            out = 0
        elif isinstance(node, Atom):
            out = self._var(node.atom_id)
        elif isinstance(node, Not):
            out = self._negate(self._build(node.child, memo))
        elif isinstance(node, And):
            out = 1
            for child in node.children:
                out = self._apply("and", out, self._build(child, memo))
        elif isinstance(node, Or):
            out = 0
            for child in node.children:
                out = self._apply("or", out, self._build(child, memo))
        else:
            raise TypeError(f"not a formula node: {node!r}")
        memo[node] = out
        return out

    # -- inspection ----------------------------------------------------------

    def node_count(self) -> int:
        """Decision nodes reachable from the root."""
        seen: set[int] = set()
        stack = [self.root]
        while stack:
            u = stack.pop()
            if u < 2 or u in seen:
                continue
            seen.add(u)
            _level, low, high = self._nodes[u]
            stack.append(low)
            stack.append(high)
        return len(seen)

    def atom_at_level(self, level: int) -> int:
        return self.order[level]

    def children(self, u: int):
        """(level, low, high) of a decision node."""
        return self._nodes[u]

    def paths_to_true(self):
        """Yield root-to-true paths as tuples of (atom_id, branch) decisions."""
        def walk(u, prefix):
            if u == 1:
                yield tuple(prefix)
                return
            if u == 0:
                return
            level, low, high = self._nodes[u]
            atom_id = self.order[level]
            yield from walk(low, prefix + [(atom_id, False)])
            yield from walk(high, prefix + [(atom_id, True)])
        yield from walk(self.root, [])


def _first_appearance(node, seen: list, marked: set):
    if isinstance(node, Atom):
        if node.atom_id not in marked:
            marked.add(node.atom_id)
            seen.append(node.atom_id)
    elif isinstance(node, Not):
        _first_appearance(node.child, seen, marked)
    elif isinstance(node, (And, Or)):
        for child in node.children:
            _first_appearance(child, seen, marked)


def compile_formula(formula: GroundFormula, order=None,
                    node_limit: int = DEFAULT_NODE_LIMIT) -> DecisionDiagram:
    """Compile a formula into a canonical decision diagram.

    The variable order defaults to first-appearance order in the formula
    and may be overridden (it must cover every atom used).  Every atom must
    carry a probability-compatible label.
    """
    for atom_id in sorted(atoms_in(formula.root)):
        label_weight(formula.table.label(atom_id))  # reject pair labels early
    if order is None:
        seen: list = []
        _first_appearance(formula.root, seen, set())
        order = seen
    else:
        missing = atoms_in(formula.root) - set(order)
        if missing:
            raise ValueError(f"ordering misses atom ids {sorted(missing)}")
    dd = DecisionDiagram(order, node_limit=node_limit)
    dd.root = dd._build(formula.root, {})
    return dd


def probability(dd: DecisionDiagram, weights) -> float:
    """Weighted count of the diagram's satisfying assignments."""
    memo = {0: 0.0, 1: 1.0}

    def walk(u: int) -> float:
        out = memo.get(u)
        if out is None:
            level, low, high = dd.children(u)
            p = weights[dd.atom_at_level(level)]
            out = (1.0 - p) * walk(low) + p * walk(high)
            memo[u] = out
        return out

    return walk(dd.root)


def formula_probability(formula: GroundFormula, weights=None) -> float:
    """Compile-and-count convenience for one-shot queries."""
    if weights is None:
        weights = formula_weights(formula)
    return probability(compile_formula(formula), weights)


def _atom_pattern(position: int, n_atoms: int) -> int:
    """Truth-table bitmask of atom #position over all 2^n assignments."""
    half = 1 << position
    block = ((1 << half) - 1) << half  # `half` zeros then `half` ones
    size = 2 * half
    while size < (1 << n_atoms):
        block |= block << size
        size *= 2
    return block


def enumerate_probability(formula: GroundFormula, weights=None) -> float:
    """Brute-force oracle: sum the weight of every satisfying assignment.

    Independent of the diagram path on purpose — a truth table over all
    2^n assignments, then a straight enumeration with prefix weight
    products.  Limited to ENUMERATION_LIMIT atoms.
    """
    root = formula.root
    atoms = sorted(atoms_in(root))
    n = len(atoms)
    if n > ENUMERATION_LIMIT:
        raise TooManyAtomsError(f"{n} atoms exceed the 2^{ENUMERATION_LIMIT} cap")
    if weights is None:
        weights = formula_weights(formula)
    position = {atom_id: i for i, atom_id in enumerate(atoms)}
    full = (1 << (1 << n)) - 1

    def truth(node) -> int:
        if node is TRUE:
            return full
        if node is FALSE:
            return 0
        if isinstance(node, Atom):
            return _atom_pattern(position[node.atom_id], n)
        if isinstance(node, Not):
            return full ^ truth(node.child)
        if isinstance(node, And):
            out = full
            for child in node.children:
                out &= truth(child)
            return out
        if isinstance(node, Or):
            out = 0
            for child in node.children:
                out |= truth(child)
            return out
        raise TypeError(f"not a formula node: {node!r}")

    table = truth(root)

    def total(i: int, index: int, weight: float) -> float:
        if i == n:
            return weight if (table >> index) & 1 else 0.0
        p = weights[atoms[i]]
        return (total(i + 1, index, weight * (1.0 - p))
                + total(i + 1, index | (1 << i), weight * p))

    return total(0, 0, 1.0)
