"""Propositional AND-OR formulas over weighted ground atoms.

Every inference path in the package consumes this representation: a tree of
``And`` / ``Or`` / ``Not`` nodes over interned atoms, plus an
:class:`AtomTable` mapping atom ids back to the ground atom and its label.
Interning makes sharing explicit — the same ground atom always receives the
same id within one query, which is what makes joint formulas over several
services multiply out correctly.

The smart constructors flatten nested connectives, drop neutral constants
and short-circuit absorbing ones, so a built formula contains ``TRUE`` /
``FALSE`` only when it *is* one of them.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "TRUE", "FALSE", "Atom", "Not", "And", "Or",
    "AtomTable", "GroundFormula",
    "make_and", "make_or", "make_not", "atoms_in",
]


@dataclass(frozen=True)
class _TrueNode:
    def __str__(self):
        return "true"


@dataclass(frozen=True)
class _FalseNode:
    def __str__(self):
        return "false"


TRUE = _TrueNode()
FALSE = _FalseNode()


@dataclass(frozen=True)
class Atom:
    """Reference to an interned ground atom."""
    atom_id: int

    def __str__(self):
        return f"a{self.atom_id}"


@dataclass(frozen=True)
class Not:
    child: object

    def __str__(self):
        return f"not({self.child})"


@dataclass(frozen=True)
class And:
    children: tuple

    def __str__(self):
        return f"and({','.join(str(c) for c in self.children)})"


@dataclass(frozen=True)
class Or:
    children: tuple

    def __str__(self):
        return f"or({','.join(str(c) for c in self.children)})"


def make_and(children):
    """Conjunction with flattening and constant simplification."""
    flat = []
    for child in children:
        if child is FALSE:
            return FALSE
        if child is TRUE:
            continue
        if isinstance(child, And):
            flat.extend(child.children)
        else:
            flat.append(child)
    unique = list(dict.fromkeys(flat))
    if not unique:
        return TRUE
    if len(unique) == 1:
        return unique[0]
    return And(tuple(unique))


def make_or(children):
    """Disjunction with flattening and constant simplification."""
    flat = []
    for child in children:
        if child is TRUE:
            return TRUE
        if child is FALSE:
            continue
        if isinstance(child, Or):
            flat.extend(child.children)
        else:
            flat.append(child)
    unique = list(dict.fromkeys(flat))
    if not unique:
        return FALSE
    if len(unique) == 1:
        return unique[0]
    return Or(tuple(unique))


def make_not(child):
    if child is TRUE:
        return FALSE
    if child is FALSE:
        return TRUE
    if isinstance(child, Not):
        return child.child
    return Not(child)


def atoms_in(node) -> set[int]:
    """Ids of all atoms referenced by a formula node."""
    if isinstance(node, Atom):
        return {node.atom_id}
    if isinstance(node, Not):
        return atoms_in(node.child)
    if isinstance(node, (And, Or)):
        out: set[int] = set()
        for child in node.children:
            out |= atoms_in(child)
        return out
    return set()


class AtomTable:
    """Interning table: ground atom -> small integer id, with its label.

    Ids are assigned in first-intern order, which doubles as the default
    variable order for compilation.
    """

    def __init__(self):
        self._ids: dict = {}
        self._atoms: list = []
        self._labels: list = []

    def intern(self, atom, label) -> int:
        atom_id = self._ids.get(atom)
        if atom_id is None:
            atom_id = len(self._atoms)
            self._ids[atom] = atom_id
            self._atoms.append(atom)
            self._labels.append(label)
        elif self._labels[atom_id] != label:
            raise ValueError(f"atom {atom} interned twice with different labels")
        return atom_id

    def atom(self, atom_id: int):
        return self._atoms[atom_id]

    def label(self, atom_id: int):
        return self._labels[atom_id]

    def __len__(self) -> int:
        return len(self._atoms)

    def items(self):
        for atom_id, atom in enumerate(self._atoms):
            yield atom_id, atom, self._labels[atom_id]


@dataclass(frozen=True)
class GroundFormula:
    """A formula root together with the atom table its ids refer to."""
    root: object
    table: AtomTable

    def is_true(self) -> bool:
        return self.root is TRUE

    def is_false(self) -> bool:
        return self.root is FALSE

    def atom_ids(self) -> list[int]:
        return sorted(atoms_in(self.root))
