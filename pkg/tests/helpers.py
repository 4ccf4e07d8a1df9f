"""Shared generators for randomised tests."""

from secassess.dsl import Prob, Struct
from secassess.formula import Atom, AtomTable, GroundFormula, make_and, make_or, make_not


def random_formula(rng, max_atoms=12, max_depth=6, allow_negation=False):
    """A random ground formula with fresh probability-labelled atoms."""
    n_atoms = rng.randint(1, max_atoms)
    table = AtomTable()
    ids = [table.intern(Struct(f"v{i}", ()), Prob(rng.random()))
           for i in range(n_atoms)]

    def node(depth):
        if depth <= 0 or rng.random() < 0.3:
            leaf = Atom(rng.choice(ids))
            if allow_negation and rng.random() < 0.2:
                return make_not(leaf)
            return leaf
        children = [node(depth - 1) for _ in range(rng.randint(2, 3))]
        built = make_and(children) if rng.random() < 0.5 else make_or(children)
        if allow_negation and rng.random() < 0.1:
            return make_not(built)
        return built

    return GroundFormula(node(rng.randint(1, max_depth)), table)
