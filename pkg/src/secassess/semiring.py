"""Semiring values and the algebraic query-evaluation path.

Four evaluation algebras are available:

* ``prob`` — the probability semiring ([0,1], +, x).  Final answers under
  this semiring come from weighted model counting (see :mod:`.wmc`), not
  from pairwise ``oplus``; the pairwise form is still exposed here because
  proof-contribution listings use it.
* ``tc-max`` / ``tc-min`` — trust-confidence pairs <t, c> with t, c in
  [0, 1].  ``otimes`` multiplies componentwise; ``oplus`` keeps the operand
  with the higher confidence, breaking exact ties by max (or min) trust.
* ``star`` — signed trust t in [-1, 1] with confidence c in [0, 1].
  Two consecutive distrust opinions multiply to an indifferent (zero) trust,
  which is what stops distrust from propagating transitively.  On an exact
  confidence tie the combine is ``<sign(t+t') * max(t, t'), c>``; for
  mixed-sign operands this rule is implemented verbatim even though it can
  behave non-associatively at ties — callers who need the laws should keep
  confidences distinct.

Algebraic queries are answered proof-by-proof: ``enumerate_proofs`` lists
the minimal atom sets that satisfy a (negation-free) formula and
``evaluate_proofs`` folds them with ``oplus`` / ``otimes``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dsl import Certain, Pair, Prob
from .formula import FALSE, TRUE, And, Atom, GroundFormula, Not, Or

__all__ = [
    "SemiringId", "PROBABILITY", "TC_MAX", "TC_MIN", "STAR", "SEMIRINGS",
    "ProbValue", "PairValue",
    "CarrierMismatchError", "UnlabeledAtomError", "NegationInAlgebraicModeError",
    "zero", "one", "otimes", "oplus",
    "label_value", "label_in_carrier",
    "enumerate_proofs", "evaluate_proofs", "formula_labels",
]


@dataclass(frozen=True)
class SemiringId:
    """Identifies the active evaluation algebra."""
    name: str

    def is_algebraic(self) -> bool:
        return self.name != "prob"

    def __str__(self):
        return self.name


PROBABILITY = SemiringId("prob")
TC_MAX = SemiringId("tc-max")
TC_MIN = SemiringId("tc-min")
STAR = SemiringId("star")
SEMIRINGS = {s.name: s for s in (PROBABILITY, TC_MAX, TC_MIN, STAR)}


@dataclass(frozen=True)
class ProbValue:
    """A probability semiring element."""
    p: float

    def __str__(self):
        return f"{self.p:.10g}"


@dataclass(frozen=True)
class PairValue:
    """A <trust, confidence> element of the tc/star semirings."""
    t: float
    c: float

    def __str__(self):
        return f"<{self.t:.10g},{self.c:.10g}>"


class CarrierMismatchError(Exception):
    """Value (or label) does not belong to the active semiring's carrier."""


class UnlabeledAtomError(Exception):
    """A proof references an atom with no label."""


class NegationInAlgebraicModeError(Exception):
    """Algebraic evaluation is defined for negation-free formulas only."""


def zero(semiring: SemiringId):
    if semiring is PROBABILITY or semiring.name == "prob":
        return ProbValue(0.0)
    return PairValue(0.0, 0.0)


def one(semiring: SemiringId):
    if semiring is PROBABILITY or semiring.name == "prob":
        return ProbValue(1.0)
    return PairValue(1.0, 1.0)


def _check(semiring: SemiringId, value):
    if semiring.name == "prob":
        if not isinstance(value, ProbValue):
            raise CarrierMismatchError(f"{value} is not a probability value")
        if not 0.0 <= value.p <= 1.0:
            raise CarrierMismatchError(f"probability {value.p!r} outside [0, 1]")
    else:
        if not isinstance(value, PairValue):
            raise CarrierMismatchError(f"{value} is not a <t,c> pair")
        low_t = 0.0 if semiring.name.startswith("tc") else -1.0
        if not low_t <= value.t <= 1.0:
            raise CarrierMismatchError(
                f"trust {value.t!r} outside [{low_t:g}, 1] for {semiring}")
        if not 0.0 <= value.c <= 1.0:
            raise CarrierMismatchError(f"confidence {value.c!r} outside [0, 1]")


def _sign(x: float) -> float:
    return 1.0 if x >= 0 else -1.0


def otimes(semiring: SemiringId, a, b):
    """Combine along a proof (sequential composition)."""
    _check(semiring, a)
    _check(semiring, b)
    if semiring.name == "prob":
        return ProbValue(a.p * b.p)
    if semiring.name == "star" and a.t < 0 and b.t < 0:
        return PairValue(0.0, a.c * b.c)
    return PairValue(a.t * b.t, a.c * b.c)


def oplus(semiring: SemiringId, a, b):
    """Combine across proofs (alternative composition)."""
    _check(semiring, a)
    _check(semiring, b)
    if semiring.name == "prob":
        return ProbValue(a.p + b.p - a.p * b.p)
    if a.c > b.c:
        return a
    if b.c > a.c:
        return b
    if semiring.name == "tc-min":
        return PairValue(min(a.t, b.t), a.c)
    if semiring.name == "tc-max":
        return PairValue(max(a.t, b.t), a.c)
    return PairValue(_sign(a.t + b.t) * max(a.t, b.t), a.c)


# ---------------------------------------------------------------------------
# Labels
# ---------------------------------------------------------------------------

def label_value(label, semiring: SemiringId):
    """Interpret a declared label as an element of the active semiring.

    A plain (Certain) fact is the multiplicative unit in every semiring.
    """
    if isinstance(label, Certain):
        return one(semiring)
    if isinstance(label, Prob):
        if semiring.name != "prob":
            raise CarrierMismatchError(
                f"probability label {label.p!r} under the {semiring} semiring")
        return ProbValue(label.p)
    if isinstance(label, Pair):
        if semiring.name == "prob":
            raise CarrierMismatchError(
                f"pair label ({label.t!r},{label.c!r}) under the probability semiring")
        value = PairValue(label.t, label.c)
        _check(semiring, value)
        return value
    raise CarrierMismatchError(f"unknown label {label!r}")


def label_in_carrier(label, semiring: SemiringId) -> bool:
    try:
        label_value(label, semiring)
    except CarrierMismatchError:
        return False
    return True


# ---------------------------------------------------------------------------
# Proof enumeration and evaluation
# ---------------------------------------------------------------------------

def _minimize(proofs):
    """Drop any proof that is a strict superset of another (absorption)."""
    kept = []
    for proof in sorted(set(proofs), key=lambda s: (len(s), sorted(s))):
        if not any(other <= proof for other in kept):
            kept.append(proof)
    return kept


def _implicants(node):
    if node is TRUE:
        return [frozenset()]
    if node is FALSE:
        return []
    if isinstance(node, Atom):
        return [frozenset({node.atom_id})]
    if isinstance(node, Not):
        raise NegationInAlgebraicModeError(
            "algebraic proof enumeration requires a negation-free formula")
    if isinstance(node, Or):
        out = []
        for child in node.children:
            out.extend(_implicants(child))
        return _minimize(out)
    if isinstance(node, And):
        acc = [frozenset()]
        for child in node.children:
            acc = _minimize(a | b for a in acc for b in _implicants(child))
        return acc
    raise TypeError(f"not a formula node: {node!r}")


def enumerate_proofs(formula: GroundFormula) -> tuple:
    """All minimal atom sets whose truth satisfies the formula.

    For the monotone formulas produced by grounding these are exactly its
    prime implicants; each corresponds to one proof of the query.
    """
    root = formula.root if isinstance(formula, GroundFormula) else formula
    proofs = _implicants(root)
    return tuple(sorted(proofs, key=lambda s: (len(s), sorted(s))))


def evaluate_proofs(semiring: SemiringId, proofs, labels):
    """Fold proofs with the semiring: oplus over proofs, otimes within one.

    ``labels`` maps atom id -> semiring value.  An empty proof set yields
    ``zero``; an atom missing from ``labels`` raises.  Under the probability
    semiring this gives the proof-wise reading used by explanations, not the
    weighted-model-count answer.
    """
    total = zero(semiring)
    for proof in proofs:
        value = one(semiring)
        for atom_id in sorted(proof):
            if atom_id not in labels:
                raise UnlabeledAtomError(f"no label for atom id {atom_id}")
            value = otimes(semiring, value, labels[atom_id])
        total = oplus(semiring, total, value)
    return total


def formula_labels(formula: GroundFormula, semiring: SemiringId) -> dict:
    """Semiring values for every atom interned in the formula's table."""
    return {atom_id: label_value(label, semiring)
            for atom_id, _atom, label in formula.table.items()}
