"""Quantitative security assessment of multi-service cloud-edge deployments.

Infrastructure operators declare nodes and weighted security capabilities;
application operators declare services, requirement policies and trust
opinions — all in a small declarative language.  The library grounds each
candidate deployment into an AND-OR formula, counts it exactly, weights it
by trust reachability, and ranks the alternatives with machine-checkable
explanations.
"""

__version__ = "0.1.0"

from .assessor import (
    Assessment, Deployment, InconsistentPartialError, UnknownAppError,
    assess, deployment_formula, enumerate_deployments, rank,
)
from .dsl import ParseError, Program, parse_program, print_program
from .explain import DisjointProof, disjoint_proofs, export_ground_graph
from .formula import AtomTable, GroundFormula
from .grounder import (
    GroundingError, NoRequirementError, candidate_nodes, ground_requirement,
)
from .model import (
    KnowledgeBase, LintWarning, TrustNetwork, ValidationError, build_kb,
    lint_vocabulary,
)
from .semiring import (
    PROBABILITY, SEMIRINGS, STAR, TC_MAX, TC_MIN, PairValue, ProbValue,
    SemiringId, enumerate_proofs, evaluate_proofs, oplus, otimes,
)
from .trust import (
    DIRECT_PREFERRED, TRANSITIVE, Radius, TooManyPathsError,
    UnknownOperatorError, trust_degree, trust_formula, trust_paths,
    trust_value,
)
from .wmc import (
    DecisionDiagram, compile_formula, enumerate_probability,
    formula_probability, probability,
)

__all__ = [
    "__version__",
    # language
    "parse_program", "print_program", "Program", "ParseError",
    # model
    "build_kb", "lint_vocabulary", "KnowledgeBase", "TrustNetwork",
    "LintWarning", "ValidationError",
    # grounding
    "ground_requirement", "candidate_nodes", "GroundFormula", "AtomTable",
    "GroundingError", "NoRequirementError",
    # counting
    "compile_formula", "probability", "formula_probability",
    "enumerate_probability", "DecisionDiagram",
    # semirings
    "SemiringId", "SEMIRINGS", "PROBABILITY", "TC_MAX", "TC_MIN", "STAR",
    "ProbValue", "PairValue", "otimes", "oplus", "enumerate_proofs",
    "evaluate_proofs",
    # trust
    "trust_degree", "trust_formula", "trust_paths", "trust_value",
    "TRANSITIVE", "DIRECT_PREFERRED", "Radius", "UnknownOperatorError",
    "TooManyPathsError",
    # assessment
    "enumerate_deployments", "deployment_formula", "assess", "rank",
    "Deployment", "Assessment", "UnknownAppError", "InconsistentPartialError",
    # explanations
    "disjoint_proofs", "export_ground_graph", "DisjointProof",
]
