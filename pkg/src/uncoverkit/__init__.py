"""Coverability analysis for graph transformation systems.

Backward search over well-quasi-orders represented by morphisms, with
subgraph and induced-subgraph order engines, single-pushout rewriting and a
bounded forward oracle.
"""

from .hypergraph import (
    Hypergraph,
    RestrictionSpec,
    Signature,
    canonical_key,
    in_restriction,
    isomorphic,
    longest_undirected_path,
    max_parallel_multiplicity,
    validate,
)
from .backward import (
    AnalysisProblem,
    BasisResult,
    Verdict,
    backward_step,
    decide_cover,
    prepare_rules,
    run,
)
from .forward import ExploreBounds, NotWithinBounds, Witness, coverable_bounded, successors
from .morphism import NAC, PartialMorphism, Rule, check_morphism, compose, enumerate_matches
from .order import (
    OrderKind,
    enumerate_order_morphisms,
    enumerate_smaller,
    find_order_embedding,
    leq,
    minimize,
    order_morphism_check,
    upward_member,
)
from .poc import (
    PocRequest,
    PocResult,
    brute_force_pushout_complements,
    minimal_pushout_complements,
)
from .pushout import apply_rule, pushout

__all__ = [
    "AnalysisProblem",
    "BasisResult",
    "Verdict",
    "backward_step",
    "decide_cover",
    "prepare_rules",
    "run",
    "ExploreBounds",
    "NotWithinBounds",
    "Witness",
    "coverable_bounded",
    "successors",
    "PocRequest",
    "PocResult",
    "brute_force_pushout_complements",
    "minimal_pushout_complements",
    "enumerate_order_morphisms",
    "find_order_embedding",
    "Hypergraph",
    "RestrictionSpec",
    "Signature",
    "canonical_key",
    "in_restriction",
    "isomorphic",
    "longest_undirected_path",
    "max_parallel_multiplicity",
    "validate",
    "NAC",
    "PartialMorphism",
    "Rule",
    "check_morphism",
    "compose",
    "enumerate_matches",
    "OrderKind",
    "enumerate_smaller",
    "leq",
    "minimize",
    "order_morphism_check",
    "upward_member",
    "apply_rule",
    "pushout",
]

__version__ = "0.1.0"
