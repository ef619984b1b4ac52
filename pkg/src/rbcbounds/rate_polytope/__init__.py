"""Symbolic inequality systems, Fourier-Motzkin elimination, and rate-region
geometry (numeric polytopes, vertex enumeration, point clouds)."""
from .cloud import (PARETO_TOL, RateTriple, RegionCloud, cloud_dominates,
                    minkowski_sum, pareto_filter)
from .numeric import (AtomRelation, NumericPolytope, equivalent_under,
                      instantiate, load_relations, save_relations,
                      vertex_sets_match, vertices)
from .symbolic import (Inequality, SymbolicIneqSystem, fme_eliminate,
                       load_system, save_system, substitute)
from . import systems

__all__ = [
    "AtomRelation", "Inequality", "NumericPolytope", "PARETO_TOL",
    "RateTriple", "RegionCloud", "cloud_dominates", "equivalent_under",
    "fme_eliminate", "instantiate", "load_relations", "load_system",
    "minkowski_sum", "pareto_filter", "save_relations", "save_system",
    "substitute", "systems", "vertex_sets_match", "vertices",
]
