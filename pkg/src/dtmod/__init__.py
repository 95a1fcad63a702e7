"""dtmod: weighted smoothness moduli on [-1, 1] with a claim harness.

Layers, bottom up: ``fnspace`` (function catalog, Jacobi weights,
partitions), ``quad`` (weighted p-norms), ``stieltjes`` (window integrals
for low-smoothness targets), ``moduli`` (the difference-operator engine and
its five variants), ``shape`` (k-monotonicity, coconvexity, spline
projection), ``approx`` (best constrained and unconstrained polynomial
approximation), ``harness`` (claim campaigns and CSV/JSON reports),
``cli`` (the ``dtmod`` executable).
"""

from ._version import __version__
from .config import RunConfig
from .errors import (ConfigError, DtmodError, HypothesisViolationError,
                     InadmissibleWeightError, InfeasibleConstraintError,
                     NonConvergenceError, SmoothnessError)
from .fnspace import (FunctionExpr, InflectionSet, JacobiWeight, PartitionSet,
                      catalog_lookup, chebyshev_partition, from_json,
                      make_jacobi_weight, mesh_norm, merge_partitions,
                      parse_inline, phi, uniform_partition)
from .quad import NormQuery, weighted_norm
from .stieltjes import LSQuery, ls_integral, iterated_ls_integral
from .moduli import ModulusQuery, evaluate_modulus, modulus_limit_scan
from .shape import (coconvexity_check, divided_difference, is_k_monotone,
                    spline_project)
from .approx import (JacksonReport, PolyCandidate, best_coconvex,
                     best_unconstrained, jackson_tail_check)
from .harness import (CLAIM_IDS, CampaignReport, CampaignSpec, campaign_config,
                      default_suite, emit_report, run_campaign)

__all__ = [
    "__version__", "RunConfig",
    "DtmodError", "ConfigError", "HypothesisViolationError",
    "InadmissibleWeightError", "SmoothnessError", "NonConvergenceError",
    "InfeasibleConstraintError",
    "FunctionExpr", "InflectionSet", "JacobiWeight", "PartitionSet",
    "catalog_lookup", "from_json", "parse_inline", "phi",
    "make_jacobi_weight", "chebyshev_partition", "uniform_partition",
    "merge_partitions", "mesh_norm",
    "NormQuery", "weighted_norm",
    "LSQuery", "ls_integral", "iterated_ls_integral",
    "ModulusQuery", "evaluate_modulus", "modulus_limit_scan",
    "divided_difference", "is_k_monotone", "coconvexity_check",
    "spline_project",
    "PolyCandidate", "JacksonReport", "best_unconstrained", "best_coconvex",
    "jackson_tail_check",
    "CLAIM_IDS", "CampaignSpec", "CampaignReport", "campaign_config",
    "default_suite", "run_campaign", "emit_report",
]
