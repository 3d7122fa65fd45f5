"""Exact arithmetic over the places of Q, local Weil values, subgeneral
position checks, and the combination construction that trades l-subgeneral
families for general-position ones, plus a deterministic experiment harness
for the associated height inequalities."""

from .errors import (
    ArgumentError,
    ConfigRejectedError,
    DomainError,
    InfeasibleAvoidanceError,
    PositionError,
    SubgeneralError,
    SupportError,
    UnsupportedSubschemeError,
)
from .experiments import (
    Candidate,
    ChainCheckRecord,
    DefectReport,
    ExperimentConfig,
    SampleResult,
    candidate_targets,
    chain_check,
    delta_budget,
    exceptional_scan,
    run_evertse_ferretti_baseline,
    run_main_experiment,
    sample_points,
    weighted_defect,
)
from .places import (
    INF,
    LogNorm,
    Place,
    ProductFormulaLedger,
    factor_int,
    log_norm,
    parse_place,
    product_formula_residual,
    ulp_distance,
    valuation,
)
from .position import (
    PositionReport,
    Witness,
    check_general,
    check_subgeneral,
    intersection_dim,
    violations_at,
)
from .projective import (
    HomForm,
    LinearForm,
    LinearSubvariety,
    ProjPoint,
    VeroneseLinearization,
    monomials,
    projective_space,
    veronese_form,
    veronese_point,
)
from .quang import (
    CombinationCertificate,
    Ordering,
    avoid_subspaces,
    chain_constant,
    quang_combine,
    reorder_by_local_norm,
)
from .seshadri import SeshadriValue, seshadri_constant
from .weil import (
    SubschemeSpec,
    WeilValue,
    height,
    height_exact,
    height_scaled,
    is_on_support,
    local_weil,
    proximity_sum,
    target_from_json,
    target_to_json,
    weil_batch,
    weil_divisor,
    weil_hyperplane,
    weil_subscheme,
)

__version__ = "0.1.0"

__all__ = [
    "ArgumentError",
    "Candidate",
    "ChainCheckRecord",
    "CombinationCertificate",
    "ConfigRejectedError",
    "DefectReport",
    "DomainError",
    "ExperimentConfig",
    "HomForm",
    "INF",
    "InfeasibleAvoidanceError",
    "LinearForm",
    "LinearSubvariety",
    "LogNorm",
    "Ordering",
    "Place",
    "PositionError",
    "PositionReport",
    "ProductFormulaLedger",
    "ProjPoint",
    "SampleResult",
    "SeshadriValue",
    "SubgeneralError",
    "SubschemeSpec",
    "SupportError",
    "UnsupportedSubschemeError",
    "VeroneseLinearization",
    "WeilValue",
    "Witness",
    "avoid_subspaces",
    "candidate_targets",
    "chain_check",
    "chain_constant",
    "check_general",
    "check_subgeneral",
    "delta_budget",
    "exceptional_scan",
    "factor_int",
    "height",
    "height_exact",
    "height_scaled",
    "intersection_dim",
    "is_on_support",
    "local_weil",
    "log_norm",
    "monomials",
    "parse_place",
    "product_formula_residual",
    "projective_space",
    "proximity_sum",
    "quang_combine",
    "reorder_by_local_norm",
    "run_evertse_ferretti_baseline",
    "run_main_experiment",
    "sample_points",
    "seshadri_constant",
    "target_from_json",
    "target_to_json",
    "ulp_distance",
    "valuation",
    "veronese_form",
    "veronese_point",
    "violations_at",
    "weighted_defect",
    "weil_batch",
    "weil_divisor",
    "weil_hyperplane",
    "weil_subscheme",
]
