from ezytamp.codec import decode_label, encode_cost
from ezytamp.estimator.oracle import (
    AttributeBundle,
    LLMOracle,
    RuleOracle,
    SemanticOracle,
)
from ezytamp.estimator.overlap import OverlapParams, path_overlap
from ezytamp.estimator.scoring import (
    PlanEstimate,
    combine_nav_estimate,
    estimate_breakdown,
    estimate_man_cost,
    estimate_nav_cost,
    estimate_plan,
    plan_total,
    score_plan,
    select_best,
)
