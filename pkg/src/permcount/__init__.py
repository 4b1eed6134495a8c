"""Exact per and hc over finite fields and the integers."""

from .field import GF, field_make, field_of_order
from .kakeya import KakeyaSet, curve_for_point
from .oracles import hc_dp, hc_oracle, per_oracle, per_ryser
from .pipeline import (
    PipelineParams, bootstrap_field, choose_primes, count, count_ff, count_int,
    estimate_cost, select_params,
)
from .reduction import reduce_instances
from .reveal import EvaluatorFamily, RevealParams, reveal_eval

__all__ = [
    "GF", "field_make", "field_of_order", "KakeyaSet", "curve_for_point",
    "hc_dp", "hc_oracle", "per_oracle", "per_ryser", "PipelineParams",
    "bootstrap_field", "choose_primes", "count", "count_ff", "count_int",
    "estimate_cost", "select_params", "reduce_instances", "EvaluatorFamily",
    "RevealParams", "reveal_eval",
]
