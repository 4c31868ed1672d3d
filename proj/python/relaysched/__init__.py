"""Relay-aware downlink scheduling laboratory.

Thin wrapper over the C++ core: the PF stationary solver, the slot-level
Monte-Carlo oracle, the relay cell simulator and SINR maps.
"""

from ._core import (
    ConfigError,
    FlowClass,
    FlowSpec,
    RelayPhaseConfig,
    __version__,
    beta_asymptote,
    compare_plans,
    end_to_end_efficiency,
    fixed_point_norelay,
    fixed_point_relay,
    optimal_split,
    pf_closed_form_norelay,
    quantize_cqi,
    recommended_beta,
    rr_closed_form,
    run_cli,
    run_mc,
    simulate,
    sinr_map,
    sweep,
    winner_expectation,
)

__all__ = [
    "ConfigError",
    "FlowClass",
    "FlowSpec",
    "RelayPhaseConfig",
    "__version__",
    "beta_asymptote",
    "compare_plans",
    "end_to_end_efficiency",
    "fixed_point_norelay",
    "fixed_point_relay",
    "optimal_split",
    "pf_closed_form_norelay",
    "quantize_cqi",
    "recommended_beta",
    "rr_closed_form",
    "run_cli",
    "run_mc",
    "simulate",
    "sinr_map",
    "sweep",
    "winner_expectation",
]
