"""Iterative water-filling simulator (Python bindings)."""

from ._core import (
    Algorithm,
    Certificate,
    NetworkModel,
    NoiseModel,
    RunTrace,
    Scenario,
    Schedule,
    ConfigError,
    best_response,
    bias_study,
    canned_scenario,
    certify,
    default_start,
    detect_convergence,
    fixed_point_residual,
    lemma4_recursion,
    parse_scenario,
    random_weak_network,
    run,
    run_scenario,
    serialize_scenario,
    solve_fixed_point,
    spectral_radius,
    stacked_operator,
    true_ipn,
    water_level_solve,
)

__all__ = [name for name in dir() if not name.startswith("_")]
