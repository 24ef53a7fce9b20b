"""Graphical continuous Lyapunov models: cumulant Lyapunov solvers, drift
estimation, identifiability checks and a steady-state sampler."""

from ._core import (
    construct_drift,
    drift_system_matrix,
    estimate_drift,
    estimate_drift_from_cumulants,
    forward_map,
    identifiability,
    sample_steady_state,
    solve_lyapunov,
    two_point_jump,
)

__all__ = [
    "construct_drift",
    "drift_system_matrix",
    "estimate_drift",
    "estimate_drift_from_cumulants",
    "forward_map",
    "identifiability",
    "sample_steady_state",
    "solve_lyapunov",
    "two_point_jump",
]
