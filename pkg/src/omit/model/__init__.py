"""Numerical core: parameters, steady states, probe response and group delay."""
from .oracle import MeanFieldResult, integrate_mean_field, resolving_step
from .params import (
    HBAR,
    SPEED_OF_LIGHT,
    BareDetuning,
    DerivedConstants,
    DriveParams,
    FixedEffective,
    PhysicalParams,
    derive_constants,
)
from .response import (
    default_step,
    group_delay_analytic,
    group_delay_numeric,
    output_amplitude,
    phase,
    probe_response,
    probe_response_derivative,
    richardson_delay,
)
from .steady import (
    SteadyState,
    self_consistency_residual,
    shift_strength,
    steady_state,
    steady_state_fixed,
    steady_state_self_consistent,
    zeroth_order_residuals,
)
from .point import ResponsePoint, response_point

__all__ = [name for name in dir() if not name.startswith("_")]
