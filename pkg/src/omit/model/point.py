from __future__ import annotations

from dataclasses import dataclass

from .params import PhysicalParams
from .response import group_delay_analytic, output_amplitude, phase, probe_response
from .steady import SteadyState


@dataclass(frozen=True)
class ResponsePoint:
    delta: float
    c_plus: complex
    lambda_response: complex
    eps_out_plus: complex
    transmission: float
    phase: float
    group_delay: float


def response_point(delta: float, ss: SteadyState, p: PhysicalParams) -> ResponsePoint:
    """Every per-offset quantity bundled into one record."""
    kappa = p.cavity_halfwidth
    c_plus = probe_response(delta, ss, p)
    eps = output_amplitude(c_plus, kappa)
    return ResponsePoint(
        delta=delta,
        c_plus=c_plus,
        lambda_response=2.0 * kappa * c_plus,
        eps_out_plus=eps,
        transmission=abs(eps),
        phase=phase(eps),
        group_delay=group_delay_analytic(delta, ss, p),
    )
