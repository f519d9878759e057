"""First-order probe response, output field, phase and group delay.

Every function accepts a scalar or an ndarray of probe offsets. Terms carrying the
mirror mass are divided through by it, so the rational function is built from
alpha/m and intermediates stay well inside double range.
"""
from __future__ import annotations

import numpy as np

from ..errors import DegenerateDenominator, ZeroField
from .params import PhysicalParams
from .steady import SteadyState

ZERO_FIELD_TOL = 1e-14


def _terms(delta, ss, p):
    kappa = p.cavity_halfwidth
    wm = p.mech_freq
    gm = p.mech_damping
    big = ss.eff_detuning
    a = ss.opto_coupling / p.mirror_mass
    mech = delta * delta - wm * wm + 1j * gm * delta
    fwd = kappa + 1j * (big - delta)
    back = kappa - 1j * (big + delta)
    num = mech * back - 1j * a
    den = mech * fwd * back + 2.0 * big * a
    return mech, fwd, back, num, den


def _check_den(den):
    zero = np.asarray(den) == 0
    if np.any(zero):
        where = np.flatnonzero(zero)
        err = DegenerateDenominator("probe-response denominator vanished")
        if np.ndim(den):
            err.with_index(int(where[0]))
        raise err


def probe_response(delta, ss: SteadyState, p: PhysicalParams):
    """Intracavity first-order amplitude c+ [s] at probe offset ``delta`` [rad/s].

    c+ = [D B - i a] / [D A B + 2 Delta a] with D = delta^2 - w_m^2 + i g_m delta,
    A = kappa + i(Delta - delta), B = kappa - i(Delta + delta), a = alpha/m.
    """
    *_, num, den = _terms(np.asarray(delta, dtype=float), ss, p)
    _check_den(den)
    out = num / den
    return complex(out) if np.ndim(out) == 0 else out


def probe_response_derivative(delta, ss: SteadyState, p: PhysicalParams):
    """(c+, dc+/d delta), the latter by the quotient rule on the polynomial parts."""
    delta = np.asarray(delta, dtype=float)
    mech, fwd, back, num, den = _terms(delta, ss, p)
    _check_den(den)
    dmech = 2.0 * delta + 1j * p.mech_damping
    # dA/d delta = dB/d delta = -i
    dnum = dmech * back - 1j * mech
    dden = dmech * fwd * back - 1j * mech * (back + fwd)
    c_plus = num / den
    dc = (dnum * den - num * dden) / (den * den)
    return c_plus, dc


def output_amplitude(c_plus, kappa):
    """eps_out+ = 2 kappa c+ - 1."""
    return 2.0 * kappa * c_plus - 1.0


def phase(eps):
    """Principal argument of ``eps`` in (-pi, pi]."""
    eps = np.asarray(eps, dtype=complex)
    if np.any(np.abs(eps) == 0):
        raise ZeroField("phase undefined for a zero output field")
    phi = np.angle(eps)
    phi = np.where(phi == -np.pi, np.pi, phi)
    return float(phi) if phi.ndim == 0 else phi


def _check_field(eps):
    if np.any(np.abs(eps) < ZERO_FIELD_TOL):
        raise ZeroField("output field vanishes; group delay undefined")


def group_delay_analytic(delta_bar, ss: SteadyState, p: PhysicalParams):
    """tau = Im[2 kappa (dc+/d delta) / eps_out+] [s], exact derivative."""
    kappa = p.cavity_halfwidth
    c_plus, dc = probe_response_derivative(delta_bar, ss, p)
    eps = output_amplitude(c_plus, kappa)
    _check_field(eps)
    tau = np.imag(2.0 * kappa * dc / eps)
    return float(tau) if np.ndim(tau) == 0 else tau


def default_step(p: PhysicalParams) -> float:
    return p.mech_freq * 1e-6


def group_delay_numeric(delta_bar, ss: SteadyState, p: PhysicalParams, step=None, order=2):
    """Finite-difference group delay.

    order=2 is the plain central difference with step ``step`` (default w_m 1e-6).
    order=4 Richardson-combines central differences at step and step/2, which removes
    the h^2 term; needed when the step is not small against the transparency width.
    """
    if step is None:
        step = default_step(p)
    if not step > 0:
        raise ValueError(f"step must be > 0, got {step!r}")
    kappa = p.cavity_halfwidth
    delta_bar = np.asarray(delta_bar, dtype=float)

    def eps_at(x):
        return output_amplitude(probe_response(x, ss, p), kappa)

    def central(h):
        return (eps_at(delta_bar + h) - eps_at(delta_bar - h)) / (2.0 * h)

    eps0 = eps_at(delta_bar)
    _check_field(eps0)
    if order == 2:
        slope = central(step)
    elif order == 4:
        slope = (4.0 * central(step / 2.0) - central(step)) / 3.0
    else:
        raise ValueError("order must be 2 or 4")
    tau = np.imag(slope / eps0)
    return float(tau) if np.ndim(tau) == 0 else tau


def richardson_delay(delta_bar, ss: SteadyState, p: PhysicalParams, steps):
    """Polynomial (h^2, h^4, ...) extrapolation to h -> 0 of central-difference delays.

    ``steps`` must be decreasing; a Neville tableau in h^2 is used.
    """
    steps = [float(h) for h in steps]
    table = [group_delay_numeric(delta_bar, ss, p, h) for h in steps]
    for j in range(1, len(steps)):
        table = [
            (table[i + 1] * steps[i] ** 2 - table[i] * steps[i + j] ** 2)
            / (steps[i] ** 2 - steps[i + j] ** 2)
            for i in range(len(table) - 1)
        ]
    return table[0]
