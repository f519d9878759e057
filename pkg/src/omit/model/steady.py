"""Zeroth-order (pump-only) steady state of the cavity and mirror."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from ..errors import SolverFailure
from .params import HBAR, BareDetuning, DerivedConstants, DriveParams, PhysicalParams

RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class SteadyState:
    """Pump-only solution.

    cavity_amp is the intracavity amplitude c0 [s^-1/2], mirror_pos the static shift
    q0 [m], eff_detuning the effective detuning [rad/s], opto_coupling
    alpha = chi0^2 |c0|^2 / hbar [kg/s^3]. ``residual`` is the scaled
    self-consistency residual (zero when the detuning was fixed by hand).
    """

    cavity_amp: complex
    mirror_pos: float
    eff_detuning: float
    opto_coupling: float
    residual: float = 0.0
    intracavity_number: float = 0.0

    def bare_detuning(self, consts: DerivedConstants) -> float:
        """omega_0 - omega_c consistent with this state."""
        return self.eff_detuning + consts.coupling * self.mirror_pos / HBAR


def _build(delta, consts, p, residual=0.0):
    kappa = p.cavity_halfwidth
    lorentz = kappa * kappa + delta * delta
    eps2 = consts.pump_amplitude ** 2
    n0 = eps2 / lorentz
    c0 = consts.pump_field / complex(kappa, delta)
    q0 = consts.coupling * eps2 / (p.mirror_mass * p.mech_freq ** 2 * lorentz)
    alpha = consts.coupling ** 2 * n0 / HBAR
    return SteadyState(c0, q0, float(delta), alpha, residual, n0)


def steady_state_fixed(delta: float, consts: DerivedConstants, p: PhysicalParams) -> SteadyState:
    """Steady state with the effective detuning ``delta`` imposed directly."""
    if not math.isfinite(delta):
        raise ValueError(f"detuning must be finite, got {delta!r}")
    return _build(delta, consts, p)


def shift_strength(consts: DerivedConstants, p: PhysicalParams) -> float:
    """chi0^2 |eps_c|^2 / (hbar m omega_m^2): the detuning shift is this over kappa^2 + Delta^2."""
    return consts.coupling ** 2 * consts.pump_amplitude ** 2 / (
        HBAR * p.mirror_mass * p.mech_freq ** 2)


def self_consistency_residual(delta, delta0, consts, p):
    """Delta - Delta0 + chi0 q0(Delta) / hbar (vectorised over ``delta``)."""
    delta = np.asarray(delta, dtype=float)
    k2 = p.cavity_halfwidth ** 2
    return delta - delta0 + shift_strength(consts, p) / (k2 + delta * delta)


def steady_state_self_consistent(delta0: float, consts: DerivedConstants,
                                 p: PhysicalParams) -> list[SteadyState]:
    """All real effective detunings solving Delta = Delta0 - chi0 q0(Delta)/hbar.

    The condition is the cubic g(D) = (D - Delta0)(kappa^2 + D^2) + K = 0. Its real
    turning points split the axis into monotone pieces; each piece holding a sign
    change is bracketed and solved, then Newton-polished. Roots sorted ascending.
    """
    if not math.isfinite(delta0):
        raise ValueError(f"bare detuning must be finite, got {delta0!r}")
    kappa = p.cavity_halfwidth
    k2 = kappa * kappa
    strength = shift_strength(consts, p)
    scale = max(abs(delta0), kappa)
    if strength == 0.0:
        return [_build(delta0, consts, p, 0.0)]

    def g(x):
        return (x - delta0) * (k2 + x * x) + strength

    # every root lies in [delta0 - K/kappa^2, delta0)
    lo = delta0 - strength / k2
    hi = delta0
    knots = [lo]
    disc = delta0 * delta0 - 3.0 * k2
    if disc > 0:
        root_disc = math.sqrt(disc)
        for x in sorted(((delta0 - root_disc) / 3.0, (delta0 + root_disc) / 3.0)):
            if lo < x < hi:
                knots.append(x)
    knots.append(hi)

    roots = []
    for a, b in zip(knots[:-1], knots[1:]):
        ga, gb = g(a), g(b)
        if ga == 0.0:
            roots.append(a)
        elif ga * gb < 0:
            roots.append(brentq(g, a, b, xtol=1e-15 * scale, rtol=4 * np.finfo(float).eps,
                                maxiter=500))
    if g(knots[-1]) == 0.0:
        roots.append(knots[-1])
    # tangent (double) roots at turning points
    for x in knots[1:-1]:
        if abs(g(x)) <= 1e-12 * scale * (k2 + x * x):
            roots.append(x)

    polished = []
    for x in roots:
        x = _newton_polish(x, delta0, strength, k2)
        res = abs(self_consistency_residual(x, delta0, consts, p)) / scale
        if not res < RESIDUAL_TOL:
            raise SolverFailure(f"root near {x:.6g} rad/s has residual {res:.3g}")
        polished.append((x, float(res)))
    polished.sort()
    unique = []
    for x, res in polished:
        if unique and abs(x - unique[-1][0]) <= 1e-9 * scale:
            continue
        unique.append((x, res))
    if not unique:
        raise SolverFailure("no real root of the self-consistency condition found")
    return [_build(x, consts, p, res) for x, res in unique]


def _newton_polish(x, delta0, strength, k2, steps=4):
    for _ in range(steps):
        denom = k2 + x * x
        f = x - delta0 + strength / denom
        df = 1.0 - 2.0 * strength * x / (denom * denom)
        if df == 0.0:
            break
        step = f / df
        x_new = x - step
        if not math.isfinite(x_new):
            break
        f_new = x_new - delta0 + strength / (k2 + x_new * x_new)
        if abs(f_new) >= abs(f):
            break
        x = x_new
    return x


def zeroth_order_residuals(ss: SteadyState, consts: DerivedConstants, p: PhysicalParams,
                           bare_detuning: float | None = None) -> tuple[float, float]:
    """Scaled residuals of the force balance and the cavity equation at zeroth order.

    Returns (|-m w_m^2 q0 + chi0 |c0|^2| / (chi0 |c0|^2),
             |-(kappa + i Delta0) c0 + i chi0 q0 c0 / hbar + eps_c| / |eps_c|).
    Both are 0 for an undriven cavity.
    """
    if bare_detuning is None:
        bare_detuning = ss.bare_detuning(consts)
    n0 = abs(ss.cavity_amp) ** 2
    force = consts.coupling * n0
    mech = -p.mirror_mass * p.mech_freq ** 2 * ss.mirror_pos + force
    mech_res = abs(mech) / force if force else abs(mech)
    eps = consts.pump_field
    cav = (-complex(p.cavity_halfwidth, bare_detuning) * ss.cavity_amp
           + 1j * consts.coupling / HBAR * ss.mirror_pos * ss.cavity_amp + eps)
    cav_res = abs(cav) / abs(eps) if eps else abs(cav)
    return float(mech_res), float(cav_res)


def steady_state(consts: DerivedConstants, p: PhysicalParams, drive: DriveParams) -> SteadyState:
    """Steady state in the drive's detuning mode; the bare mode must give a unique root."""
    if isinstance(drive.detuning, BareDetuning):
        roots = steady_state_self_consistent(drive.detuning.value, consts, p)
        if len(roots) != 1:
            raise SolverFailure(
                f"bistable steady state ({len(roots)} roots); fix the effective detuning instead")
        return roots[0]
    return steady_state_fixed(drive.detuning.value, consts, p)
