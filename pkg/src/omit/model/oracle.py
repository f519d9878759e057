"""Time-domain check of the closed-form probe response.

The mean-value equations are integrated with a fixed-step RK4 in the frame rotating
at the pump frequency, with mirror variables rescaled to x = chi0 q / hbar and
v = dx/dt (both in rad/s units). The cavity amplitude is projected on exp(-i delta t)
over whole probe periods at the end of the run.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numba
import numpy as np

from ..errors import NotConverged, UnstableIntegration
from .params import HBAR, BareDetuning, DerivedConstants, FixedEffective, PhysicalParams
from .steady import SteadyState, steady_state_fixed, steady_state_self_consistent

CONVERGENCE_TOL = 1e-3
BLOWUP_FACTOR = 1e12
MIN_PERIODS = 10


@dataclass(frozen=True)
class MeanFieldResult:
    c_plus: complex
    c_plus_previous: complex
    relative_change: float
    mean_field: complex
    steady: SteadyState
    dt: float
    steps: int


@numba.njit(cache=True)
def _rhs(cr, ci, x, v, kappa, delta0, eps_r, eps_i, drive_r, drive_i, wm2, gain, gm):
    det = delta0 - x
    # dc/dt = -(kappa + i det) c + eps_c + eps_p e^{-i delta t}
    dcr = -kappa * cr + det * ci + eps_r + drive_r
    dci = -kappa * ci - det * cr + eps_i + drive_i
    dv = -wm2 * x + gain * (cr * cr + ci * ci) - gm * v
    return dcr, dci, v, dv


@numba.njit(cache=True)
def _integrate(cr, ci, x, v, kappa, delta0, eps_r, eps_i, probe, delta, wm2, gain, gm,
               dt, n_steps, window, limit2):
    proj_r = np.zeros(2)
    proj_i = np.zeros(2)
    mean_r = 0.0
    mean_i = 0.0
    start = n_steps - 2 * window
    half = 0.5 * dt
    for k in range(n_steps):
        t = k * dt
        d0r = probe * math.cos(delta * t)
        d0i = -probe * math.sin(delta * t)
        dhr = probe * math.cos(delta * (t + half))
        dhi = -probe * math.sin(delta * (t + half))
        d1r = probe * math.cos(delta * (t + dt))
        d1i = -probe * math.sin(delta * (t + dt))
        k1 = _rhs(cr, ci, x, v, kappa, delta0, eps_r, eps_i, d0r, d0i, wm2, gain, gm)
        k2 = _rhs(cr + half * k1[0], ci + half * k1[1], x + half * k1[2], v + half * k1[3],
                  kappa, delta0, eps_r, eps_i, dhr, dhi, wm2, gain, gm)
        k3 = _rhs(cr + half * k2[0], ci + half * k2[1], x + half * k2[2], v + half * k2[3],
                  kappa, delta0, eps_r, eps_i, dhr, dhi, wm2, gain, gm)
        k4 = _rhs(cr + dt * k3[0], ci + dt * k3[1], x + dt * k3[2], v + dt * k3[3],
                  kappa, delta0, eps_r, eps_i, d1r, d1i, wm2, gain, gm)
        s = dt / 6.0
        cr += s * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
        ci += s * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
        x += s * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])
        v += s * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3])
        mag2 = cr * cr + ci * ci
        if not (mag2 <= limit2):
            return proj_r, proj_i, mean_r, mean_i, k + 1
        j = k + 1 - start
        if j > 0:
            # state now sits at time (k + 1) dt
            tk = (k + 1) * dt
            c = math.cos(delta * tk)
            sn = math.sin(delta * tk)
            w = 0 if j <= window else 1
            proj_r[w] += cr * c - ci * sn
            proj_i[w] += cr * sn + ci * c
            if w == 1:
                mean_r += cr
                mean_i += ci
    return proj_r, proj_i, mean_r, mean_i, n_steps


def resolving_step(p: PhysicalParams, eff_detuning: float, delta: float) -> float:
    """Largest admissible time step, 0.01 / max(kappa, w_m, |Delta| + |delta|)."""
    fastest = max(p.cavity_halfwidth, p.mech_freq, abs(eff_detuning) + abs(delta))
    return 0.01 / fastest


def integrate_mean_field(p: PhysicalParams, consts: DerivedConstants, detuning,
                         probe_amplitude: float, delta: float, t_end: float | None = None,
                         dt: float | None = None, periods: int = MIN_PERIODS) -> MeanFieldResult:
    """Integrate the mean-value equations and extract c+ at probe offset ``delta``.

    ``detuning`` is a FixedEffective (the bare detuning is then back-computed from the
    steady state) or a BareDetuning (must yield a single steady state). ``t_end``
    defaults to 20/gamma_m, ``dt`` to the resolving step. The run starts from the
    pump-only steady state.
    """
    if delta == 0:
        raise ValueError("probe offset must be nonzero for the projection")
    if isinstance(detuning, FixedEffective):
        ss = steady_state_fixed(detuning.value, consts, p)
    elif isinstance(detuning, BareDetuning):
        roots = steady_state_self_consistent(detuning.value, consts, p)
        if len(roots) != 1:
            raise NotConverged(f"{len(roots)} steady states; oracle needs a unique one")
        ss = roots[0]
    else:
        raise TypeError("detuning must be FixedEffective or BareDetuning")
    delta0 = ss.bare_detuning(consts)

    dt_max = resolving_step(p, ss.eff_detuning, delta)
    if dt is None:
        dt = dt_max
    elif dt > dt_max * (1 + 1e-12):
        raise NotConverged(
            f"time step {dt:.3g} s does not resolve the fastest scale; "
            f"use dt <= {dt_max:.3g} s")
    t_min = 20.0 / p.mech_damping if p.mech_damping > 0 else math.inf
    if t_end is None:
        t_end = t_min
    if t_end < t_min * (1 - 1e-12):
        raise NotConverged(
            f"t_end {t_end:.3g} s is shorter than 20/gamma_m = {t_min:.3g} s; "
            "the mechanical transient will not have decayed")
    if consts.pump_amplitude and abs(probe_amplitude) > 1e-3 * consts.pump_amplitude:
        warnings.warn("probe amplitude exceeds 1e-3 of the pump; first-order "
                      "extraction may be biased", stacklevel=2)

    per_period = math.ceil(2.0 * math.pi / (abs(delta) * dt))
    dt = 2.0 * math.pi / (abs(delta) * per_period)
    window = max(int(periods), MIN_PERIODS) * per_period
    n_steps = max(math.ceil(t_end / dt), 2 * window)

    c0 = ss.cavity_amp
    x0 = consts.coupling * ss.mirror_pos / HBAR
    ref = max(abs(c0), abs(probe_amplitude) / p.cavity_halfwidth, 1e-300)
    limit2 = (BLOWUP_FACTOR * ref) ** 2
    eps = consts.pump_field
    gain = consts.coupling ** 2 / (HBAR * p.mirror_mass)

    proj_r, proj_i, mean_r, mean_i, done = _integrate(
        c0.real, c0.imag, x0, 0.0, p.cavity_halfwidth, delta0, eps.real, eps.imag,
        float(probe_amplitude), float(delta), p.mech_freq ** 2, gain, p.mech_damping,
        dt, n_steps, window, limit2)
    if done < n_steps:
        raise UnstableIntegration(
            f"cavity amplitude exceeded {BLOWUP_FACTOR:g} x its steady value at t = {done * dt:.3g} s")

    mean_field = complex(mean_r, mean_i) / window
    if probe_amplitude == 0:
        return MeanFieldResult(0j, 0j, 0.0, mean_field, ss, dt, n_steps)
    prev = complex(proj_r[0], proj_i[0]) / (window * probe_amplitude)
    last = complex(proj_r[1], proj_i[1]) / (window * probe_amplitude)
    change = abs(last - prev) / abs(last) if last else math.inf
    if change > CONVERGENCE_TOL:
        raise NotConverged(
            f"projected amplitude changed by {change:.3g} between the last two windows; "
            "increase t_end")
    return MeanFieldResult(last, prev, change, mean_field, ss, dt, n_steps)
