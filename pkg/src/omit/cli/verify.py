"""Self-check suite run by ``omit-response verify``."""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ..model import (
    FixedEffective,
    derive_constants,
    group_delay_analytic,
    group_delay_numeric,
    integrate_mean_field,
    output_amplitude,
    probe_response,
    steady_state,
    steady_state_fixed,
)
from .config import RunConfig


@dataclass
class Check:
    name: str
    status: str  # "PASS", "FAIL" or "SKIP"
    measured: float | None = None
    tolerance: float | None = None
    note: str = ""

    def line(self):
        parts = [f"{self.status:4s} {self.name}"]
        if self.measured is not None:
            parts.append(f"measured={self.measured:.3e}")
        if self.tolerance is not None:
            parts.append(f"tol={self.tolerance:.1e}")
        if self.note:
            parts.append(self.note)
        return "  ".join(parts)


def _constants(cfg: RunConfig, drive=None):
    consts = derive_constants(cfg.physical, drive or cfg.drive)
    if cfg.coupling_override is not None:
        consts = replace(consts, coupling=cfg.coupling_override)
    return consts


def _status(ok):
    return "PASS" if ok else "FAIL"


def check_bare_reduction(cfg: RunConfig, rng, n=1000) -> list[Check]:
    p = cfg.physical
    wm, kappa = p.mech_freq, p.cavity_halfwidth
    consts = replace(_constants(cfg), coupling=0.0)
    worst_c = worst_t = 0.0
    for delta, big in rng.uniform(-10 * wm, 10 * wm, size=(n, 2)):
        ss = steady_state_fixed(big, consts, p)
        c_plus = probe_response(delta, ss, p)
        ref = 1.0 / complex(kappa, big - delta)
        worst_c = max(worst_c, abs(c_plus - ref) / abs(c_plus))
        worst_t = max(worst_t, abs(abs(output_amplitude(c_plus, kappa)) - 1.0))
    return [Check("bare-cavity reduction", _status(worst_c < 1e-12), worst_c, 1e-12),
            Check("all-pass at zero coupling", _status(worst_t < 1e-12), worst_t, 1e-12)]


def check_bare_delay(cfg: RunConfig) -> Check:
    p = cfg.physical
    drive = replace(cfg.drive, pump_power=0.0)
    ss = steady_state(_constants(cfg, drive), p, drive)
    tau = group_delay_analytic(ss.eff_detuning, ss, p)
    err = abs(tau * p.cavity_halfwidth / 2.0 - 1.0)
    return Check("bare delay 2/kappa", _status(err < 1e-9), err, 1e-9, f"tau={tau:.6e} s")


def check_delay_consistency(cfg: RunConfig, rng, n=None) -> Check:
    p0 = cfg.physical
    wm = p0.mech_freq
    n = n or cfg.random_points
    worst = 0.0
    for _ in range(n):
        p = replace(p0, mech_damping=p0.mech_damping * rng.uniform(0.7, 1.4))
        power = rng.uniform(0.0, 1e-3)
        big = wm * rng.uniform(0.9, 1.1)
        delta_bar = wm * rng.uniform(0.995, 1.005)
        drive = replace(cfg.drive, pump_power=power, detuning=FixedEffective(big))
        ss = steady_state_fixed(big, _constants(cfg, drive), p)
        tau_a = group_delay_analytic(delta_bar, ss, p)
        tau_n = group_delay_numeric(delta_bar, ss, p, cfg.fd_step, order=4)
        worst = max(worst, abs(tau_a - tau_n) / (1e-6 * abs(tau_a) + 1e-12))
    return Check("analytic vs finite-difference delay", _status(worst <= 1.0), worst, 1.0,
                 "(error / (1e-6|tau| + 1e-12 s))")


def check_transparency_dip(cfg: RunConfig) -> Check:
    spec = cfg.probe_spec()
    consts = _constants(cfg)
    ss = steady_state(consts, cfg.physical, cfg.drive)
    if ss.opto_coupling == 0:
        return Check("transparency dip at w_m", "SKIP", note="no optomechanical coupling")
    grid = spec.grid()
    re = (2 * cfg.physical.cavity_halfwidth * probe_response(grid, ss, cfg.physical)).real
    interior = np.flatnonzero((re[1:-1] < re[:-2]) & (re[1:-1] < re[2:])) + 1
    step = grid[1] - grid[0]
    ok = len(interior) == 1 and abs(grid[interior[0]] - cfg.physical.mech_freq) <= step * (1 + 1e-9)
    where = f"minima at delta/w_m={[round(grid[i] / cfg.physical.mech_freq, 6) for i in interior]}"
    return Check("transparency dip at w_m", _status(ok), note=where)


def check_time_domain(cfg: RunConfig) -> Check:
    p = cfg.physical
    consts = _constants(cfg)
    ss = steady_state(consts, p, cfg.drive)
    detuning = FixedEffective(ss.eff_detuning)
    eps_p = cfg.oracle_probe_ratio * consts.pump_amplitude
    if eps_p == 0:
        eps_p = 1e-3
    offsets = p.mech_freq + p.mech_damping * np.array([-2.0, -1.0, 0.0, 1.0, 2.0])
    worst = 0.0
    for delta in offsets:
        res = integrate_mean_field(p, consts, detuning, eps_p, float(delta),
                                   t_end=cfg.oracle_t_end, dt=cfg.oracle_dt)
        ref = probe_response(float(delta), ss, p)
        worst = max(worst, abs(res.c_plus - ref) / abs(ref))
    return Check("time-domain oracle (5 offsets)", _status(worst < 1e-3), worst, 1e-3)


def run_checks(cfg: RunConfig, seed: int = 0) -> list[Check]:
    rng = np.random.default_rng(seed)
    checks = check_bare_reduction(cfg, rng)
    checks.append(check_bare_delay(cfg))
    checks.append(check_delay_consistency(cfg, rng))
    checks.append(check_transparency_dip(cfg))
    if cfg.time_domain:
        checks.append(check_time_domain(cfg))
    else:
        checks.append(Check("time-domain oracle (5 offsets)", "SKIP", note="disabled in config"))
    return checks


def all_passed(checks) -> bool:
    return all(c.status != "FAIL" for c in checks)


