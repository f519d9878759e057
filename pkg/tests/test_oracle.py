from dataclasses import replace

import pytest

from omit import BareDetuning, FixedEffective, integrate_mean_field, probe_response
from omit.errors import NotConverged, UnstableIntegration
from omit.model import oracle

from conftest import TWO_PI, micromirror_state

WM = TWO_PI * 947e3


def test_pump_only_steady_state():
    p, consts, ss = micromirror_state(10e-6)
    res = integrate_mean_field(p, consts, FixedEffective(WM), 0.0, 1.001 * WM)
    assert res.c_plus == 0
    assert abs(res.mean_field - ss.cavity_amp) <= 1e-6 * abs(ss.cavity_amp)


def test_uncoupled_cavity_is_a_lorentzian_filter():
    p, consts, _ = micromirror_state(10e-6)
    consts = replace(consts, coupling=0.0)
    delta = 1.0004 * WM
    res = integrate_mean_field(p, consts, FixedEffective(WM), 1e-3 * consts.pump_amplitude, delta)
    ref = 1 / complex(p.cavity_halfwidth, WM - delta)
    assert abs(res.c_plus - ref) <= 1e-4 * abs(ref)


def test_matches_closed_form_at_10uw():
    p, consts, ss = micromirror_state(10e-6)
    delta = 1.001 * WM
    res = integrate_mean_field(p, consts, FixedEffective(WM), 1e-3 * consts.pump_amplitude, delta)
    ref = probe_response(delta, ss, p)
    assert abs(res.c_plus - ref) <= 1e-3 * abs(ref)
    assert res.relative_change <= oracle.CONVERGENCE_TOL


def test_bare_detuning_input():
    p, consts, ss = micromirror_state(10e-6)
    delta0 = ss.bare_detuning(consts)
    res = integrate_mean_field(p, consts, BareDetuning(delta0), 1e-3 * consts.pump_amplitude,
                               WM)
    assert res.steady.eff_detuning == pytest.approx(WM, rel=1e-12)
    assert abs(res.c_plus - probe_response(WM, ss, p)) <= 1e-3 * abs(res.c_plus)


def test_coarse_step_reports_remedy():
    p, consts, _ = micromirror_state(10e-6)
    with pytest.raises(NotConverged, match="use dt <="):
        integrate_mean_field(p, consts, FixedEffective(WM), 1.0, WM, dt=1e-7)


def test_short_run_reports_remedy():
    p, consts, _ = micromirror_state(10e-6)
    with pytest.raises(NotConverged, match="20/gamma_m"):
        integrate_mean_field(p, consts, FixedEffective(WM), 1.0, WM, t_end=1e-3)


def test_blowup_detected(monkeypatch):
    p, consts, _ = micromirror_state(10e-6)
    monkeypatch.setattr(oracle, "BLOWUP_FACTOR", 0.5)
    with pytest.raises(UnstableIntegration):
        integrate_mean_field(p, consts, FixedEffective(WM), 1.0, WM)


def test_zero_offset_rejected():
    p, consts, _ = micromirror_state(10e-6)
    with pytest.raises(ValueError):
        integrate_mean_field(p, consts, FixedEffective(WM), 1.0, 0.0)
