"""Exit criteria, one test each, with their tolerances and runtime budgets.

Run ``pytest tests/test_acceptance.py`` (a PASS/FAIL line per criterion is printed
in the terminal summary) or ``python tests/test_acceptance.py``.
"""
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from omit import (  # noqa: E402
    DriveParams,
    FixedEffective,
    group_delay_analytic,
    group_delay_numeric,
    integrate_mean_field,
    output_amplitude,
    probe_response,
    steady_state_fixed,
    steady_state_self_consistent,
)
from omit.sweep import Axis, SweepSpec, sweep_probe  # noqa: E402

from conftest import TWO_PI, micromirror, micromirror_state  # noqa: E402
from roots_oracle import scan_roots  # noqa: E402
from test_steady import bistable_config  # noqa: E402

WM = TWO_PI * 947e3
KAPPA = TWO_PI * 215e3

RESULTS = {}


def tau_at(power, gamma_hz=141.0):
    p, _, ss = micromirror_state(power, micromirror(mech_damping=TWO_PI * gamma_hz))
    return group_delay_analytic(WM, ss, p)


def c1_bare_delay():
    tau = tau_at(0.0)
    err = abs(tau / (2 / KAPPA) - 1)
    return err <= 1e-6 and abs(tau - 1.4805e-6) <= 1e-10, f"tau={tau:.7e} s rel.err={err:.1e}"


def c2_superluminal_magnitude():
    tau = tau_at(400e-6)
    return tau < 0 and 1e-3 <= abs(tau) <= 4e-3, f"tau(400 uW)={tau * 1e3:.4f} ms, need [-4, -1] ms"


def c3_negative_range():
    powers = np.geomspace(10e-6, 400e-6, 10)
    taus = [tau_at(pw) for pw in powers]
    return all(t < 0 for t in taus), f"max tau={max(taus):.3e} s over 10 log-spaced powers"


def c4_damping_order():
    slow, fast = tau_at(400e-6, 120.0), tau_at(400e-6, 141.0)
    return abs(slow) > abs(fast), f"|tau|(120 Hz)={abs(slow):.4e} s, |tau|(141 Hz)={abs(fast):.4e} s"


def c5_fig2_structure():
    spec = SweepSpec(Axis.PROBE_OFFSET, 0.995 * WM, 1.005 * WM, 1001, micromirror(),
                     DriveParams(1e-3, FixedEffective(WM)))
    rows = sweep_probe(spec)
    x = np.array([r.axis_value for r in rows])
    re = np.array([r.re_2kc for r in rows])
    im = np.array([r.im_2kc for r in rows])
    step = x[1] - x[0]
    minima = np.flatnonzero((re[1:-1] < re[:-2]) & (re[1:-1] < re[2:])) + 1
    if len(minima) != 1 or abs(x[minima[0]] - WM) > step * (1 + 1e-9):
        return False, f"interior minima at delta/w_m={x[minima] / WM}"
    i = minima[0]
    lo, hi = max(i - 1, 0), min(i + 1, len(x) - 1)
    crosses = np.sign(im[lo]) != np.sign(im[hi])
    slope = (im[hi] - im[lo]) / (x[hi] - x[lo])
    return bool(crosses and slope < 0), f"min at delta/w_m={x[i] / WM:.6f}, dIm/d delta={slope:.3e} s"


def c6_oracle():
    p, consts, ss = micromirror_state(10e-6)
    eps_p = 1e-3 * consts.pump_amplitude
    worst = 0.0
    for delta in WM + p.mech_damping * np.array([-2.0, -1.0, 0.0, 1.0, 2.0]):
        res = integrate_mean_field(p, consts, FixedEffective(WM), eps_p, float(delta))
        ref = probe_response(float(delta), ss, p)
        worst = max(worst, abs(res.c_plus - ref) / abs(ref))
    return worst < 1e-3, f"max rel. deviation={worst:.2e}"


def c7_derivative():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(100):
        p = micromirror(mech_damping=TWO_PI * rng.uniform(100, 200))
        _, _, ss = micromirror_state(rng.uniform(0, 1e-3), p, WM * rng.uniform(0.9, 1.1))
        x = WM * rng.uniform(0.995, 1.005)
        tau_a = group_delay_analytic(x, ss, p)
        tau_n = group_delay_numeric(x, ss, p, WM * 1e-6, order=4)
        worst = max(worst, abs(tau_a - tau_n) / (1e-6 * abs(tau_a) + 1e-12))
    return worst <= 1.0, f"max error / tolerance={worst:.3f}"


def c8_bare_reduction():
    rng = np.random.default_rng(8)
    p = micromirror()
    _, consts, _ = micromirror_state(0.0, p)
    worst_c = worst_t = 0.0
    for delta, big in rng.uniform(-10 * WM, 10 * WM, size=(1000, 2)):
        ss = steady_state_fixed(big, consts, p)
        c_plus = probe_response(delta, ss, p)
        worst_c = max(worst_c, abs(c_plus - 1 / complex(KAPPA, big - delta)) / abs(c_plus))
        worst_t = max(worst_t, abs(abs(output_amplitude(c_plus, KAPPA)) - 1))
    return worst_c < 1e-12 and worst_t < 1e-12, f"c+ rel.err={worst_c:.1e}, ||T|-1|={worst_t:.1e}"


def c9_self_consistent():
    rng = np.random.default_rng(99)
    worst = 0.0
    mismatches = 0
    for _ in range(50):
        p, consts, delta0 = bistable_config(rng)
        roots = steady_state_self_consistent(delta0, consts, p)
        mismatches += len(roots) != len(scan_roots(delta0, consts, p))
        worst = max([worst] + [r.residual for r in roots])
    return mismatches == 0 and worst < 1e-10, f"count mismatches={mismatches}, max residual={worst:.1e}"


CRITERIA = [
    ("1 bare-cavity delay", c1_bare_delay, 1.0),
    ("2 superluminal magnitude", c2_superluminal_magnitude, 1.0),
    ("3 negativity 10-400 uW", c3_negative_range, 1.0),
    ("4 damping ordering", c4_damping_order, 1.0),
    ("5 Fig. 2 structure", c5_fig2_structure, 1.0),
    ("6 time-domain oracle", c6_oracle, 60.0),
    ("7 derivative consistency", c7_derivative, 5.0),
    ("8 zero-coupling reduction", c8_bare_reduction, 1.0),
    ("9 self-consistent solver", c9_self_consistent, 10.0),
]


def evaluate(name, fn, budget):
    start = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - start
    passed = bool(ok) and elapsed < budget
    line = f"{'PASS' if passed else 'FAIL'}  criterion {name}: {detail}  [{elapsed:.2f} s / {budget:g} s]"
    RESULTS[name] = line
    return passed, line


@pytest.mark.parametrize("name,fn,budget", CRITERIA, ids=[c[0].split()[0] for c in CRITERIA])
def test_criterion(name, fn, budget):
    passed, line = evaluate(name, fn, budget)
    print(line)
    assert passed, line


if __name__ == "__main__":
    failures = 0
    for name, fn, budget in CRITERIA:
        passed, line = evaluate(name, fn, budget)
        print(line)
        failures += not passed
    sys.exit(1 if failures else 0)
