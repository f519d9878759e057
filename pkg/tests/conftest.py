import math

import pytest

from omit import DriveParams, FixedEffective, PhysicalParams, derive_constants, steady_state_fixed

TWO_PI = 2 * math.pi


def micromirror(**changes):
    values = dict(
        cavity_length=0.025,
        pump_wavelength=1.064e-6,
        mirror_mass=145e-9,
        cavity_halfwidth=TWO_PI * 215e3,
        mech_freq=TWO_PI * 947e3,
        mech_damping=TWO_PI * 141,
    )
    values.update(changes)
    return PhysicalParams(**values)


def micromirror_state(power, p=None, detuning=None, phase=0.0):
    p = p or micromirror()
    big = p.mech_freq if detuning is None else detuning
    drive = DriveParams(power, FixedEffective(big), pump_phase=phase)
    consts = derive_constants(p, drive)
    return p, consts, steady_state_fixed(big, consts, p)


@pytest.fixture
def physical():
    return micromirror()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS.values():
            terminalreporter.write_line(line)
