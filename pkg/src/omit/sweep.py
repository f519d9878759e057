"""Grid evaluation over probe offset and pump power, plus phase unwrapping."""
from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .errors import ModelError
from .model import (
    DriveParams,
    PhysicalParams,
    derive_constants,
    group_delay_analytic,
    output_amplitude,
    phase,
    probe_response,
    steady_state,
)


class Axis(enum.Enum):
    PROBE_OFFSET = "probe"
    PUMP_POWER = "power"


@dataclass(frozen=True)
class SweepSpec:
    """Linear grid on one axis with the remaining parameters held fixed.

    start/stop are rad/s for the probe axis and W for the power axis.
    ``gamma_variants`` lists mechanical damping rates [rad/s] that replace the
    physical one, one series each (power axis only).
    """

    axis: Axis
    start: float
    stop: float
    count: int
    physical: PhysicalParams
    drive: DriveParams
    gamma_variants: tuple[float, ...] = ()

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 2:
            raise ValueError(f"count must be an integer >= 2, got {self.count!r}")
        if not self.start < self.stop:
            raise ValueError(f"start must be < stop, got {self.start!r} >= {self.stop!r}")
        if self.axis is Axis.PUMP_POWER and self.start < 0:
            raise ValueError("pump power grid must be non-negative")

    def grid(self) -> np.ndarray:
        i = np.arange(self.count, dtype=float)
        return self.start + i * ((self.stop - self.start) / (self.count - 1))


@dataclass(frozen=True)
class SeriesRow:
    axis_value: float
    re_2kc: float
    im_2kc: float
    transmission: float
    phase_raw: float
    phase_unwrapped: float
    group_delay: float
    variant: float | None = None


def _workers():
    try:
        return max(1, int(os.environ.get("OMIT_THREADS", "1")))
    except ValueError:
        return 1


def _ordered_map(fn, chunks):
    n = _workers()
    if n == 1 or len(chunks) == 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, chunks))


def _chunks(count, n):
    bounds = np.linspace(0, count, min(n, count) + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def sweep_probe(spec: SweepSpec) -> list[SeriesRow]:
    if spec.axis is not Axis.PROBE_OFFSET:
        raise ValueError("sweep_probe needs a probe-offset axis")
    p = spec.physical
    consts = derive_constants(p, spec.drive)
    ss = steady_state(consts, p, spec.drive)
    x = spec.grid()
    kappa = p.cavity_halfwidth

    def evaluate(bounds):
        a, b = bounds
        try:
            c_plus = probe_response(x[a:b], ss, p)
            eps = output_amplitude(c_plus, kappa)
            phi = phase(eps)
            tau = group_delay_analytic(x[a:b], ss, p)
        except ModelError as err:
            raise err.with_index(a + (err.index or 0)) from None
        return 2.0 * kappa * c_plus, np.abs(eps), phi, tau

    parts = _ordered_map(evaluate, _chunks(spec.count, _workers()))
    lam = np.concatenate([q[0] for q in parts])
    trans = np.concatenate([q[1] for q in parts])
    phi = np.concatenate([q[2] for q in parts])
    tau = np.concatenate([q[3] for q in parts])
    unwrapped = unwrap_phase(phi)
    return [
        SeriesRow(float(x[i]), float(lam[i].real), float(lam[i].imag), float(trans[i]),
                  float(phi[i]), float(unwrapped[i]), float(tau[i]))
        for i in range(spec.count)
    ]


def _power_series(spec: SweepSpec, p: PhysicalParams, label):
    powers = spec.grid()
    delta_bar = spec.drive.probe_offset

    def evaluate(bounds):
        a, b = bounds
        out = []
        for i in range(a, b):
            drive = replace(spec.drive, pump_power=float(powers[i]))
            try:
                ss = steady_state(derive_constants(p, drive), p, drive)
                c_plus = probe_response(delta_bar, ss, p)
                eps = output_amplitude(c_plus, p.cavity_halfwidth)
                row = (2.0 * p.cavity_halfwidth * c_plus, abs(eps), phase(eps),
                       group_delay_analytic(delta_bar, ss, p))
            except ModelError as err:
                raise err.with_index(i) from None
            out.append(row)
        return out

    rows = [r for part in _ordered_map(evaluate, _chunks(spec.count, _workers())) for r in part]
    unwrapped = unwrap_phase(np.array([r[2] for r in rows]))
    return [
        SeriesRow(float(powers[i]), r[0].real, r[0].imag, float(r[1]), float(r[2]),
                  float(unwrapped[i]), float(r[3]), label)
        for i, r in enumerate(rows)
    ]


def sweep_power(spec: SweepSpec) -> list[list[SeriesRow]]:
    """Group delay against pump power at the fixed offset ``spec.drive.probe_offset``.

    One series per damping variant, each row labelled with its damping [rad/s].
    """
    if spec.axis is not Axis.PUMP_POWER:
        raise ValueError("sweep_power needs a pump-power axis")
    variants = spec.gamma_variants or (spec.physical.mech_damping,)
    return [_power_series(spec, replace(spec.physical, mech_damping=g), float(g))
            for g in variants]


def unwrap_phase(values):
    """Remove 2 pi jumps: successive differences are brought into (-pi, pi].

    Corrections are whole multiples of 2 pi added to the raw values, and the first
    value is left as is. Accepts an array of phases or a list of SeriesRow.
    """
    if isinstance(values, list) and values and isinstance(values[0], SeriesRow):
        fixed = unwrap_phase(np.array([r.phase_raw for r in values]))
        return [replace(r, phase_unwrapped=float(u)) for r, u in zip(values, fixed)]
    raw = np.asarray(values, dtype=float)
    out = raw.copy()
    turn = 2.0 * math.pi
    # sequential so each correction is judged on the float differences a second
    # pass would see, which makes the operation exactly idempotent
    for i in range(1, raw.size):
        prev = out[i - 1]
        k = round((prev - raw[i]) / turn)
        value = raw[i] + turn * k
        while value - prev > math.pi:
            k -= 1
            value = raw[i] + turn * k
        while value - prev <= -math.pi:
            k += 1
            value = raw[i] + turn * k
        out[i] = value
    return out
