"""Flat, sectioned key-value configuration.

Grammar (one item per line)::

    # comment            ; blank lines and '#'/';' comments are ignored
    [section]
    key = value          ; inline '#' comments after a value are stripped

Keys are addressed as ``section.key``. Frequencies are read in Hz and converted to
rad/s here; no other module converts units.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ..model import BareDetuning, DriveParams, FixedEffective, PhysicalParams
from ..sweep import Axis, SweepSpec

TWO_PI = 2.0 * math.pi


class ConfigError(Exception):
    def __init__(self, message, line=None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class ParseError(ConfigError):
    pass


class ValidationError(ConfigError):
    def __init__(self, key, message, line=None):
        self.key = key
        super().__init__(f"{key}: {message}", line)


class UnknownKey(ConfigError):
    def __init__(self, key, line=None):
        self.key = key
        super().__init__(f"unknown key {key!r}", line)


# key -> (kind, required, default)
SCHEMA = {
    "cavity.length_m": ("positive", True, None),
    "cavity.wavelength_m": ("positive", True, None),
    "cavity.halfwidth_hz": ("positive", True, None),
    "mirror.mass_kg": ("positive", True, None),
    "mirror.freq_hz": ("positive", True, None),
    "mirror.damping_hz": ("nonnegative", True, None),
    "drive.pump_power_w": ("nonnegative", True, None),
    "drive.probe_power_w": ("nonnegative", False, "0"),
    "drive.detuning_mode": ("mode", False, "effective"),
    "drive.detuning_hz": ("float", False, None),
    "drive.probe_offset_hz": ("float", False, None),
    "drive.pump_phase_rad": ("float", False, "0"),
    "sweep.probe_start_over_omega_m": ("float", False, "0.995"),
    "sweep.probe_stop_over_omega_m": ("float", False, "1.005"),
    "sweep.probe_count": ("count", False, "1001"),
    "sweep.power_start_w": ("nonnegative", False, "0"),
    "sweep.power_stop_w": ("positive", False, "400e-6"),
    "sweep.power_count": ("count", False, "401"),
    "sweep.gamma_variants_hz": ("list", False, ""),
    "numerics.fd_step_radps": ("positive", False, None),
    "numerics.coupling_override_n": ("nonnegative", False, None),
    "numerics.oracle_dt_s": ("positive", False, None),
    "numerics.oracle_t_end_s": ("positive", False, None),
    "numerics.oracle_probe_ratio": ("positive", False, "1e-3"),
    "verify.time_domain": ("bool", False, "true"),
    "verify.random_points": ("count", False, "100"),
    "output.path": ("str", False, None),
}

_SECTION = re.compile(r"^\[\s*([A-Za-z_][\w]*)\s*\]$")
_ITEM = re.compile(r"^([A-Za-z_][\w]*)\s*=\s*(.*)$")


@dataclass
class RunConfig:
    physical: PhysicalParams
    drive: DriveParams
    probe_window: tuple[float, float]
    probe_count: int
    power_window: tuple[float, float]
    power_count: int
    gamma_variants: tuple[float, ...] = ()
    fd_step: float | None = None
    coupling_override: float | None = None
    oracle_dt: float | None = None
    oracle_t_end: float | None = None
    oracle_probe_ratio: float = 1e-3
    time_domain: bool = True
    random_points: int = 100
    output_path: str | None = None
    resolved: dict = field(default_factory=dict)

    def probe_spec(self) -> SweepSpec:
        wm = self.physical.mech_freq
        return SweepSpec(Axis.PROBE_OFFSET, self.probe_window[0] * wm,
                         self.probe_window[1] * wm, self.probe_count,
                         self.physical, self.drive)

    def power_spec(self) -> SweepSpec:
        return SweepSpec(Axis.PUMP_POWER, self.power_window[0], self.power_window[1],
                         self.power_count, self.physical, self.drive, self.gamma_variants)


def read_items(text: str) -> dict[str, tuple[str, int]]:
    """Raw ``section.key -> (value, line)`` mapping; syntax errors only."""
    items = {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith(";"):
            continue
        m = _SECTION.match(line)
        if m:
            section = m.group(1)
            continue
        m = _ITEM.match(line)
        if not m:
            raise ParseError(f"cannot parse {raw.strip()!r}", lineno)
        if section is None:
            raise ParseError(f"key {m.group(1)!r} outside any [section]", lineno)
        key = f"{section}.{m.group(1)}"
        if key not in SCHEMA:
            raise UnknownKey(key, lineno)
        if key in items:
            raise ParseError(f"duplicate key {key!r} (first on line {items[key][1]})", lineno)
        items[key] = (m.group(2).strip(), lineno)
    return items


def _convert(key, kind, text, line):
    if kind == "str":
        return text
    if kind == "mode":
        if text not in ("effective", "bare"):
            raise ValidationError(key, f"must be 'effective' or 'bare', got {text!r}", line)
        return text
    if kind == "bool":
        low = text.lower()
        if low in ("true", "yes", "1", "on"):
            return True
        if low in ("false", "no", "0", "off"):
            return False
        raise ValidationError(key, f"not a boolean: {text!r}", line)
    if kind == "list":
        parts = [s.strip() for s in text.split(",") if s.strip()]
        values = []
        for s in parts:
            try:
                v = float(s)
            except ValueError:
                raise ParseError(f"{key}: not a number: {s!r}", line) from None
            if not (math.isfinite(v) and v >= 0):
                raise ValidationError(key, f"entries must be >= 0, got {s}", line)
            values.append(v)
        return tuple(values)
    if kind == "count":
        try:
            v = int(text)
        except ValueError:
            raise ParseError(f"{key}: not an integer: {text!r}", line) from None
        if v < 2:
            raise ValidationError(key, f"must be >= 2, got {v}", line)
        return v
    try:
        v = float(text)
    except ValueError:
        raise ParseError(f"{key}: not a number: {text!r}", line) from None
    if not math.isfinite(v):
        raise ValidationError(key, "must be finite", line)
    if kind == "positive" and not v > 0:
        raise ValidationError(key, f"must be > 0, got {text}", line)
    if kind == "nonnegative" and v < 0:
        raise ValidationError(key, f"must be >= 0, got {text}", line)
    return v


def parse_config(text: str, overrides: dict[str, str] | None = None) -> RunConfig:
    """Parse and validate configuration text; ``overrides`` (key -> text) win over it."""
    items = read_items(text)
    for key, value in (overrides or {}).items():
        if key not in SCHEMA:
            raise UnknownKey(key)
        items[key] = (str(value), None)

    missing = [k for k, (_, req, _) in SCHEMA.items() if req and k not in items]
    if missing:
        raise ParseError("missing required keys: " + ", ".join(missing))

    values, lines = {}, {}
    for key, (kind, _, default) in SCHEMA.items():
        if key in items:
            text_value, line = items[key]
        elif default is not None:
            text_value, line = default, None
        else:
            values[key] = None
            continue
        values[key] = _convert(key, kind, text_value, line)
        lines[key] = line

    freq = values["mirror.freq_hz"]
    if values["drive.detuning_hz"] is None:
        values["drive.detuning_hz"] = freq
    if values["drive.probe_offset_hz"] is None:
        values["drive.probe_offset_hz"] = freq

    def check(cond, key, message):
        if not cond:
            raise ValidationError(key, message, lines.get(key))

    damping = values["mirror.damping_hz"]
    check(damping == 0 or freq / damping > 1, "mirror.damping_hz",
          "quality factor freq_hz / damping_hz must exceed 1")
    check(values["sweep.probe_start_over_omega_m"] < values["sweep.probe_stop_over_omega_m"],
          "sweep.probe_stop_over_omega_m", "probe window must have start < stop")
    check(values["sweep.power_start_w"] < values["sweep.power_stop_w"],
          "sweep.power_stop_w", "power window must have start < stop")

    physical = PhysicalParams(
        cavity_length=values["cavity.length_m"],
        pump_wavelength=values["cavity.wavelength_m"],
        mirror_mass=values["mirror.mass_kg"],
        cavity_halfwidth=TWO_PI * values["cavity.halfwidth_hz"],
        mech_freq=TWO_PI * freq,
        mech_damping=TWO_PI * damping,
    )
    detuning = TWO_PI * values["drive.detuning_hz"]
    mode = FixedEffective if values["drive.detuning_mode"] == "effective" else BareDetuning
    drive = DriveParams(
        pump_power=values["drive.pump_power_w"],
        detuning=mode(detuning),
        probe_offset=TWO_PI * values["drive.probe_offset_hz"],
        pump_phase=values["drive.pump_phase_rad"],
        probe_power=values["drive.probe_power_w"],
    )
    return RunConfig(
        physical=physical,
        drive=drive,
        probe_window=(values["sweep.probe_start_over_omega_m"],
                      values["sweep.probe_stop_over_omega_m"]),
        probe_count=values["sweep.probe_count"],
        power_window=(values["sweep.power_start_w"], values["sweep.power_stop_w"]),
        power_count=values["sweep.power_count"],
        gamma_variants=tuple(TWO_PI * g for g in values["sweep.gamma_variants_hz"]),
        fd_step=values["numerics.fd_step_radps"],
        coupling_override=values["numerics.coupling_override_n"],
        oracle_dt=values["numerics.oracle_dt_s"],
        oracle_t_end=values["numerics.oracle_t_end_s"],
        oracle_probe_ratio=values["numerics.oracle_probe_ratio"],
        time_domain=values["verify.time_domain"],
        random_points=values["verify.random_points"],
        output_path=values["output.path"],
        resolved=values,
    )


def bundled_config_text(name: str = "aspelmeyer.cfg") -> str:
    return resources.files("omit.cli").joinpath("data", name).read_text(encoding="utf-8")


PRESETS = {
    "fig2": {"drive.pump_power_w": "1e-3"},
    "fig3": {"drive.pump_power_w": "1e-3"},
    "fig4": {"sweep.gamma_variants_hz": "141, 120"},
}


def load_config(path: str | Path | None = None, preset: str | None = None,
                overrides: dict[str, str] | None = None) -> RunConfig:
    """Config file (or the bundled cavity when no path is given) plus preset and flags."""
    if preset is not None and path is not None:
        raise ConfigError("--preset fixes the parameter set; do not combine it with --config")
    if path is None:
        text = bundled_config_text()
    else:
        text = Path(path).read_text(encoding="utf-8")
    merged = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; choose from {', '.join(PRESETS)}")
        merged.update(PRESETS[preset])
    merged.update(overrides or {})
    return parse_config(text, merged)
