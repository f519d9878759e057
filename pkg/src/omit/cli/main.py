"""Command-line entry point ``omit-response``."""
from __future__ import annotations

import argparse
import logging
import os
import sys
import warnings
from dataclasses import asdict, replace

from .. import __version__
from ..errors import ModelError, NonPositiveParameter
from ..model import derive_constants, group_delay_analytic, steady_state
from ..sweep import sweep_power, sweep_probe
from . import verify as verify_mod
from .config import ConfigError, RunConfig, load_config
from .io import sidecar_path, write_csv, write_sidecar

log = logging.getLogger("omit")

EXIT_CONFIG, EXIT_SOLVER, EXIT_IO, EXIT_VERIFY = 1, 2, 3, 4


def build_parser():
    parser = argparse.ArgumentParser(
        prog="omit-response",
        description="Probe response, phase and group delay of a one-sided optomechanical cavity.")
    parser.add_argument("command", choices=["response", "phase", "delay", "verify"])
    parser.add_argument("--config", help="configuration file (default: bundled cavity)")
    parser.add_argument("--preset", choices=["fig2", "fig3", "fig4"])
    parser.add_argument("--pump-power", type=float, metavar="W")
    parser.add_argument("--gamma-m", type=float, metavar="HZ",
                        help="mechanical damping in Hz; replaces any damping variants")
    parser.add_argument("--out", metavar="PATH", help="CSV output (default: <command>.csv)")
    parser.add_argument("--fd-step", type=float, metavar="RADPS",
                        help="finite-difference step for verify [rad/s]")
    parser.add_argument("--seed", type=int, default=0, help="seed for verify's random points")
    return parser


def _overrides(args):
    out = {}
    if args.pump_power is not None:
        out["drive.pump_power_w"] = repr(args.pump_power)
    if args.gamma_m is not None:
        out["mirror.damping_hz"] = repr(args.gamma_m)
        out["sweep.gamma_variants_hz"] = ""
    if args.fd_step is not None:
        out["numerics.fd_step_radps"] = repr(args.fd_step)
    return out


def _provenance(cfg: RunConfig, args, command):
    consts = derive_constants(cfg.physical, cfg.drive)
    return {
        "command": command,
        "preset": args.preset,
        "config": args.config or "bundled:aspelmeyer.cfg",
        "version": __version__,
        "inputs": {k: v for k, v in cfg.resolved.items()},
        "physical_si": asdict(cfg.physical),
        "drive_si": {
            "pump_power": cfg.drive.pump_power,
            "detuning_mode": type(cfg.drive.detuning).__name__,
            "detuning": cfg.drive.detuning.value,
            "probe_offset": cfg.drive.probe_offset,
            "pump_phase": cfg.drive.pump_phase,
            "probe_power": cfg.drive.probe_power,
        },
        "derived": {
            "cavity_freq": consts.cavity_freq,
            "coupling": consts.coupling,
            "pump_amplitude": consts.pump_amplitude,
        },
        "gamma_variants": list(cfg.gamma_variants),
    }


def _response_rows(cfg, with_phase):
    rows = sweep_probe(cfg.probe_spec())
    wm = cfg.physical.mech_freq
    if with_phase:
        header = ["delta_radps", "delta_over_omega_m", "abs_T", "phase_raw_rad",
                  "phase_unwrapped_rad", "tau_s"]
        body = [[r.axis_value, r.axis_value / wm, r.transmission, r.phase_raw,
                 r.phase_unwrapped, r.group_delay] for r in rows]
    else:
        header = ["delta_radps", "delta_over_omega_m", "re_2kc", "im_2kc"]
        body = [[r.axis_value, r.axis_value / wm, r.re_2kc, r.im_2kc] for r in rows]
    return header, body


def _delay_rows(cfg, single_power):
    header = ["P_c_W", "P_c_uW", "gamma_m_radps", "tau_s"]
    if single_power:
        body = []
        for g in cfg.gamma_variants or (cfg.physical.mech_damping,):
            p = replace(cfg.physical, mech_damping=g)
            ss = steady_state(derive_constants(p, cfg.drive), p, cfg.drive)
            tau = group_delay_analytic(cfg.drive.probe_offset, ss, p)
            body.append([cfg.drive.pump_power, cfg.drive.pump_power * 1e6, g, tau])
        return header, body
    series = sweep_power(cfg.power_spec())
    body = [[r.axis_value, r.axis_value * 1e6, r.variant, r.group_delay]
            for block in series for r in block]
    return header, body


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            cfg = load_config(args.config, args.preset, _overrides(args))
        for w in caught:
            log.warning("%s", w.message)
    except (ConfigError, NonPositiveParameter, ValueError) as err:
        log.error("config error: %s", err)
        return EXIT_CONFIG
    except OSError as err:
        log.error("cannot read config: %s", err)
        return EXIT_IO
    for key, value in sorted(cfg.resolved.items()):
        log.info("resolved %s = %s", key, value)

    try:
        if args.command == "verify":
            checks = verify_mod.run_checks(cfg, seed=args.seed)
            for check in checks:
                print(check.line())
            return 0 if verify_mod.all_passed(checks) else EXIT_VERIFY
        if args.command == "delay":
            header, body = _delay_rows(cfg, single_power=args.pump_power is not None)
        else:
            header, body = _response_rows(cfg, with_phase=args.command == "phase")
    except ModelError as err:
        log.error("solver error: %s", err)
        return EXIT_SOLVER

    out = args.out or cfg.output_path or f"{args.command}.csv"
    try:
        write_csv(out, header, body)
        try:
            write_sidecar(sidecar_path(out), _provenance(cfg, args, args.command))
        except OSError:
            try:
                os.unlink(out)
            except OSError:
                pass
            raise
    except OSError as err:
        log.error("cannot write output: %s", err)
        return EXIT_IO
    log.info("wrote %d rows to %s", len(body), out)
    return 0


def main():
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s", stream=sys.stderr)
    sys.exit(run())


if __name__ == "__main__":
    main()
