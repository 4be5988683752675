"""Command-line entry point: scenario dispatch and artifact writing.

    poltrans [scenario] [--config FILE] [--set key=value ...]
             [--out DIR] [--format text|binary|both] [--threads N]

Every run writes a manifest with the complete configuration echo so any
artifact can be reproduced; data files are byte-identical across reruns
of the same configuration.  Exit codes: 0 success, 2 configuration
error, 3 numerical error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .config import (
    SCENARIOS,
    ScenarioConfig,
    build_config,
    apply_overrides,
    config_lines,
    load_config,
    parse_document,
)
from .errors import ConfigError, IoError, NumericalError
from .meanfield import pump_only
from .model import (
    exciton_fraction_lp,
    group_velocity_lp,
    omega_cavity,
    polariton_frequencies,
)
from .observables import beer_lambert_check, populations
from .pumpprobe import delay_point
from .records import SpatioTemporalRecord
from .serialize import (
    export_record,
    export_spectrum,
    export_table,
    write_text,
    write_binary,
)
from .transport import sweep_dephasing, sweep_momentum


def _pump_only_record(cfg: ScenarioConfig) -> SpatioTemporalRecord:
    rec = pump_only(cfg.model, cfg.pump, cfg.integrator)
    rec.meta["scenario"] = cfg.scenario
    return rec


def _run_dispersion(cfg, out, lines):
    k = cfg.model.grid.momenta
    up, lp = polariton_frequencies(k, cfg.model)
    table = {
        "k_per_um": k,
        "omega_cavity_eV": omega_cavity(k, cfg.model),
        "omega_lp_eV": lp,
        "omega_up_eV": up,
        "exciton_fraction_lp": exciton_fraction_lp(k, cfg.model),
        "v_grp_um_per_fs": group_velocity_lp(k, cfg.model),
    }
    return [export_table(out / "dispersion.tsv", table, lines)]


def _run_pump_only(cfg, out, lines):
    rec = _pump_only_record(cfg)
    written = export_record(rec, out / "record", cfg.formats())
    n_ph, n_m = populations(rec)
    pops = SpatioTemporalRecord(
        times=rec.times,
        fields={"photon_population": n_ph, "molecular_population": n_m},
        meta=rec.meta,
    )
    written += export_record(pops, out / "populations", cfg.formats())
    return written


def _run_pump_probe(cfg, out, lines):
    written = []
    scale = cfg.pump.amplitude**2 * cfg.probe.amplitude**2
    rows = []
    for i, delay in enumerate(cfg.delays):
        point = delay_point(
            cfg.model,
            cfg.pump.k_center,
            delay,
            dt=cfg.integrator.dt,
            snapshot_stride=cfg.integrator.snapshot_stride,
            window_fs=cfg.window_fs,
            apodization_tau=cfg.apodization_tau,
            laplacian=cfg.integrator.laplacian,
            eta_pump=cfg.pump.amplitude,
            eta_probe=cfg.probe.amplitude,
            sigma_t=cfg.pump.sigma_t,
            sigma_r=cfg.pump.sigma_r,
            pump_center=cfg.pump.center,
            probe_center=cfg.probe.center,
            omega=cfg.pump.omega_drive,
        )
        spectrum = point.spectrum
        # physical signal carries the external amplitude factors
        spectrum.values = scale * spectrum.values
        tag = f"{int(round(delay)):+05d}"
        written += export_spectrum(
            spectrum,
            out / f"deltaT_{tag}",
            cfg.formats(),
            meta_lines=[*lines, f"delay_fs = {delay!r}"],
        )
        prof = scale * point.profile
        positions = cfg.model.grid.positions
        i_max = int(np.argmax(prof))
        rows.append((delay, positions[i_max], float(prof.sum())))
    table = {
        "delay_fs": [r[0] for r in rows],
        "peak_position_um": [r[1] for r in rows],
        "integrated_signal": [r[2] for r in rows],
    }
    written.append(export_table(out / "delays.tsv", table, lines))
    return written


def _sweep_table(res):
    return {
        "axis_value": res.axis,
        "v_peak_um_per_fs": [f.v_peak if f else np.nan for f in res.fits],
        "v_rms_um_per_fs": [f.v_rms if f else np.nan for f in res.fits],
        "v_grp_um_per_fs": [f.v_grp if f else np.nan for f in res.fits],
        "renormalization": res.renormalization,
        "exciton_fraction": res.exciton_fractions,
    }


def _run_sweep_momentum(cfg, out, lines):
    res = sweep_momentum(
        cfg.sweep_values,
        cfg.model,
        cfg.model.gamma_phi,
        delays=cfg.delays,
        workers=cfg.threads,
        dt=cfg.integrator.dt,
        snapshot_stride=cfg.integrator.snapshot_stride,
        window_fs=cfg.window_fs,
        laplacian=cfg.integrator.laplacian,
    )
    _check_sweep(res)
    return [export_table(out / "sweep_momentum.tsv", _sweep_table(res), lines)]


def _run_sweep_dephasing(cfg, out, lines):
    res = sweep_dephasing(
        cfg.sweep_values,
        cfg.pump.k_center,
        cfg.model,
        delays=cfg.delays,
        workers=cfg.threads,
        dt=cfg.integrator.dt,
        snapshot_stride=cfg.integrator.snapshot_stride,
        window_fs=cfg.window_fs,
        laplacian=cfg.integrator.laplacian,
    )
    _check_sweep(res)
    return [export_table(out / "sweep_dephasing.tsv", _sweep_table(res), lines)]


def _check_sweep(res):
    failed = [f"{a}: {e}" for a, e in zip(res.axis, res.errors) if e]
    if failed:
        print("warning: failed sweep points:", "; ".join(failed), file=sys.stderr)


def _run_beer_lambert(cfg, out, lines):
    rec = _pump_only_record(cfg)
    omega = cfg.beer_omega
    if omega is None:
        omega = polariton_frequencies(cfg.pump.k_center, cfg.model)[1]
    sim, pred = beer_lambert_check(rec, omega, cfg.beer_fit)
    n_ph, _ = populations(rec)
    env = n_ph.max(axis=0)
    written = [
        export_table(
            out / "beer_envelope.tsv",
            {"position_um": cfg.model.grid.positions, "photon_envelope": env},
            lines,
        ),
        export_table(
            out / "beer_summary.tsv",
            {
                "omega_eV": [omega],
                "sim_slope_per_um": [sim],
                "pred_slope_per_um": [pred],
                "ratio": [sim / pred if pred != 0 else np.nan],
            },
            lines,
        ),
    ]
    return written


_RUNNERS = {
    "dispersion": _run_dispersion,
    "pump-only": _run_pump_only,
    "pump-probe": _run_pump_probe,
    "sweep-momentum": _run_sweep_momentum,
    "sweep-dephasing": _run_sweep_dephasing,
    "beer-lambert": _run_beer_lambert,
}


def run_scenario(cfg: ScenarioConfig) -> list:
    """Execute the configured scenario; returns the written file paths."""
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    lines = config_lines(cfg)
    start = time.time()
    written = _RUNNERS[cfg.scenario](cfg, out, lines)
    manifest = {
        "scenario": cfg.scenario,
        "version": __version__,
        "wall_time_s": round(time.time() - start, 3),
        "config": dict(line.split(" = ", 1) for line in lines),
        "files": [str(p) for p in written],
    }
    manifest_path = out / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return written + [manifest_path]


def _build_cli_config(args) -> ScenarioConfig:
    if args.config:
        raw = parse_document(Path(args.config).read_text(encoding="utf-8"))
    else:
        raw = {}
    overrides = list(args.set or [])
    if args.scenario_flag and args.scenario_pos and (
        args.scenario_flag != args.scenario_pos
    ):
        raise ConfigError(
            f"conflicting scenarios {args.scenario_pos!r} and {args.scenario_flag!r}"
        )
    scenario = args.scenario_flag or args.scenario_pos
    if scenario:
        overrides.append(f"scenario={scenario}")
    if args.out:
        overrides.append(f"output.dir={args.out}")
    if args.format:
        overrides.append(f"output.format={args.format}")
    if args.threads:
        overrides.append(f"threads={args.threads}")
    return build_config(apply_overrides(raw, overrides))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="poltrans",
        description="polariton transport and pump-probe microscopy simulator",
    )
    parser.add_argument("scenario_pos", nargs="?", choices=SCENARIOS,
                        metavar="scenario", help="scenario to run")
    parser.add_argument("--config", help="path to a key=value config file")
    parser.add_argument("--scenario", dest="scenario_flag", choices=SCENARIOS)
    parser.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="override a config key (repeatable)")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--format", choices=("text", "binary", "both"))
    parser.add_argument("--threads", type=int)
    parser.add_argument("--version", action="version", version=__version__)
    args = parser.parse_args(argv)

    try:
        cfg = _build_cli_config(args)
        written = run_scenario(cfg)
    except ConfigError as exc:
        _report_error(exc, 2)
        return 2
    except NumericalError as exc:
        _report_error(exc, 3)
        return 3
    except (IoError, OSError) as exc:
        _report_error(exc, 4)
        return 4
    for path in written:
        print(path)
    return 0


def _report_error(exc, code):
    payload = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    print(json.dumps(payload), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
