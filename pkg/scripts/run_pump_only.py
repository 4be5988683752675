#!/usr/bin/env python3
"""Pump-only population dynamics with and without dephasing.

Produces the space-time photon/molecular population maps (heatmap inputs
for the plotting frontend) for gamma_phi = 0 and gamma_phi = kappa/2.
"""

import sys
from pathlib import Path

from poltrans.cli import run_scenario
from poltrans.config import loads_config


def main(out_root="out/pump_only"):
    for tag, gamma in (("gamma0", 0.0), ("gamma_half", 0.005)):
        cfg = loads_config(
            "scenario = pump-only\n"
            f"model.gamma_phi = {gamma}\n"
            "integrator.t_end = 1300.0\n"
            f"output.dir = {out_root}/{tag}\n"
        )
        written = run_scenario(cfg)
        print(f"[{tag}] wrote {len(written)} files under {out_root}/{tag}")


if __name__ == "__main__":
    main(*sys.argv[1:])
