#!/usr/bin/env python3
"""Spatially resolved differential-transmission maps across probe delays."""

import sys

from poltrans.cli import run_scenario
from poltrans.config import loads_config


def main(out_dir="out/pump_probe"):
    cfg = loads_config(
        "scenario = pump-probe\n"
        "model.gamma_phi = 0.005\n"
        "delays.values = -600,-200,200,600\n"
        f"output.dir = {out_dir}\n"
    )
    for path in run_scenario(cfg):
        print(path)


if __name__ == "__main__":
    main(*sys.argv[1:])
