#!/usr/bin/env python3
"""Transport renormalization sweeps over pump momentum and dephasing."""

import sys

import numpy as np

from poltrans.cli import run_scenario
from poltrans.config import loads_config


def main(out_root="out/sweeps", threads="1"):
    kps = ",".join(str(k) for k in (np.pi / 4, np.pi / 2, 3 * np.pi / 4, np.pi))
    gammas = ",".join(str(0.01 * i / 8) for i in range(1, 9))
    for scenario, axis in (("sweep-momentum", kps), ("sweep-dephasing", gammas)):
        cfg = loads_config(
            f"scenario = {scenario}\n"
            "model.gamma_phi = 0.005\n"
            f"sweep.values = {axis}\n"
            f"threads = {threads}\n"
            f"output.dir = {out_root}/{scenario}\n"
        )
        for path in run_scenario(cfg):
            print(path)


if __name__ == "__main__":
    main(*sys.argv[1:])
