"""Disc cover times on square, triangular and honeycomb pieces against N (ln N)^2 C_L."""

import argparse
import math
from dataclasses import dataclass

import numpy as np

from covertime.lattice_walk import LatticeSpec, cell_area, cover_time_lattice, lattice_site_count
from covertime.predictors import lattice_constant
from covertime.rng import substream_seed


@dataclass
class LatticeConfig:
    kinds: tuple = ("square-plane", "triangular", "honeycomb")
    radii: tuple = (10, 20, 40)
    replicates: int = 50
    master_seed: int = 7


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--radii", type=float, nargs="+", default=[10, 20, 40])
    ap.add_argument("--replicates", type=int, default=50)
    a = ap.parse_args()
    cfg = LatticeConfig(radii=tuple(a.radii), replicates=a.replicates)

    print("kind,rho,sites,ratio_to_C_L,stderr")
    for kind in cfg.kinds:
        # every lattice here has isotropic unit steps, so the step covariance is I/2
        c_l = lattice_constant(cell_area(kind), np.eye(2) / 2)
        for rho in cfg.radii:
            sites = lattice_site_count(kind, rho)
            scale = sites * math.log(sites) ** 2 * c_l
            vals = np.array([cover_time_lattice(LatticeSpec(kind, 1), rho, substream_seed(cfg.master_seed, i))
                             for i in range(cfg.replicates)]) / scale
            print(f"{kind},{rho},{sites},{vals.mean():.4f},{vals.std(ddof=1) / math.sqrt(vals.size):.4f}")


if __name__ == "__main__":
    main()
