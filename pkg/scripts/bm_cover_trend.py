"""Brownian eps-cover time of the torus against (2/pi)(ln eps)^2, with and without the marking margin."""

import argparse
import math
from dataclasses import dataclass

import numpy as np

from covertime.predictors import bm_cover
from covertime.rng import substream_seed
from covertime.torus_bm import BmConfig, cover_time_bm


@dataclass
class BmTrendConfig:
    radii: tuple = (0.05, 0.02)
    replicates: int = 20
    master_seed: int = 5
    zero_margin: bool = False


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--radii", type=float, nargs="+", default=[0.05, 0.02])
    ap.add_argument("--replicates", type=int, default=20)
    ap.add_argument("--seed", type=int, default=5)
    ap.add_argument("--zero-margin", action="store_true")
    a = ap.parse_args()
    cfg = BmTrendConfig(tuple(a.radii), a.replicates, a.seed, a.zero_margin)

    print("eps,ratio,stderr")
    for eps in cfg.radii:
        dt = (eps / 8) ** 2
        vals = np.array([
            cover_time_bm(eps, BmConfig(dt, substream_seed(cfg.master_seed, i)), math.ceil(4 / eps),
                          margin=0.0 if cfg.zero_margin else None)
            for i in range(cfg.replicates)
        ]) / bm_cover(eps)
        print(f"{eps},{vals.mean():.4f},{vals.std(ddof=1) / math.sqrt(vals.size):.4f}")


if __name__ == "__main__":
    main()
