"""Mean torus cover time against (4/pi) n^2 (ln n)^2 for a range of side lengths."""

import argparse
import math
from dataclasses import dataclass

import numpy as np

from covertime.lattice_walk import cover_time_torus
from covertime.predictors import torus_cover
from covertime.rng import substream_seed


@dataclass
class TrendConfig:
    sides: tuple = (16, 32, 64, 128)
    replicates: int = 100
    master_seed: int = 1


def run(cfg: TrendConfig):
    rows = []
    for n in cfg.sides:
        vals = np.array([cover_time_torus(n, substream_seed(cfg.master_seed + n, i)).cover_steps
                         for i in range(cfg.replicates)], dtype=float)
        pred = torus_cover(n)
        rows.append((n, vals.mean() / pred, vals.std(ddof=1) / math.sqrt(vals.size) / pred))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sides", type=int, nargs="+", default=[16, 32, 64, 128])
    ap.add_argument("--replicates", type=int, default=100)
    ap.add_argument("--seed", type=int, default=1)
    a = ap.parse_args()
    print("n,ratio,stderr")
    for n, q, se in run(TrendConfig(tuple(a.sides), a.replicates, a.seed)):
        print(f"{n},{q:.4f},{se:.4f}")


if __name__ == "__main__":
    main()
