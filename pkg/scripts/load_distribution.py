"""Sorted Load(m) per graph family at a fixed size (the data behind a load-balance plot).

    python3 scripts/load_distribution.py --n 16 > loads.csv
"""

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from markovtensor import generators
from markovtensor.centrality import load, load_skew
from markovtensor.fundamental import fundamental_tensor, normalize_tensor
from markovtensor.graph import transition_matrix


@dataclass(frozen=True)
class Config:
    n: int = 16
    seed: int = 0


def families(cfg: Config):
    side = int(round(cfg.n ** 0.5))
    rng = np.random.default_rng(cfg.seed)
    return {
        "star": generators.star(cfg.n),
        "binary_tree": generators.binary_tree(cfg.n),
        "path": generators.path(cfg.n),
        "grid": generators.grid(side, cfg.n // side),
        "random": generators.random_connected_undirected(cfg.n, rng, weighted=False),
        "cycle": generators.cycle(cfg.n),
        "complete": generators.complete(cfg.n),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=Config.n)
    ap.add_argument("--seed", type=int, default=Config.seed)
    cfg = Config(**vars(ap.parse_args(argv)))
    out = sys.stdout
    out.write("family,rank,load\n")
    skews = {}
    for name, g in families(cfg).items():
        loads = load(normalize_tensor(fundamental_tensor(transition_matrix(g).with_stationary())))
        skews[name] = load_skew(loads)
        for rank, v in enumerate(np.sort(loads)[::-1], 1):
            out.write(f"{name},{rank},{v:.12g}\n")
    for name, s in sorted(skews.items(), key=lambda kv: -kv[1]):
        sys.stderr.write(f"{name:12s} peak/mean load {s:.3f}\n")


if __name__ == "__main__":
    main()
