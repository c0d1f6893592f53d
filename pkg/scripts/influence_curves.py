"""Spread versus k for greedy seed selection and the baseline rankers.

    python3 scripts/influence_curves.py --n 50 --kmax 10 --graphs 5 > spread.csv
"""

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from markovtensor import generators
from markovtensor.graph import extend_graph
from markovtensor.influence import BASELINES, baseline_rankers, c2greedy, spread_curve


@dataclass(frozen=True)
class Config:
    n: int = 50
    kmax: int = 10
    graphs: int = 5
    beta: float = 1.0
    random_repeats: int = 10
    seed: int = 0


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in vars(Config()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=type(default), default=default)
    cfg = Config(**vars(ap.parse_args(argv)))
    rng = np.random.default_rng(cfg.seed)
    sys.stdout.write("graph,method,k,spread\n")
    for gi in range(cfg.graphs):
        g = generators.random_strongly_connected(cfg.n, rng)
        ext = extend_graph(g, cfg.beta)
        curves = {"c2greedy": spread_curve(ext, c2greedy(ext, cfg.kmax).seeds)}
        for m in BASELINES:
            reps = cfg.random_repeats if m == "random" else 1
            runs = [spread_curve(ext, baseline_rankers(g, cfg.kmax, m, gi * 1000 + r)) for r in range(reps)]
            curves[m] = list(np.mean(runs, axis=0))
        for m, curve in curves.items():
            for k, v in enumerate(curve, 1):
                sys.stdout.write(f"{gi},{m},{k},{v:.12g}\n")


if __name__ == "__main__":
    main()
