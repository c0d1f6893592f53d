"""Time the three tensor routes against one inversion per target.

    python3 scripts/tensor_timing.py --sizes 50 100 200 400
"""

import argparse
import time
from dataclasses import dataclass, field

import numpy as np
from threadpoolctl import threadpool_limits

from markovtensor import generators
from markovtensor.fundamental import fundamental_tensor
from markovtensor.graph import transition_matrix


@dataclass(frozen=True)
class Config:
    sizes: list = field(default_factory=lambda: [50, 100, 200])
    repeats: int = 3
    threads: int = 1
    seed: int = 0


def best_of(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def per_target(p):
    n = p.n
    eye = np.eye(n - 1)
    for t in range(n):
        keep = np.r_[0:t, t + 1:n]
        np.linalg.inv(eye - p.p[np.ix_(keep, keep)])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=Config().sizes)
    ap.add_argument("--repeats", type=int, default=Config.repeats)
    ap.add_argument("--threads", type=int, default=Config.threads)
    ap.add_argument("--seed", type=int, default=Config.seed)
    cfg = Config(**vars(ap.parse_args(argv)))
    rng = np.random.default_rng(cfg.seed)
    print("n,route,seconds,speedup_vs_per_target")
    with threadpool_limits(cfg.threads):
        for n in cfg.sizes:
            p = transition_matrix(generators.random_strongly_connected(n, rng)).with_stationary()
            base = best_of(lambda: per_target(p), cfg.repeats)
            print(f"{n},per_target,{base:.6f},1.0")
            for route in ("lp", "l", "z"):
                t = best_of(lambda: fundamental_tensor(p, route=route, materialize=True), cfg.repeats)
                print(f"{n},{route},{t:.6f},{base / t:.2f}")


if __name__ == "__main__":
    main()
