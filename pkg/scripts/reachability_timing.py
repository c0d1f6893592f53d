"""Per-query latency of failure-conditioned reachability, cold and cached.

    python3 scripts/reachability_timing.py --n 1000 --failed 1 3 10
"""

import argparse
import time
from dataclasses import dataclass, field

import numpy as np

from markovtensor import generators
from markovtensor.graph import extend_graph
from markovtensor.reachability import build_oracle


@dataclass(frozen=True)
class Config:
    n: int = 1000
    failed: list = field(default_factory=lambda: [1, 3, 10])
    queries: int = 20_000
    degree: float = 4.0
    seed: int = 0


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=Config.n)
    ap.add_argument("--failed", type=int, nargs="+", default=Config().failed)
    ap.add_argument("--queries", type=int, default=Config.queries)
    ap.add_argument("--degree", type=float, default=Config.degree)
    ap.add_argument("--seed", type=int, default=Config.seed)
    cfg = Config(**vars(ap.parse_args(argv)))
    rng = np.random.default_rng(cfg.seed)
    g = generators.random_digraph(cfg.n, rng, density=cfg.degree / cfg.n)
    t0 = time.perf_counter()
    oracle = build_oracle(extend_graph(g))
    print(f"build,{time.perf_counter() - t0:.4f}s")
    print("failed,factor_seconds,query_microseconds,reachable_fraction,gap_ratio")
    for size in cfg.failed:
        failed = rng.choice(cfg.n, size=size, replace=False).tolist()
        dead = set(failed)
        pairs = [(int(s), int(t)) for s, t in rng.integers(0, cfg.n, (cfg.queries, 2))
                 if s not in dead and t not in dead]
        t0 = time.perf_counter()
        oracle.factor(failed)
        factor = time.perf_counter() - t0
        t0 = time.perf_counter()
        hits = sum(oracle.query_with_failures(s, t, failed) for s, t in pairs)
        per = (time.perf_counter() - t0) / len(pairs)
        print(f"{size},{factor:.6f},{per * 1e6:.2f},{hits / len(pairs):.3f},{oracle.gap(failed).ratio:.3g}")


if __name__ == "__main__":
    main()
