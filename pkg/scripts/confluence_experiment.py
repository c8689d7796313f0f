"""Reduction statistics on seeded random diagrams over <x, a | x = xax>.

For each diagram, several random dipole-removal orders are compared by
canonical code; the script also records how many dipoles were removed and
how long reduction paths were.
"""

import argparse
import json
import random
import statistics
import time
from collections import Counter
from dataclasses import asdict

from qdg.config import ConfluenceConfig
from qdg.diagram import canonical_code
from qdg.generators import random_diagram
from qdg.presentation import QV_BASE
from qdg.rewriting import reduce


def run(cfg: ConfluenceConfig) -> dict:
    t0 = time.perf_counter()
    disagreements = 0
    steps = []
    shrink = Counter()
    for i in range(cfg.diagrams):
        rng = random.Random(cfg.seed + i)
        d = random_diagram(rng, cfg.max_transistors, QV_BASE, "x", cfg.dipole_rate)
        codes = set()
        for _ in range(cfg.orders):
            trace = []
            r = reduce(d, random.Random(rng.random()), trace)
            codes.add(canonical_code(r))
            steps.append(len(trace))
        disagreements += len(codes) != 1
        shrink[len(d.transistors) - len(r.transistors)] += 1
    return {
        "config": asdict(cfg),
        "disagreements": disagreements,
        "mean_steps": round(statistics.mean(steps), 3),
        "max_steps": max(steps),
        "transistors_removed": dict(sorted(shrink.items())),
        "seconds": round(time.perf_counter() - t0, 2),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--diagrams", type=int, default=1000)
    ap.add_argument("--max-transistors", type=int, default=12)
    ap.add_argument("--orders", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--dipole-rate", type=float, default=0.5)
    a = ap.parse_args()
    cfg = ConfluenceConfig(a.diagrams, a.max_transistors, a.orders, a.seed, a.dipole_rate)
    print(json.dumps(run(cfg), indent=1))


if __name__ == "__main__":
    main()
