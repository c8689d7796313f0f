"""Connectivity of descending links over a grid of (k, l).

Prints components and reduced Betti numbers (exact, via Smith normal form)
for each family, which shows where the connectivity bounds start to bite.

    python scripts/link_census.py --k 2 8 --l 1 5 --degree 1
"""

import argparse
import json
from dataclasses import asdict, dataclass

from qdg.complexes import abstract_descending_link
from qdg.topology import homology


@dataclass
class CensusConfig:
    k_min: int = 2
    k_max: int = 8
    l_min: int = 1
    l_max: int = 5
    degree: int = 1
    families: tuple = ("QF", "QT", "QV")
    max_top_simplices: int = 20000


def census(cfg: CensusConfig):
    for fam in cfg.families:
        for k in range(cfg.k_min, cfg.k_max + 1):
            for l in range(cfg.l_min, cfg.l_max + 1):
                K = abstract_descending_link(k, l, fam, max_dim=cfg.degree + 1)
                if K.count(cfg.degree + 1) > cfg.max_top_simplices:
                    yield {"family": fam, "k": k, "l": l, "f_vector": K.f_vector(), "skipped": True}
                    continue
                rep = homology(K, cfg.degree, "snf")
                yield {"family": fam, "k": k, "l": l, "f_vector": K.f_vector(),
                       "components": rep.components, "betti": rep.betti, "torsion": rep.torsion}


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--k", type=int, nargs=2, default=[2, 8])
    ap.add_argument("--l", type=int, nargs=2, default=[1, 5])
    ap.add_argument("--degree", type=int, default=1)
    ap.add_argument("--families", nargs="+", default=["QF", "QT", "QV"])
    ap.add_argument("--json", action="store_true", help="one JSON object per line")
    a = ap.parse_args()
    cfg = CensusConfig(a.k[0], a.k[1], a.l[0], a.l[1], a.degree, tuple(a.families))
    if a.json:
        print(json.dumps({"config": asdict(cfg)}))
    for row in census(cfg):
        if a.json:
            print(json.dumps(row), flush=True)
        elif row.get("skipped"):
            print(f"{row['family']}({row['k']},{row['l']}) f={row['f_vector']} skipped (too large)")
        else:
            print(f"{row['family']}({row['k']},{row['l']}) f={row['f_vector']} "
                  f"components={row['components']} betti={row['betti']} torsion={row['torsion']}",
                  flush=True)


if __name__ == "__main__":
    main()
