"""Connectivity table of descending links at the bounds, plus optional
exploratory rows below them.

    python scripts/verify_bounds.py --ns 0 1 --below 1 --out results/bounds.json
"""

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from qdg.verify import VerificationPlan, link_bounds


@dataclass
class BoundsConfig:
    ns: list = field(default_factory=lambda: [0, 1])
    families: list = field(default_factory=lambda: ["QF", "QT", "QV"])
    below: int = 0  # also run (k - i, l) and (k, l - i) for i = 1..below
    out: str | None = None


def plans(cfg: BoundsConfig):
    for n in cfg.ns:
        for fam in cfg.families:
            yield VerificationPlan.make(fam, n)
            k, l = link_bounds(fam, n)
            for i in range(1, cfg.below + 1):
                if k - i >= 1:
                    yield VerificationPlan.make(fam, n, k - i, l, override=True)
                if l - i >= 0:
                    yield VerificationPlan.make(fam, n, k, l - i, override=True)


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--ns", type=int, nargs="+", default=[0, 1])
    ap.add_argument("--families", nargs="+", default=["QF", "QT", "QV"])
    ap.add_argument("--below", type=int, default=0)
    ap.add_argument("--out")
    cfg = BoundsConfig(**vars(ap.parse_args()))
    rows = []
    for plan in plans(cfg):
        row = plan.run()
        rows.append(row)
        rep = row["report"]
        tag = "exploratory" if plan.exploratory else "bound"
        print(f"{plan.family} n={plan.n} (k,l)=({plan.k},{plan.l}) {tag:11s} {plan.mode:13s} "
              f"f={row['f_vector']} betti={rep['betti']} pi1={rep['pi1']} -> {row['verdict']} "
              f"[{row['seconds']}s]", flush=True)
    if cfg.out:
        Path(cfg.out).parent.mkdir(parents=True, exist_ok=True)
        Path(cfg.out).write_text(json.dumps({"config": asdict(cfg), "rows": rows}, indent=1, sort_keys=True))
    ok = all(r["verdict"] == "pass" for r in rows if not r["exploratory"])
    sys.exit(0 if ok else 2)


if __name__ == "__main__":
    main()
