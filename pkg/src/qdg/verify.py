"""Connectivity checks of descending links at the bounds k >= 3n+5 (QF, QT) or
k >= 4n+5 (QV) and l >= 2n+3."""

from __future__ import annotations

import time
from dataclasses import dataclass

from .complexes import abstract_descending_link
from .topology import check_n_connected


def link_bounds(family: str, n: int) -> tuple[int, int]:
    family = family.upper()
    k = (4 * n + 5) if family == "QV" else (3 * n + 5)
    return k, 2 * n + 3


def default_mode(family: str, n: int) -> str:
    # QV at n >= 1 is too large for the Tietze pass to be meaningful at desk scale
    return "homology-only" if family.upper() == "QV" and n >= 1 else "strict"


@dataclass(frozen=True)
class VerificationPlan:
    family: str
    n: int
    k: int
    l: int
    mode: str
    exploratory: bool = False
    method: str = "auto"

    @classmethod
    def make(cls, family: str, n: int, k: int | None = None, l: int | None = None,
             mode: str | None = None, override: bool = False, method: str = "auto"):
        family = family.upper()
        if family not in ("QF", "QT", "QV"):
            raise ValueError(f"unknown family {family!r}")
        if n < 0:
            raise ValueError("n must be nonnegative")
        bk, bl = link_bounds(family, n)
        k = bk if k is None else k
        l = bl if l is None else l
        below = k < bk or l < bl
        if below and not override:
            raise ValueError(
                f"(k, l) = ({k}, {l}) is below the bound ({bk}, {bl}) for {family} at n={n}; "
                "pass --override for an exploratory run"
            )
        return cls(family, n, k, l, mode or default_mode(family, n), below, method)

    def run(self) -> dict:
        t0 = time.perf_counter()
        K = abstract_descending_link(self.k, self.l, self.family, max_dim=self.n + 1)
        rep = check_n_connected(K, self.n, self.mode, self.method)
        return {
            "exploratory": self.exploratory,
            "f_vector": K.f_vector(),
            "family": self.family,
            "k": self.k,
            "l": self.l,
            "mode": self.mode,
            "n": self.n,
            "report": rep.to_json(),
            "seconds": round(time.perf_counter() - t0, 3),
            "verdict": rep.verdict,
        }


def default_table(ns=(0, 1)) -> list[VerificationPlan]:
    return [VerificationPlan.make(f, n) for n in ns for f in ("QF", "QT", "QV")]
