"""Run parameters for the acceptance suite and the experiment scripts."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field


@dataclass(frozen=True)
class ConfluenceConfig:
    diagrams: int = 1000
    max_transistors: int = 12
    orders: int = 5
    seed: int = 0
    dipole_rate: float = 0.5


@dataclass(frozen=True)
class GroupLawConfig:
    triples: int = 200
    caret_budget: int = 6
    eval_depth: int = 6
    seed: int = 100


@dataclass(frozen=True)
class KernelConfig:
    pairs: int = 200
    kernel_elements: int = 50
    kernel_carets: int = 4
    caret_budget: int = 6
    support_slack: int = 4
    seed: int = 200


@dataclass(frozen=True)
class IntersectionConfig:
    samples: int = 100
    max_size: int = 3
    targets: tuple = (("QV", 9, 5), ("QF", 8, 5))
    seed: int = 300


@dataclass(frozen=True)
class MembershipConfig:
    elements: int = 300
    caret_budget: int = 5
    seed: int = 400
    oracle_transistors: int = 4
    oracle_tops: tuple = ("x", "xx", "xxx")
    full_perm_limit: int = 5
    sampled_perms: int = 24


@dataclass(frozen=True)
class HomologyOracleConfig:
    matrices: int = 60
    max_size: int = 6
    entry_range: int = 6
    seed: int = 500


@dataclass(frozen=True)
class AcceptanceConfig:
    confluence: ConfluenceConfig = field(default_factory=ConfluenceConfig)
    group_laws: GroupLawConfig = field(default_factory=GroupLawConfig)
    kernel: KernelConfig = field(default_factory=KernelConfig)
    intersections: IntersectionConfig = field(default_factory=IntersectionConfig)
    membership: MembershipConfig = field(default_factory=MembershipConfig)
    homology: HomologyOracleConfig = field(default_factory=HomologyOracleConfig)
    link_k_max: int = 4
    link_l_max: int = 3
    tietze_budget: int = 10**6

    def to_json(self) -> dict:
        return asdict(self)
