"""Rank of truncated operators across growing windows.

    python3 scripts/rank_profiles.py
    python3 scripts/rank_profiles.py --space augmented --expr "P a - a P" --radii 3 4 5 6

A constant tail suggests finite rank (a compact perturbation); steady growth
suggests the operator is not compact.  Nothing here is a proof.
"""

import argparse
from dataclasses import dataclass, field

from ptalg.operators import OperatorExpr, default_environment, rank_profile
from ptalg.spaces import space_from_name

DEFAULT_CASES = [
    ("naturals", "t_1 t_1^* - 1", [4, 8, 12, 16]),
    ("naturals", "t_1^3 (t_1^*)^2 - t_1", [6, 10, 14, 18]),
    ("naturals", "t_1 - t_1^2", [4, 8, 12, 16]),
    ("punctured", "s_1 s_1^* - 1", [4, 8, 12, 16]),
    ("augmented", "P a - a P", [3, 4, 5, 6]),
    ("augmented", "P b - b P", [3, 4, 5, 6]),
    ("augmented", "P a^* a P - P", [3, 4, 5, 6]),
]


@dataclass
class Config:
    cases: list = field(default_factory=lambda: list(DEFAULT_CASES))
    rank: int = 2


def main(cfg: Config) -> None:
    print("space,expression,radius,rank")
    for space_name, text, radii in cfg.cases:
        space = space_from_name(space_name, cfg.rank)
        prof = rank_profile(OperatorExpr.parse(text), default_environment(space), radii)
        for R, r in prof.ranks:
            print(f"{space_name},{text},{R},{r}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--space")
    ap.add_argument("--expr")
    ap.add_argument("--radii", type=int, nargs="+", default=[3, 4, 5, 6])
    ap.add_argument("--rank", type=int, default=2)
    a = ap.parse_args()
    cases = [(a.space, a.expr, a.radii)] if a.expr else list(DEFAULT_CASES)
    main(Config(cases, a.rank))
