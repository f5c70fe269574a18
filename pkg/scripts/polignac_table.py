"""Tabulate how many prime pairs (p, p+n) lie below a bound, for even n.

    python3 scripts/polignac_table.py --bounds 1000 10000 100000 --max-gap 12

Prints one CSV block per bound.  Growing counts are evidence, not proof, that
the corresponding shift has infinite domain on the primes.
"""

import argparse
import time
from dataclasses import dataclass, field

from ptalg.extensions import polignac_csv, polignac_table


@dataclass
class Config:
    bounds: list = field(default_factory=lambda: [1_000, 10_000, 100_000])
    max_gap: int = 12


def main(cfg: Config) -> None:
    for N in cfg.bounds:
        t0 = time.perf_counter()
        rows = polignac_table(N, cfg.max_gap)
        print(f"# N = {N} ({time.perf_counter() - t0:.2f} s)")
        print(polignac_csv(rows), end="")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--bounds", type=int, nargs="+", default=Config().bounds)
    ap.add_argument("--max-gap", type=int, default=Config.max_gap)
    a = ap.parse_args()
    main(Config(a.bounds, a.max_gap))
