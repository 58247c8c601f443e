"""Supersingular j-invariants over F_{p^2} for every prime p up to p_max.

Each census is compared with the classical count floor(p/12) + {0,1,1,2}
indexed by p mod 12 (p >= 5).
"""

import argparse
import sys
import time
from dataclasses import dataclass

from cmnorm.arith import primes_upto
from cmnorm.ffcurves import ss_census


@dataclass
class Config:
    p_max: int = 47
    representatives: bool = False


def expected_count(p: int) -> int | None:
    if p < 5:
        return 1
    return p // 12 + {1: 0, 5: 1, 7: 1, 11: 2}[p % 12]


def run(cfg: Config) -> int:
    bad = 0
    for p in primes_upto(cfg.p_max):
        t0 = time.perf_counter()
        c = ss_census(p, exhaustive=False if cfg.representatives and p > 5 else None)
        dt = time.perf_counter() - t0
        ok = len(c.js) == expected_count(p)
        bad += not ok
        mode = "all curves" if c.exhaustive else "one per j"
        vals = sorted(c.values(), key=lambda v: (isinstance(v, str), str(v).zfill(8)))
        print(f"p={p:2d}  {mode:10s} curves={c.curves:>9d}  {dt:6.2f}s  {'ok ' if ok else 'BAD'} {vals}")
    return 1 if bad else 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p-max", type=int, default=Config.p_max)
    ap.add_argument("--representatives", action="store_true", help="one curve per j for p > 5")
    sys.exit(run(Config(**vars(ap.parse_args()))))
