"""Witness primes q for random prime sets S, with the norm check where it is affordable."""

import argparse
import random
import sys
from dataclasses import dataclass

from cmnorm.analysis import find_witness
from cmnorm.arith import primes_upto
from cmnorm.quadforms import class_number, make_discriminant


@dataclass
class Config:
    trials: int = 20
    max_prime: int = 30
    max_size: int = 4
    seed: int = 20261016


def run(cfg: Config) -> int:
    rng = random.Random(cfg.seed)
    pool = primes_upto(cfg.max_prime)
    failures = 0
    for _ in range(cfg.trials):
        s = sorted(rng.sample(pool, rng.randint(1, min(cfg.max_size, len(pool)))))
        w = find_witness(s)
        h = class_number(make_discriminant(-w.q)) if w.q < 10**9 else None
        coprime = "unchecked" if w.coprime is None else w.coprime
        failures += not w.all_split or w.coprime is False
        print(f"S={s!s:20s} q={w.q:<12d} h={h!s:5s} split={w.all_split} coprime={coprime}")
    return 1 if failures else 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    for name, default in vars(Config()).items():
        ap.add_argument("--" + name.replace("_", "-"), type=int, default=default)
    sys.exit(run(Config(**vars(ap.parse_args()))))
