"""Recompute N(j(-3f^2)) for f = 1..f_max, time each row, and diff against a reference file."""

import argparse
import csv
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from cmnorm.analysis import norm_of_singular_modulus
from cmnorm.cli import read_table
from cmnorm.quadforms import class_number

ROOT = Path(__file__).resolve().parents[1]


@dataclass
class Config:
    f_max: int = 50
    reference: Path = ROOT / "tests" / "data" / "eisenstein_norms.txt"
    out: Path | None = None
    cache_dir: str | None = None


def parse_args(argv=None) -> Config:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--f-max", type=int, default=Config.f_max)
    ap.add_argument("--reference", type=Path, default=Config.reference)
    ap.add_argument("--out", type=Path, help="write f, class number, seconds, factorization as CSV")
    ap.add_argument("--cache-dir")
    return Config(**vars(ap.parse_args(argv)))


def run(cfg: Config) -> int:
    ref = read_table(cfg.reference) if cfg.reference.exists() else {}
    rows, mismatches = [], 0
    t_total = time.perf_counter()
    for f in range(1, cfg.f_max + 1):
        t0 = time.perf_counter()
        rep = norm_of_singular_modulus(-3 * f * f, cfg.cache_dir)
        dt = time.perf_counter() - t0
        fac, h = rep.factorization, class_number(rep.disc)
        status = "" if f not in ref else ("ok" if ref[f] == fac else "MISMATCH")
        mismatches += status == "MISMATCH"
        rows.append((f, h, f"{dt:.3f}", str(fac)))
        print(f"{f:3d}  h={h:<3d} {dt:7.3f}s  {status:8s} {fac}")
    print(f"total {time.perf_counter() - t_total:.2f}s, {mismatches} mismatches against {len(ref)} reference rows")
    if cfg.out:
        with cfg.out.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["f", "h", "seconds", "norm"])
            w.writerows(rows)
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(run(parse_args()))
