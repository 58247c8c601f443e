"""Command-line front end.

    cmnorm hilbert 23
    cmnorm table --f-max 50 --format csv
    cmnorm check claim235 --f-max 50
    cmnorm witness 2,3,5

Exit status: 0 when every check passes (or the command is informational),
1 when a check fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path

from . import analysis, lauter_viray
from .arith import Factorization, is_prime
from .classpoly import hilbert_class_poly
from .ffcurves import ss_census
from .quadforms import make_discriminant

DEFAULT_CACHE = "hd-cache"

CHECKS = ("mod3", "claim235", "squares", "conjecture", "lv-oracle", "j1728", "ss-census")

PROVENANCE = {
    "hilbert": "Hilbert class polynomial: monic, integral, degree = class number",
    "table": "norm factorizations of singular moduli of discriminant -3f^2",
    "mod3": "no prime = 1 mod 3 divides N(j) outside Q(sqrt-3); inside, only conductor primes",
    "claim235": "2, 3 and 5 divide N(j) for every order in Q(sqrt-3) of conductor f >= 2",
    "squares": "fundamental discriminants: p | N(j) implies p^2 | N(j) for p in {2, 3, 5}",
    "conjecture": "conductor p^n in Q(sqrt-3): v_p(N(j)) = 4 if p = 2, else 1",
    "lv-oracle": "product formula valuation at the conductor prime equals the direct valuation",
    "j1728": "N(j - 1728): no prime = 1 mod 4 outside Q(i); 2, 3, 7 divide it inside Q(i)",
    "ss-census": "unique supersingular j over F_p-bar for p = 2, 3, 5 (j = 0) and p = 7 (j = 1728)",
    "witness": "a prime q = -1 mod 8 and mod S makes every p in S split in Q(sqrt-q)",
    "cache": "class polynomial cache",
}


@dataclass
class OutputRecord:
    command: str
    inputs: dict
    result: dict
    status: str = "INFO"
    provenance: str = ""

    @property
    def violations(self) -> list[str]:
        return self.result.setdefault("violations", [])

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> OutputRecord:
        return cls(**json.loads(text))

    def to_text(self) -> str:
        head = f"[{self.status}] {self.command}"
        if self.inputs:
            head += " (" + ", ".join(f"{k}={v}" for k, v in sorted(self.inputs.items())) + ")"
        lines = [head, f"  claim: {self.provenance}"]
        for k, v in self.result.items():
            if k != "violations":
                lines.append(f"  {k}: {_fmt(v)}")
        for v in self.result.get("violations", []):
            lines.append(f"  VIOLATION {v}")
        return "\n".join(lines)


def _fmt(v) -> str:
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_fmt(x)}" for k, x in v.items()) + "}"
    if isinstance(v, list):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


class UsageError(Exception):
    pass


def _status(passed: bool) -> str:
    return "PASS" if passed else "FAIL"


def cmd_hilbert(D: int, cache_dir) -> OutputRecord:
    try:
        d = make_discriminant(-D)
    except ValueError as e:
        raise UsageError(str(e)) from e
    H = hilbert_class_poly(d, cache_dir)
    return OutputRecord(
        "hilbert",
        {"D": D},
        {"degree": H.degree, "polynomial": str(H), "coefficients": [str(c) for c in H.coeffs]},
        "INFO",
        PROVENANCE["hilbert"],
    )


def table_rows(f_max: int, jobs: int = 1, cache_dir=None) -> list[tuple[int, Factorization]]:
    discs = [make_discriminant(-3 * f * f) for f in range(1, f_max + 1)]
    reports = analysis.compute_norms(discs, analysis.Target.J, jobs, cache_dir)
    return [(r.disc.conductor, r.factorization) for r in reports]


def cmd_table(f_max: int, jobs: int, cache_dir, golden: str | None = None) -> OutputRecord:
    if f_max < 1:
        raise UsageError("--f-max must be >= 1")
    rows = table_rows(f_max, jobs, cache_dir)
    rec = OutputRecord(
        "table",
        {"f_max": f_max},
        {"rows": [{"f": f, "norm": str(fac)} for f, fac in rows]},
        "INFO",
        PROVENANCE["table"],
    )
    if golden:
        expected = read_table(Path(golden))
        for f, fac in rows:
            if f in expected and expected[f] != fac:
                rec.violations.append(f"f={f}: computed {fac}, golden {expected[f]}")
        missing = [f for f, _ in rows if f not in expected]
        rec.result["golden_rows_compared"] = len(rows) - len(missing)
        rec.status = _status(not rec.violations)
    return rec


def read_table(path: Path) -> dict[int, Factorization]:
    """Parse ``f: factorization`` lines or ``f,factorization`` CSV rows."""
    out = {}
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#") or line.startswith("f,"):
            continue
        sep = ":" if ":" in line else ","
        f, fac = line.split(sep, 1)
        out[int(f)] = Factorization.parse(fac)
    return out


def render_table(rec: OutputRecord, fmt: str) -> str:
    rows = rec.result["rows"]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["f", "norm"])
        for r in rows:
            w.writerow([r["f"], r["norm"]])
        return buf.getvalue().rstrip("\n")
    if fmt == "json":
        return rec.to_json()
    lines = [f"{r['f']}: {r['norm']}" for r in rows]
    lines += [f"VIOLATION {v}" for v in rec.violations]
    if rec.status != "INFO":
        lines.append(f"[{rec.status}] golden comparison")
    return "\n".join(lines)


def _report_record(name: str, rep: analysis.CheckReport, inputs: dict) -> OutputRecord:
    result = {"checked": rep.checked, "violations": [str(v) for v in rep.violations]}
    if rep.details:
        result["details"] = {str(k): list(v) if isinstance(v, tuple) else v for k, v in rep.details.items()}
    return OutputRecord(
        "check " + name,
        inputs,
        result,
        _status(rep.passed),
        PROVENANCE[name],
    )


def cmd_check(which: str, args, cache_dir) -> OutputRecord:
    jobs = args.jobs
    if which == "mod3":
        d_max = args.d_max or 1000
        return _report_record(which, analysis.check_mod3_obstruction(d_max, jobs, cache_dir), {"d_max": d_max})
    if which == "claim235":
        f_max = args.f_max or 50
        return _report_record(which, analysis.check_claim_235(f_max, jobs, cache_dir), {"f_max": f_max})
    if which == "squares":
        d_max = args.d_max or 1500
        return _report_record(which, analysis.check_square_divisibility(d_max, jobs, cache_dir), {"d_max": d_max})
    if which == "j1728":
        d_max = args.d_max or 1000
        return _report_record(which, analysis.check_j1728_obstruction(d_max, jobs, cache_dir), {"d_max": d_max})
    if which == "conjecture":
        f_max = args.f_max or 50
        results = [lauter_viray.conjecture_check(p, n, cache_dir) for p, n in lauter_viray.prime_powers_upto(f_max)]
        viol = [f"f={r.p}^{r.n}: v_{r.p} = {r.valuation}, expected {r.expected}" for r in results if not r.confirmed]
        return OutputRecord(
            "check conjecture",
            {"f_max": f_max},
            {"valuations": {str(r.p**r.n): r.valuation for r in results}, "violations": viol},
            _status(not viol),
            PROVENANCE[which],
        )
    if which == "lv-oracle":
        pairs = [(2, 2), (5, 2), (7, 2)]
        rows, viol = [], []
        for p, n in pairs:
            formula = lauter_viray.product_formula_valuation(lauter_viray.LVContext(p, n))
            direct = lauter_viray.direct_valuation(p, n, cache_dir)
            rows.append({"p": p, "n": n, "f": p**n, "formula": formula, "direct": direct})
            if formula != direct or formula != (4 if p == 2 else 1):
                viol.append(f"p={p}, n={n}: formula {formula}, direct {direct}")
        return OutputRecord(
            "check lv-oracle", {}, {"pairs": rows, "violations": viol}, _status(not viol), PROVENANCE[which]
        )
    if which == "ss-census":
        expected = {2: {0}, 3: {0}, 5: {0}, 7: {1728 % 7}}
        primes = args.primes or sorted(expected)
        census, viol = {}, []
        for p in primes:
            c = ss_census(p)
            census[str(p)] = sorted(c.values(), key=str)
            if p in expected and c.values() != expected[p]:
                viol.append(f"p={p}: census {sorted(c.values(), key=str)}, expected {sorted(expected[p])}")
        return OutputRecord(
            "check ss-census",
            {"primes": primes},
            {"census": census, "violations": viol},
            _status(not viol),
            PROVENANCE[which],
        )
    raise UsageError(f"unknown check {which!r}")


def cmd_witness(spec: str, cache_dir) -> OutputRecord:
    try:
        s = sorted({int(t) for t in spec.split(",") if t.strip()})
    except ValueError as e:
        raise UsageError(f"bad prime list {spec!r}") from e
    if not s:
        raise UsageError("S must be nonempty")
    bad = [p for p in s if not is_prime(p)]
    if bad:
        raise UsageError(f"not prime: {bad}")
    w = analysis.find_witness(s, cache_dir=cache_dir)
    viol = []
    if not w.all_split:
        viol.append(f"some prime of S does not split: {w.splitting_log}")
    if w.coprime is False:
        viol.append(f"norm of disc -{w.q} shares a prime with S")
    result = {
        "q": w.q,
        "symbols": {str(p): s_ for p, s_ in w.splitting_log},
        "coprime_to_S": "unchecked" if w.coprime is None else w.coprime,
        "violations": viol,
    }
    if w.norm_check is not None:
        result["norm"] = str(w.norm_check.norm.factorization)
    return OutputRecord("witness", {"S": s}, result, _status(not viol), PROVENANCE["witness"])


def cmd_cache(action: str, cache_dir: Path) -> OutputRecord:
    files = sorted(cache_dir.glob("hd_*.txt")) if cache_dir.exists() else []
    if action == "clear":
        for f in files:
            f.unlink()
    return OutputRecord(
        "cache " + action,
        {"dir": str(cache_dir)},
        {"files": len(files)},
        "INFO",
        PROVENANCE["cache"],
    )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache-dir", type=Path, default=None,
                        help="class polynomial cache (default $CMNORM_CACHE or ./hd-cache)")
    common.add_argument("--no-cache", action="store_true", help="do not read or write the cache")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="cmnorm", description="Singular moduli norm toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hilbert", parents=[common], help="Hilbert class polynomial of discriminant -D")
    p.add_argument("D", type=int)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("table", parents=[common], help="norm factorizations for discriminants -3f^2")
    p.add_argument("--f-max", type=int, default=50)
    p.add_argument("--golden", help="compare against a 'f: factorization' file")
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")

    p = sub.add_parser("check", parents=[common], help="run a verification")
    p.add_argument("which", choices=CHECKS)
    p.add_argument("--d-max", type=int)
    p.add_argument("--f-max", type=int)
    p.add_argument("--primes", type=lambda s: [int(t) for t in s.split(",")])
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("witness", parents=[common], help="non-S-unit witness discriminant")
    p.add_argument("S", help="comma-separated primes")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("cache", parents=[common], help="inspect or clear the cache")
    p.add_argument("action", choices=("info", "clear"))
    p.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    cache_dir = args.cache_dir or Path(os.environ.get("CMNORM_CACHE", DEFAULT_CACHE))
    use_cache = None if args.no_cache else cache_dir
    t0 = time.perf_counter()
    try:
        if args.command == "hilbert":
            rec = cmd_hilbert(args.D, use_cache)
        elif args.command == "table":
            rec = cmd_table(args.f_max, args.jobs, use_cache, args.golden)
            print(render_table(rec, args.format))
            return 1 if rec.status == "FAIL" else 0
        elif args.command == "check":
            if args.which == "ss-census" and args.primes:
                bad = [q for q in args.primes if not is_prime(q) or q > 50]
                if bad:
                    raise UsageError(f"census primes must be primes <= 50: {bad}")
            rec = cmd_check(args.which, args, use_cache)
        elif args.command == "witness":
            rec = cmd_witness(args.S, use_cache)
        else:
            rec = cmd_cache(args.action, cache_dir)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"cmnorm: error: {e}", file=sys.stderr)
        return 2
    logging.getLogger(__name__).info("%s done in %.1fs", args.command, time.perf_counter() - t0)
    print(rec.to_json() if args.format == "json" else rec.to_text())
    return 1 if rec.status == "FAIL" else 0


if __name__ == "__main__":
    sys.exit(main())
