"""Norm factorizations of singular moduli and finite-range checks of their properties."""

from __future__ import annotations

import enum
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Collection, Iterable

from .arith import Factorization, factor, is_prime, kronecker, crt_solve
from .classpoly import hilbert_class_poly
from .quadforms import (
    Discriminant,
    Splitting,
    class_number,
    discriminants,
    fundamental_discriminants,
    make_discriminant,
    splitting,
)

log = logging.getLogger(__name__)

# The witness search synthesizes H_{-q} only when q and h(-q) are both small
# enough for that to take seconds rather than hours.
WITNESS_NORM_LIMIT = 1_000_000
WITNESS_MAX_CLASS_NUMBER = 64


class Target(enum.Enum):
    J = "j"
    J_MINUS_1728 = "j-1728"


class DegenerateError(ValueError):
    """j - 1728 vanishes identically for discriminant -4."""


@dataclass(frozen=True)
class NormReport:
    disc: Discriminant
    target: Target
    factorization: Factorization
    flags: tuple[str, ...] = ()

    @property
    def norm(self) -> int:
        return self.factorization.recompose()


@dataclass(frozen=True)
class SUnitReport:
    norm: NormReport
    s_set: frozenset[int]
    is_s_unit: bool
    offenders: frozenset[int]


@dataclass(frozen=True)
class Violation:
    disc: int
    detail: str

    def __str__(self) -> str:
        return f"D={self.disc}: {self.detail}"


@dataclass
class CheckReport:
    name: str
    checked: int = 0
    violations: list[Violation] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations


def _factor_norm(n: int, bound: int) -> tuple[Factorization, tuple[str, ...]]:
    fac = factor(n, bound)
    flags = tuple(
        f"prime {p} exceeds the trial bound {bound}" for p in fac.primes() if p > bound
    )
    for msg in flags:
        log.warning(msg)
    return fac, flags


def norm_of_singular_modulus(d: Discriminant | int, cache_dir: Path | str | None = None) -> NormReport:
    """Factor |N(j)| = |H_d(0)| for the singular moduli of discriminant d."""
    if isinstance(d, int):
        d = make_discriminant(d)
    n = abs(hilbert_class_poly(d, cache_dir)(0))
    fac, flags = _factor_norm(n, max(3 * d.D // 4, 100))
    return NormReport(d, Target.J, fac, flags)


def norm_of_j_minus_1728(d: Discriminant | int, cache_dir: Path | str | None = None) -> NormReport:
    """Factor |N(j - 1728)| = |H_d(1728)|."""
    if isinstance(d, int):
        d = make_discriminant(d)
    if d.value == -4:
        raise DegenerateError("j - 1728 = 0 for discriminant -4")
    n = abs(hilbert_class_poly(d, cache_dir)(1728))
    fac, flags = _factor_norm(n, max(d.D, 100))
    return NormReport(d, Target.J_MINUS_1728, fac, flags)


def s_unit_test(norm: NormReport, s_set: Collection[int]) -> SUnitReport:
    if norm.factorization.is_zero:
        raise ValueError("the zero marker has no S-unit semantics")
    offenders = frozenset(p for p in norm.factorization.primes() if p not in s_set)
    return SUnitReport(norm, frozenset(s_set), not offenders, offenders)


def deuring_violations(report: NormReport) -> list[Violation]:
    """Primes of a norm that split where reduction theory forbids it.

    A prime dividing N(j) (resp. N(j - 1728)) and prime to the conductor cannot
    split in Q(sqrt(-3)) (resp. Q(i)) nor in the CM field of j.
    """
    d = report.disc
    out = []
    for p in report.factorization.primes():
        if d.conductor % p == 0:
            continue
        if report.target is Target.J:
            if splitting(p, d.fundamental_part) is Splitting.SPLIT:
                out.append(Violation(d.D, f"{p} divides N(j) but splits in the CM field"))
            if splitting(p, -3) is Splitting.SPLIT:
                out.append(Violation(d.D, f"{p} divides N(j) but splits in Q(sqrt-3)"))
        elif p != 2 and splitting(p, -4) is Splitting.SPLIT:
            out.append(Violation(d.D, f"{p} divides N(j-1728) but splits in Q(i)"))
    return out


def _norm_job(args: tuple[int, str, str | None]) -> NormReport:
    value, target, cache_dir = args
    if target == Target.J.value:
        return norm_of_singular_modulus(value, cache_dir)
    return norm_of_j_minus_1728(value, cache_dir)


def compute_norms(
    discs: Iterable[Discriminant],
    target: Target = Target.J,
    jobs: int = 1,
    cache_dir: Path | str | None = None,
) -> list[NormReport]:
    """Norm reports for many discriminants, in input order regardless of ``jobs``."""
    cd = str(cache_dir) if cache_dir is not None else None
    args = [(d.value, target.value, cd) for d in discs]
    if jobs <= 1 or len(args) < 2:
        return [_norm_job(a) for a in args]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_norm_job, args, chunksize=4))


def check_mod3_obstruction(d_max: int, jobs: int = 1, cache_dir=None) -> CheckReport:
    """No prime = 1 mod 3 divides N(j) unless the order lies in Q(sqrt-3) and the
    prime divides its conductor."""
    if d_max < 7:
        raise ValueError("d_max must be >= 7")
    rep = CheckReport("mod3")
    discs = [d for d in discriminants(d_max) if d.value != -3]
    for r in compute_norms(discs, Target.J, jobs, cache_dir):
        rep.checked += 1
        d = r.disc
        for p in r.factorization.primes():
            if p % 3 != 1:
                continue
            if d.fundamental_part != -3:
                rep.violations.append(Violation(d.D, f"prime {p} = 1 mod 3 divides the norm"))
            elif d.conductor % p:
                rep.violations.append(
                    Violation(d.D, f"prime {p} = 1 mod 3 divides the norm but not the conductor {d.conductor}")
                )
        rep.violations += deuring_violations(r)
    return rep


def check_claim_235(f_max: int, jobs: int = 1, cache_dir=None) -> CheckReport:
    """2, 3 and 5 divide the norm of every order of conductor f >= 2 in Q(sqrt-3)."""
    if f_max < 2:
        raise ValueError("f_max must be >= 2")
    rep = CheckReport("claim235")
    discs = [make_discriminant(-3 * f * f) for f in range(2, f_max + 1)]
    for r in compute_norms(discs, Target.J, jobs, cache_dir):
        rep.checked += 1
        f = r.disc.conductor
        exps = tuple(r.factorization.exponent(p) for p in (2, 3, 5))
        rep.details[f] = exps
        for p, e in zip((2, 3, 5), exps):
            if e == 0:
                rep.violations.append(Violation(r.disc.D, f"{p} does not divide the norm (f={f})"))
    return rep


def check_square_divisibility(d_max: int, jobs: int = 1, cache_dir=None) -> CheckReport:
    """For fundamental discriminants and p in {2, 3, 5}: p | N(j) implies p^2 | N(j)."""
    if d_max < 7:
        raise ValueError("d_max must be >= 7")
    rep = CheckReport("squares")
    discs = [d for d in fundamental_discriminants(d_max) if d.value != -3]
    for r in compute_norms(discs, Target.J, jobs, cache_dir):
        rep.checked += 1
        for p in (2, 3, 5):
            if r.factorization.exponent(p) == 1:
                rep.violations.append(Violation(r.disc.D, f"{p} divides the norm exactly once"))
    return rep


def check_j1728_obstruction(d_max: int, jobs: int = 1, cache_dir=None) -> CheckReport:
    """Outside Q(i) no prime = 1 mod 4 divides N(j - 1728); inside Q(i), 2, 3, 7 all do."""
    if d_max < 7:
        raise ValueError("d_max must be >= 7")
    rep = CheckReport("j1728")
    discs = [d for d in discriminants(d_max) if d.value != -4]
    for r in compute_norms(discs, Target.J_MINUS_1728, jobs, cache_dir):
        rep.checked += 1
        d = r.disc
        if d.fundamental_part == -4:
            missing = [p for p in (2, 3, 7) if r.factorization.exponent(p) == 0]
            if missing:
                rep.violations.append(Violation(d.D, f"primes {missing} do not divide N(j-1728)"))
        else:
            bad = [p for p in r.factorization.primes() if p % 4 == 1]
            if bad:
                rep.violations.append(Violation(d.D, f"primes {bad} = 1 mod 4 divide N(j-1728)"))
        rep.violations += deuring_violations(r)
    return rep


@dataclass(frozen=True)
class WitnessResult:
    s_set: frozenset[int]
    q: int
    splitting_log: tuple[tuple[int, int], ...]
    norm_check: SUnitReport | None  # None when H_{-q} is too large to synthesize

    @property
    def all_split(self) -> bool:
        return all(s == 1 for _, s in self.splitting_log)

    @property
    def coprime(self) -> bool | None:
        if self.norm_check is None:
            return None
        prod = math.prod(self.s_set)
        return math.gcd(self.norm_check.norm.norm, prod) == 1


def find_witness(
    s_set: Iterable[int],
    norm_limit: int = WITNESS_NORM_LIMIT,
    max_class_number: int = WITNESS_MAX_CLASS_NUMBER,
    progress: Callable[[int], None] | None = None,
    cache_dir=None,
) -> WitnessResult:
    """Smallest prime q = -1 mod 8 and = -1 mod every odd p in S.

    Every prime of S then splits in Q(sqrt(-q)), so no singular modulus of
    discriminant -q is an S-unit. The norm of those moduli is computed and
    checked for coprimality with S when q <= norm_limit and h(-q) <= max_class_number.
    """
    s = frozenset(s_set)
    if not s:
        raise ValueError("S must be nonempty")
    for p in s:
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
    cong = [(-1, 8)] + [(-1, p) for p in sorted(s) if p != 2]
    r, m = crt_solve(cong)
    q = r
    scanned = 0
    while not is_prime(q):
        q += m
        scanned += 1
        if scanned % 10_000 == 0:
            log.info("witness search: %d candidates scanned, at %d", scanned, q)
            if progress:
                progress(q)
    log_ = tuple((p, kronecker(-q, p)) for p in sorted(s))
    norm_check = None
    if q <= norm_limit and class_number(make_discriminant(-q)) <= max_class_number:
        norm_check = s_unit_test(norm_of_singular_modulus(-q, cache_dir), s)
    return WitnessResult(s, q, log_, norm_check)
