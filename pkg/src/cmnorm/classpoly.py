"""Hilbert class polynomials by floating-point evaluation of j at CM points.

Each reduced form (a, b, c) of discriminant -D gives a CM point
tau = (-b + i*sqrt(D)) / (2a); H_D is the product of (x - j(tau)) over all
forms, and its coefficients are integers, recovered by rounding.
"""

from __future__ import annotations

import logging
import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import mpmath
from mpmath import mp

from .quadforms import Discriminant, QuadForm, make_discriminant, reduced_forms

log = logging.getLogger(__name__)

ROUNDING_THRESHOLD = 0.25
MAX_RETRIES = 5


class PrecisionError(ArithmeticError):
    pass


@dataclass(frozen=True)
class PrecisionBudget:
    mantissa_bits: int
    series_terms: int

    def __post_init__(self):
        if self.mantissa_bits < 64 or self.series_terms < 16:
            raise ValueError(f"budget too small: {self}")

    def doubled(self) -> PrecisionBudget:
        return PrecisionBudget(2 * self.mantissa_bits, 2 * self.series_terms)


@dataclass(frozen=True)
class ClassPolynomial:
    disc: Discriminant
    coeffs: tuple[int, ...]  # degree h down to 0, monic

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t: int) -> int:
        return eval_at_integer(self, t)

    def __str__(self) -> str:
        h = self.degree
        out = []
        for k, c in zip(range(h, -1, -1), self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            mag = abs(c)
            if mono and mag == 1:
                term = mono
            elif mono:
                term = f"{mag}*{mono}"
            else:
                term = str(mag)
            if not out:
                out.append(term if c > 0 else "-" + term)
            else:
                out.append(("+ " if c > 0 else "- ") + term)
        return " ".join(out) if out else "0"


def precision_estimate(d: Discriminant) -> PrecisionBudget:
    """Working precision and series length for synthesizing H_d.

    Bits cover the size of the largest coefficient, which is bounded by
    prod(1 + |j_i|) with log|j_i| ~ pi*sqrt(D)/a, plus guard bits.
    """
    forms = reduced_forms(d)
    sqrtD = math.sqrt(d.D)
    size = sum(math.pi * sqrtD / f.a for f in forms) / math.log(2)
    bits = max(64, math.ceil(size) + 32 * len(forms) + 256)
    a_max = max(f.a for f in forms)
    # |q| = exp(-pi*sqrt(D)/a) at the least imaginary CM point
    decay = math.pi * sqrtD / a_max
    terms = max(16, math.ceil((bits + 16) * math.log(2) / decay) + 8)
    return PrecisionBudget(bits, terms)


def _sigma3_table(n: int) -> list[int]:
    s = [0] * (n + 1)
    for d in range(1, n + 1):
        d3 = d**3
        for m in range(d, n + 1, d):
            s[m] += d3
    return s


def _terms_needed(form: QuadForm, bits: int) -> int:
    decay = math.pi * math.sqrt(-form.disc) / form.a
    return math.ceil((bits + 16) * math.log(2) / decay) + 8


def j_at_form(form: QuadForm, budget: PrecisionBudget) -> mpmath.mpc:
    """j(tau) = E4^3 / Delta at the CM point of a reduced positive definite form."""
    if form.a <= 0 or form.disc >= 0:
        raise ValueError(f"{form} is not positive definite")
    n_terms = min(budget.series_terms, max(16, _terms_needed(form, budget.mantissa_bits)))
    with mp.workprec(budget.mantissa_bits):
        tau = mpmath.mpc(-form.b, mpmath.sqrt(-form.disc)) / (2 * form.a)
        q = mpmath.exp(2j * mp.pi * tau)
        if q == 0:
            raise PrecisionError(f"q underflows at {form}")
        sigma3 = _sigma3_table(n_terms)
        e4 = mpmath.mpc(0)
        qn = mpmath.mpc(1)
        powers = [qn]
        for n in range(1, n_terms + 1):
            qn = qn * q
            powers.append(qn)
            e4 += sigma3[n] * qn
        e4 = 1 + 240 * e4
        # prod(1 - q^n) by Euler's pentagonal number series
        eta = mpmath.mpc(1)
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n_terms:
                break
            sgn = -1 if k % 2 else 1
            term = powers[g1]
            g2 = g1 + k
            if g2 <= n_terms:
                term += powers[g2]
            eta += sgn * term
            k += 1
        eta8 = (eta * eta) ** 2
        eta8 = eta8 * eta8
        delta = q * eta8 * eta8 * eta8
        if delta == 0 or not mpmath.isfinite(delta):
            raise PrecisionError(f"Delta degenerate at {form}")
        return e4**3 / delta


def synthesize(d: Discriminant, budget: PrecisionBudget) -> tuple[tuple[int, ...], float]:
    """Multiply out prod(x - j_i) at the given budget.

    Returns the rounded integer coefficients (degree h down to 0) and the
    largest rounding residual seen.
    """
    forms = reduced_forms(d)
    roots = [j_at_form(f, budget) for f in forms]
    with mp.workprec(budget.mantissa_bits):
        poly = [mpmath.mpc(1)]  # low degree first
        for r in roots:
            nxt = [mpmath.mpc(0)] * (len(poly) + 1)
            for i, c in enumerate(poly):
                nxt[i + 1] += c
                nxt[i] -= c * r
            poly = nxt
        coeffs = []
        residual = 0.0
        for c in reversed(poly):
            n = int(mpmath.nint(c.real))
            residual = max(residual, float(abs(c.real - n)), float(abs(c.imag)))
            coeffs.append(n)
    return tuple(coeffs), residual


def _cache_path(cache_dir: Path, D: int) -> Path:
    return Path(cache_dir) / f"hd_{D}.txt"


def write_cache(cache_dir: Path | str, poly: ClassPolynomial) -> Path:
    """Write-once cache file, placed by atomic rename."""
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = _cache_path(cache_dir, poly.disc.D)
    if path.exists():
        return path
    body = f"{poly.disc.D} {poly.degree}\n" + "".join(f"{c}\n" for c in poly.coeffs)
    fd, tmp = tempfile.mkstemp(dir=cache_dir, prefix=f".hd_{poly.disc.D}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="ascii", newline="\n") as fh:
            fh.write(body)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def read_cache(cache_dir: Path | str, d: Discriminant) -> ClassPolynomial | None:
    path = _cache_path(Path(cache_dir), d.D)
    if not path.exists():
        return None
    lines = path.read_text(encoding="ascii").split("\n")
    D, h = (int(t) for t in lines[0].split())
    coeffs = tuple(int(t) for t in lines[1 : h + 2])
    if D != d.D or len(coeffs) != h + 1 or coeffs[0] != 1 or h != len(reduced_forms(d)):
        raise ValueError(f"corrupt cache file {path}")
    return ClassPolynomial(d, coeffs)


_memo: dict[int, ClassPolynomial] = {}


def hilbert_class_poly(
    d: Discriminant | int, cache_dir: Path | str | None = None
) -> ClassPolynomial:
    """H_d with exact integer coefficients.

    Rounds the floating-point product; if any residual reaches the threshold the
    precision is doubled, up to MAX_RETRIES times. Results are memoized and, when
    ``cache_dir`` is given, persisted there.
    """
    if isinstance(d, int):
        d = make_discriminant(d)
    if d.value in _memo:
        if cache_dir is not None:
            write_cache(cache_dir, _memo[d.value])
        return _memo[d.value]
    poly = read_cache(cache_dir, d) if cache_dir is not None else None
    if poly is None:
        budget = precision_estimate(d)
        for attempt in range(MAX_RETRIES + 1):
            coeffs, residual = synthesize(d, budget)
            log.debug("H_%d: %d bits, residual %.3g", d.D, budget.mantissa_bits, residual)
            if residual < ROUNDING_THRESHOLD:
                break
            budget = budget.doubled()
        else:
            raise PrecisionError(f"precision exhausted for D={d.D} after {MAX_RETRIES} retries")
        poly = ClassPolynomial(d, coeffs)
        if cache_dir is not None:
            write_cache(cache_dir, poly)
    _memo[d.value] = poly
    return poly


def eval_at_integer(poly: ClassPolynomial, t: int) -> int:
    acc = 0
    for c in poly.coeffs:
        acc = acc * t + c
    return acc
