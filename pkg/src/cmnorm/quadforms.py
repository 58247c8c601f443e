"""Discriminants, reduced binary quadratic forms, class numbers, splitting."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

from .arith import is_prime, kronecker


class Splitting(enum.Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


def is_fundamental(d: int) -> bool:
    """True if d < 0 is a fundamental discriminant."""
    if d >= 0:
        return False
    if d % 4 == 1:
        return _squarefree(-d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _squarefree(-m)
    return False


def _squarefree(n: int) -> bool:
    n = abs(n)
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        if n % p == 0:
            n //= p
        p += 1
    return True


@dataclass(frozen=True)
class Discriminant:
    value: int
    conductor: int
    fundamental_part: int

    @property
    def D(self) -> int:
        return -self.value

    def __str__(self) -> str:
        return str(self.value)


@lru_cache(maxsize=None)
def make_discriminant(value: int) -> Discriminant:
    """Validate a negative discriminant and split it as conductor**2 * fundamental."""
    if value >= 0:
        raise ValueError(f"discriminant must be negative, got {value}")
    if value % 4 not in (0, 1):
        raise ValueError(f"{value} is not 0 or 1 mod 4")
    # largest f with value/f^2 a discriminant that is fundamental
    best = 1
    for f in range(1, math.isqrt(-value) + 1):
        if value % (f * f) == 0:
            dk = value // (f * f)
            if dk % 4 in (0, 1) and is_fundamental(dk):
                best = f
    dk = value // (best * best)
    if not is_fundamental(dk):
        raise ValueError(f"no fundamental part found for {value}")
    return Discriminant(value, best, dk)


@dataclass(frozen=True, order=True)
class QuadForm:
    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    def is_primitive(self) -> bool:
        return math.gcd(math.gcd(self.a, self.b), self.c) == 1

    def reduce(self) -> QuadForm:
        """Reduced form properly equivalent to this positive definite form."""
        a, b, c = self.a, self.b, self.c
        while True:
            if c < a:
                a, b, c = c, -b, a
            # normalize -a < b <= a
            k = (a - b) // (2 * a)
            b, c = b + 2 * k * a, a * k * k + b * k + c
            if c < a:
                continue
            if c == a and b < 0:
                b = -b
            return QuadForm(a, b, c)

    def __iter__(self):
        return iter((self.a, self.b, self.c))


@lru_cache(maxsize=None)
def _reduced_forms(value: int) -> tuple[QuadForm, ...]:
    D = -value
    forms = []
    for a in range(1, math.isqrt(D // 3) + 1):
        for b in range(-a + 1, a + 1):
            if (b * b - value) % (4 * a):
                continue
            c = (b * b - value) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            forms.append(QuadForm(a, b, c))
    return tuple(forms)


def reduced_forms(d: Discriminant) -> list[QuadForm]:
    """One reduced primitive form per class, ordered by (a, b)."""
    return list(_reduced_forms(d.value))


def class_number(d: Discriminant) -> int:
    return len(_reduced_forms(d.value))


def splitting(p: int, dk: int) -> Splitting:
    """Behaviour of the prime p in the imaginary quadratic field of discriminant dk."""
    if not is_fundamental(dk):
        raise ValueError(f"{dk} is not a fundamental discriminant")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    s = kronecker(dk, p)
    return {1: Splitting.SPLIT, 0: Splitting.RAMIFIED, -1: Splitting.INERT}[s]


def discriminants(d_max: int, d_min: int = 3) -> list[Discriminant]:
    """All discriminants -D with d_min <= D <= d_max, ordered by D."""
    return [make_discriminant(-D) for D in range(max(d_min, 3), d_max + 1) if D % 4 in (0, 3)]


def fundamental_discriminants(d_max: int, d_min: int = 3) -> list[Discriminant]:
    return [d for d in discriminants(d_max, d_min) if d.conductor == 1]
