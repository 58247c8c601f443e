"""Exact integer arithmetic: symbols, primality, CRT, factorization, valuations."""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

# Miller-Rabin with the first 13 primes as bases is exact below this bound.
DETERMINISTIC_MR_LIMIT = 3_317_044_064_679_887_385_961_981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
# 64 random rounds: error probability below 4**-64 = 2**-128.
_MR_EXTRA_ROUNDS = 64

RHO_BUDGET = 2**20


class FactorizationError(ArithmeticError):
    """Raised when a composite cofactor survives the Pollard-rho budget."""

    def __init__(self, cofactor: int, partial: dict[int, int]):
        self.cofactor = cofactor
        self.partial = partial
        super().__init__(f"could not split composite cofactor {cofactor}")


@dataclass(frozen=True)
class Factorization:
    """A signed integer as ``sign * prod(p**e)``.

    ``sign == 0`` marks the integer zero, which is kept distinct from the empty
    product (the units +1 and -1).
    """

    sign: int
    factors: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"bad sign {self.sign}")
        if self.sign == 0 and self.factors:
            raise ValueError("zero marker cannot carry factors")
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError(f"malformed factor list {self.factors}")
            last = p

    @classmethod
    def zero(cls) -> Factorization:
        return cls(0, ())

    @classmethod
    def from_dict(cls, sign: int, exps: dict[int, int]) -> Factorization:
        return cls(sign, tuple(sorted((p, e) for p, e in exps.items() if e)))

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def recompose(self) -> int:
        if self.sign == 0:
            return 0
        n = 1
        for p, e in self.factors:
            n *= p**e
        return self.sign * n

    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def __abs__(self) -> Factorization:
        return Factorization(abs(self.sign), self.factors)

    def __str__(self) -> str:
        if self.sign == 0:
            return "0"
        body = " * ".join(str(p) if e == 1 else f"{p}^{e}" for p, e in self.factors) or "1"
        return "-" + body if self.sign < 0 else body

    @classmethod
    def parse(cls, text: str) -> Factorization:
        """Inverse of ``str``: accepts ``"0"``, ``"1"``, ``"-2^3 * 5"`` and the like."""
        text = text.strip()
        if text == "0":
            return cls.zero()
        sign = 1
        if text.startswith("-"):
            sign, text = -1, text[1:].strip()
        if text == "1":
            return cls(sign, ())
        exps: dict[int, int] = {}
        for part in re.split(r"\s*\*\s*", text):
            m = re.fullmatch(r"(\d+)(?:\^(\d+))?", part)
            if not m:
                raise ValueError(f"cannot parse factor {part!r}")
            p, e = int(m.group(1)), int(m.group(2) or 1)
            exps[p] = exps.get(p, 0) + e
        return cls.from_dict(sign, exps)


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for n >= 1."""
    if n < 1:
        raise ValueError("kronecker symbol needs n >= 1")
    if n == 1:
        return 1
    if a % 2 == 0 and n % 2 == 0:
        return 0
    v = (n & -n).bit_length() - 1
    n >>= v
    k = 1
    if v % 2 and a % 8 in (3, 5):
        k = -k
    # n is now odd: Jacobi symbol by reciprocity
    a %= n
    while a:
        v = (a & -a).bit_length() - 1
        a >>= v
        if v % 2 and n % 8 in (3, 5):
            k = -k
        if a % 4 == 3 and n % 4 == 3:
            k = -k
        a, n = n % a, a
    return k if n == 1 else 0


def hilbert_symbol_odd(a: int, b: int, p: int) -> int:
    """Local Hilbert symbol (a, b)_p at an odd prime p, by the tame formula."""
    if p == 2:
        raise ValueError("dyadic Hilbert symbol is not supported")
    if p < 2 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol arguments must be nonzero")
    alpha, u = _split_power(a, p)
    beta, v = _split_power(b, p)
    sign = -1 if (alpha * beta * (p - 1) // 2) % 2 else 1
    return sign * kronecker(u, p) ** beta * kronecker(v, p) ** alpha


def _split_power(n: int, p: int) -> tuple[int, int]:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e, n


@lru_cache(maxsize=8)
def primes_upto(bound: int) -> tuple[int, ...]:
    if bound < 2:
        return ()
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, bound + 1, i)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def _strong_probable_prime(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x in (1, n - 1):
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Miller-Rabin primality test.

    Exact for n below ``DETERMINISTIC_MR_LIMIT`` (~3.3e24). Above that, 64
    extra rounds with pseudo-random bases (seeded by n, so the answer is
    reproducible) bound the error probability by 2**-128.
    """
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if not all(_strong_probable_prime(n, a, d, s) for a in _MR_BASES):
        return False
    if n < DETERMINISTIC_MR_LIMIT:
        return True
    rng = random.Random(n)
    return all(
        _strong_probable_prime(n, rng.randrange(2, n - 1), d, s)
        for _ in range(_MR_EXTRA_ROUNDS)
    )


def valuation(n: int, p: int) -> int:
    """Largest e with p**e dividing n."""
    if n == 0:
        raise ValueError("valuation of 0 is undefined")
    if p < 2:
        raise ValueError(f"bad prime {p}")
    return _split_power(n, p)[0]


def crt_solve(congruences: Iterable[tuple[int, int]]) -> tuple[int, int]:
    """Combine ``x = r_i mod m_i`` for pairwise coprime moduli."""
    r, m = 0, 1
    for ri, mi in congruences:
        if mi < 1:
            raise ValueError(f"bad modulus {mi}")
        if math.gcd(m, mi) != 1:
            raise ValueError(f"moduli {m} and {mi} are not coprime")
        # x = r + m*t, need m*t = ri - r mod mi
        t = (ri - r) * pow(m, -1, mi) % mi
        r, m = r + m * t, m * mi
    return r % m, m


def pollard_brent(n: int, budget: int = RHO_BUDGET, seed: int = 1) -> int | None:
    """Return a nontrivial factor of the odd composite n, or None if the budget runs out.

    Brent's cycle detection with gcds batched over blocks of 128 steps.
    """
    if n % 2 == 0:
        return 2
    spent = 0
    c = seed
    block = 128
    while spent < budget:
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        while g == 1 and spent < budget:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            spent += r
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(block, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                spent += min(block, r - k)
                g = math.gcd(q, n)
                k += block
            r *= 2
        if g == n:
            # batch overshot: step back one at a time
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
        c += 1
    return None


def factor(n: int, trial_bound: int = 1000, rho_budget: int = RHO_BUDGET) -> Factorization:
    """Complete factorization of n.

    Trial division by primes up to ``trial_bound``, then Pollard-Brent on the
    surviving cofactors, each certified by :func:`is_prime`. A composite that
    cannot be split within ``rho_budget`` iterations raises FactorizationError.
    """
    if trial_bound < 2:
        raise ValueError("trial_bound must be >= 2")
    if n == 0:
        return Factorization.zero()
    sign = 1 if n > 0 else -1
    n = abs(n)
    exps: dict[int, int] = {}
    for p in primes_upto(trial_bound):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            exps[p] = e
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            exps[m] = exps.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        d = pollard_brent(m, rho_budget)
        if d is None:
            raise FactorizationError(m, exps)
        stack += [d, m // d]
    return Factorization.from_dict(sign, exps)
