"""p-adic valuation of N(j) for orders of prime-power conductor in Q(sqrt-3).

For d1 = -3 and d2 = -3 p^(2n), the norm of a singular modulus of
discriminant d2 satisfies

    |N(j)|^(2/3) = prod_x F((9 p^(2n) - x^2) / 4),

x running over integers with x^2 <= 9 p^(2n) and x^2 = 9 p^(2n) mod 4.
This module evaluates v_p(F(m)) at the conductor prime p in the range where
that evaluation is known in closed form (p != 3, n even) and sums it; the
direct class-polynomial route in :func:`conjecture_check` serves as the
independent check and covers every other (p, n).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .arith import factor, hilbert_symbol_odd, is_prime, valuation
from .classpoly import hilbert_class_poly
from .quadforms import class_number, make_discriminant

# Conductor-prime-power discriminants beyond this |D| are not synthesized.
MAX_DIRECT_D = 50_000


@dataclass(frozen=True)
class LVContext:
    p: int
    n: int
    d1: int = -3
    w1: int = 6
    w2: int = 2

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.n < 1:
            raise ValueError("n must be positive")

    @property
    def conductor(self) -> int:
        return self.p**self.n

    @property
    def d2(self) -> int:
        return self.d1 * self.p ** (2 * self.n)

    @cached_property
    def pic1(self) -> int:
        return class_number(make_discriminant(self.d1))

    def index_set(self) -> list[int]:
        """All x with x^2 <= 9 p^(2n) and x^2 = 9 p^(2n) mod 4."""
        bound = 3 * self.conductor
        return [x for x in range(-bound, bound + 1) if (x - bound) % 2 == 0]


def rho(m: int) -> int:
    """0 if (-3, -m)_3 = -1; otherwise 2 if 3 does not divide m, else 4."""
    if m < 1:
        raise ValueError("rho needs m >= 1")
    if hilbert_symbol_odd(-3, -m, 3) == -1:
        return 0
    return 2 if m % 3 else 4


def ideal_count_U(N: int) -> int:
    """Number of ideals of norm N in Z[(1 + sqrt-3)/2]."""
    if N < 1:
        raise ValueError("N must be positive")
    count = 1
    for ell, e in factor(N).factors:
        if ell == 3:
            continue
        if ell % 3 == 1:
            count *= e + 1
        elif e % 2:
            return 0
    return count


def _check_proven_region(ctx: LVContext) -> None:
    if ctx.p == 3:
        raise ValueError("p = 3 is outside the closed-form region; use conjecture_check")
    if ctx.n % 2:
        raise ValueError("odd n is outside the closed-form region; use conjecture_check")


def vpF_at_conductor(ctx: LVContext, x: int) -> Fraction:
    """v_p(F(m)) for m = (9 p^(2n) - x^2) / 4, at the conductor prime p."""
    _check_proven_region(ctx)
    p, n = ctx.p, ctx.n
    top = 9 * p ** (2 * n)
    if x * x > top or (top - x * x) % 4:
        raise ValueError(f"x = {x} is not in the index set")
    m = (top - x * x) // 4
    if m == 0:
        return Fraction(2, ctx.w1) * ctx.pic1
    if m % p:
        return Fraction(0)
    step = p ** (n + 1)
    if m % step:
        return Fraction(0)
    N = m // step
    if ctx.d1 % p and valuation(N, p) % 2 == 1:
        return Fraction(0)
    if p == 2:
        # After the parity vanishing, m = 2^(2n+1) (x = +-2^n) is the only
        # survivor; there v_2(F(m)) = eps_2(2^n) * (empty product) = 1.
        if m == 2 ** (2 * n + 1):
            return Fraction(1)
        raise ArithmeticError(f"unexpected surviving term m={m} for p=2, n={n}")
    return Fraction(rho(m) * ideal_count_U(N))


def product_formula_valuation(ctx: LVContext) -> int:
    """v_p(|N(j)|) = (3/2) * sum over x of v_p(F(m))."""
    _check_proven_region(ctx)
    total = sum((vpF_at_conductor(ctx, x) for x in ctx.index_set()), Fraction(0))
    v = Fraction(3, 2) * total
    if v.denominator != 1:
        raise ArithmeticError(f"non-integral valuation {v} for p={ctx.p}, n={ctx.n}")
    return int(v)


def direct_valuation(p: int, n: int, cache_dir=None) -> int:
    """v_p of |H_D(0)| for D = 3 p^(2n), computed from the class polynomial."""
    D = 3 * p ** (2 * n)
    if D > MAX_DIRECT_D:
        raise ValueError(f"|D| = {D} exceeds the synthesis limit {MAX_DIRECT_D}")
    return valuation(hilbert_class_poly(-D, cache_dir)(0), p)


@dataclass(frozen=True)
class ConjectureResult:
    p: int
    n: int
    valuation: int
    expected: int

    @property
    def confirmed(self) -> bool:
        return self.valuation == self.expected


def conjecture_check(p: int, n: int, cache_dir=None) -> ConjectureResult:
    """Compare v_p(N(j)) for conductor p^n against 4 (p = 2) or 1 (p odd)."""
    if not is_prime(p) or n < 1:
        raise ValueError(f"bad prime power {p}^{n}")
    return ConjectureResult(p, n, direct_valuation(p, n, cache_dir), 4 if p == 2 else 1)


def prime_powers_upto(f_max: int) -> list[tuple[int, int]]:
    out = []
    for f in range(2, f_max + 1):
        fac = factor(f).factors
        if len(fac) == 1:
            out.append(fac[0])
    return out
