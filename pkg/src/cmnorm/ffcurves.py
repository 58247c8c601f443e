"""Elliptic curves over F_p and F_{p^2}: j-invariants, point counts, supersingular census.

Elements of F_{p^2} = F_p[t]/(t^2 + c1 t + c0) are pairs (u0, u1) meaning
u0 + u1 t. The vectorized census code encodes an element as u0 + u1 * p.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .arith import is_prime

MAX_POINT_COUNT_FIELD = 10_000
# Above this many curve-x evaluations the census tests one curve per j.
EXHAUSTIVE_WORK_LIMIT = 2 * 10**8


class SingularCurveError(ValueError):
    pass


def smallest_irreducible_quadratic(p: int) -> tuple[int, int]:
    """(c0, c1) of the first monic irreducible t^2 + c1 t + c0 over F_p, ordered by (c1, c0)."""
    for c1 in range(p):
        for c0 in range(1, p):
            if all((t * t + c1 * t + c0) % p for t in range(p)):
                return c0, c1
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class FieldElement:
    p: int
    degree: int
    coords: tuple[int, int]
    modulus: tuple[int, int] | None = None

    def _same(self, other) -> FieldElement:
        if isinstance(other, int):
            return FieldElement(self.p, self.degree, (other % self.p, 0), self.modulus)
        if (other.p, other.degree, other.modulus) != (self.p, self.degree, self.modulus):
            raise ValueError("elements of different fields")
        return other

    def _new(self, u0: int, u1: int) -> FieldElement:
        return FieldElement(self.p, self.degree, (u0 % self.p, u1 % self.p), self.modulus)

    def __add__(self, other):
        o = self._same(other)
        return self._new(self.coords[0] + o.coords[0], self.coords[1] + o.coords[1])

    __radd__ = __add__

    def __neg__(self):
        return self._new(-self.coords[0], -self.coords[1])

    def __sub__(self, other):
        return self + (-self._same(other))

    def __rsub__(self, other):
        return self._same(other) - self

    def __mul__(self, other):
        o = self._same(other)
        a0, a1 = self.coords
        b0, b1 = o.coords
        if self.degree == 1:
            return self._new(a0 * b0, 0)
        c0, c1 = self.modulus
        hi = a1 * b1
        return self._new(a0 * b0 - hi * c0, a0 * b1 + a1 * b0 - hi * c1)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self._new(1, 0), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of 0")
        return self ** (self.p**self.degree - 2)

    def __truediv__(self, other):
        return self * self._same(other).inverse()

    def is_zero(self) -> bool:
        return self.coords == (0, 0)

    def in_prime_field(self) -> bool:
        return self.coords[1] == 0

    def __int__(self) -> int:
        if not self.in_prime_field():
            raise ValueError(f"{self} is not in the prime field")
        return self.coords[0]

    def __str__(self) -> str:
        u0, u1 = self.coords
        if u1 == 0:
            return str(u0)
        return f"{u0}+{u1}t" if u0 else f"{u1}t"

    def encode(self) -> int:
        return self.coords[0] + self.coords[1] * self.p


class GF:
    """The finite field F_p (degree 1) or F_{p^2} (degree 2)."""

    def __init__(self, p: int, degree: int = 1):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if degree not in (1, 2):
            raise ValueError("only degrees 1 and 2 are supported")
        self.p = p
        self.degree = degree
        self.modulus = smallest_irreducible_quadratic(p) if degree == 2 else None
        if self.modulus is not None:
            c0, c1 = self.modulus
            if any((t * t + c1 * t + c0) % p == 0 for t in range(p)):
                raise ValueError(f"modulus {self.modulus} is reducible mod {p}")
        self.q = p**degree

    def __call__(self, u0: int, u1: int = 0) -> FieldElement:
        if self.degree == 1 and u1 % self.p:
            raise ValueError("prime field element with nonzero t-coordinate")
        return FieldElement(self.p, self.degree, (u0 % self.p, u1 % self.p), self.modulus)

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.degree})"

    def elements(self) -> list[FieldElement]:
        return [self.decode(i) for i in range(self.q)]

    def decode(self, i: int) -> FieldElement:
        return self(i % self.p, i // self.p)

    # numpy tables over encoded elements
    @cached_property
    def add_table(self) -> np.ndarray:
        p, idx = self.p, np.arange(self.q)
        u0, u1 = idx % p, idx // p
        return ((u0[:, None] + u0[None, :]) % p + ((u1[:, None] + u1[None, :]) % p) * p).astype(np.int32)

    @cached_property
    def mul_table(self) -> np.ndarray:
        p, idx = self.p, np.arange(self.q, dtype=np.int64)
        a0, a1 = (idx % p)[:, None], (idx // p)[:, None]
        b0, b1 = (idx % p)[None, :], (idx // p)[None, :]
        c0, c1 = self.modulus or (0, 0)
        hi = a1 * b1
        r0 = (a0 * b0 - hi * c0) % p
        r1 = (a0 * b1 + a1 * b0 - hi * c1) % p
        return (r0 + r1 * p).astype(np.int32)

    @cached_property
    def neg_table(self) -> np.ndarray:
        idx = np.arange(self.q)
        return ((-(idx % self.p)) % self.p + ((-(idx // self.p)) % self.p) * self.p).astype(np.int32)

    @cached_property
    def inv_table(self) -> np.ndarray:
        inv = np.zeros(self.q, dtype=np.int32)
        for i in range(1, self.q):
            inv[i] = self.decode(i).inverse().encode()
        return inv

    @cached_property
    def sqrt_count(self) -> np.ndarray:
        """Number of y with y^2 = v, for each encoded v; built by enumerating y."""
        counts = np.zeros(self.q, dtype=np.int64)
        sq = self.mul_table[np.arange(self.q), np.arange(self.q)]
        np.add.at(counts, sq, 1)
        return counts

    def const(self, k: int) -> int:
        return self(k).encode()


@lru_cache(maxsize=None)
def field(p: int, degree: int) -> GF:
    return GF(p, degree)


@dataclass(frozen=True)
class WeierstrassCurve:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6."""

    a1: FieldElement
    a2: FieldElement
    a3: FieldElement
    a4: FieldElement
    a6: FieldElement

    def __post_init__(self):
        if self.discriminant.is_zero():
            raise SingularCurveError(f"singular curve {self}")

    @classmethod
    def from_ints(cls, F: GF, a1=0, a2=0, a3=0, a4=0, a6=0) -> WeierstrassCurve:
        def el(v):
            return v if isinstance(v, FieldElement) else F(v)

        return cls(el(a1), el(a2), el(a3), el(a4), el(a6))

    @property
    def field(self) -> GF:
        return field(self.a1.p, self.a1.degree)

    @property
    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    @property
    def c4(self) -> FieldElement:
        b2, b4, _, _ = self.b_invariants
        return b2 * b2 - 24 * b4

    @property
    def discriminant(self) -> FieldElement:
        b2, b4, b6, b8 = self.b_invariants
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def __str__(self) -> str:
        return "[" + ", ".join(str(a) for a in (self.a1, self.a2, self.a3, self.a4, self.a6)) + "]"


def j_invariant(E: WeierstrassCurve) -> FieldElement:
    return E.c4**3 / E.discriminant


def point_count(E: WeierstrassCurve) -> int:
    """#E(F_q) including infinity, counting every (x, y) on the full equation."""
    F = E.field
    if F.q > MAX_POINT_COUNT_FIELD:
        raise ValueError(f"field of size {F.q} exceeds the enumeration budget")
    if F.q <= 2500:
        add, mul = F.add_table, F.mul_table
    else:
        return _point_count_elementwise(E)
    a1, a2, a3, a4, a6 = (a.encode() for a in (E.a1, E.a2, E.a3, E.a4, E.a6))
    ys = np.arange(F.q)
    total = 1
    for x in range(F.q):
        x2 = mul[x, x]
        rhs = add[add[add[mul[x2, x], mul[a2, x2]], mul[a4, x]], a6]
        lhs = add[mul[ys, ys], mul[add[mul[a1, x], a3], ys]]
        total += int(np.count_nonzero(lhs == rhs))
    return total


def _point_count_elementwise(E: WeierstrassCurve) -> int:
    F = E.field
    els = F.elements()
    total = 1
    for x in els:
        rhs = x**3 + E.a2 * x * x + E.a4 * x + E.a6
        lin = E.a1 * x + E.a3
        total += sum(1 for y in els if y * y + lin * y == rhs)
    return total


def trace_of_frobenius(E: WeierstrassCurve) -> int:
    return E.field.q + 1 - point_count(E)


def is_supersingular(E: WeierstrassCurve) -> bool:
    return trace_of_frobenius(E) % E.a1.p == 0


@dataclass(frozen=True)
class SupersingularCensus:
    p: int
    js: frozenset[FieldElement]
    modulus: tuple[int, int]
    exhaustive: bool
    curves: int
    # j (encoded) -> (curves in the bucket, supersingular curves in the bucket)
    buckets: dict = None

    def values(self) -> set[int | str]:
        return {int(j) if j.in_prime_field() else str(j) for j in self.js}


def _curve_invariants(F: GF, a1, a2, a3, a4, a6):
    """Vectorized discriminant and j over encoded coefficient arrays (j = -1 where singular)."""
    add, mul, neg = F.add_table, F.mul_table, F.neg_table

    def k(n):
        return F.const(n)

    b2 = add[mul[a1, a1], mul[k(4), a2]]
    b4 = add[mul[k(2), a4], mul[a1, a3]]
    b6 = add[mul[a3, a3], mul[k(4), a6]]
    b8 = add[
        add[add[mul[mul[a1, a1], a6], mul[k(4), mul[a2, a6]]], neg[mul[mul[a1, a3], a4]]],
        add[mul[a2, mul[a3, a3]], neg[mul[a4, a4]]],
    ]
    c4 = add[mul[b2, b2], neg[mul[k(24), b4]]]
    delta = add[
        add[neg[mul[mul[b2, b2], b8]], neg[mul[k(8), mul[b4, mul[b4, b4]]]]],
        add[neg[mul[k(27), mul[b6, b6]]], mul[k(9), mul[b2, mul[b4, b6]]]],
    ]
    j = mul[mul[c4, mul[c4, c4]], F.inv_table[delta]]
    return delta, np.where(delta == 0, -1, j)


def _census_general(F: GF):
    """All 5-coefficient Weierstrass curves with their point counts.

    In odd characteristic y^2 + L y = R has #{y : y^2 = L^2 + 4R} solutions,
    which replaces the inner loop over y. Curves are processed one a1 value
    at a time to bound memory.
    """
    add, mul = F.add_table, F.mul_table
    rest = np.array(list(itertools.product(range(F.q), repeat=4)), dtype=np.int64)
    js, counts = [], []
    for a1v in range(F.q):
        a2, a3, a4, a6 = rest.T
        a1 = np.full_like(a2, a1v)
        delta, j = _curve_invariants(F, a1, a2, a3, a4, a6)
        keep = delta != 0
        a1, a2, a3, a4, a6, j = a1[keep], a2[keep], a3[keep], a4[keep], a6[keep], j[keep]
        npts = np.ones(len(j), dtype=np.int64)
        for x in range(F.q):
            x2 = mul[x, x]
            rhs = add[add[add[mul[x2, x], mul[a2, x2]], mul[a4, x]], a6]
            lin = add[mul[a1, x], a3]
            if F.p == 2:
                for y in range(F.q):
                    npts += add[mul[y, y], mul[lin, y]] == rhs
            else:
                npts += F.sqrt_count[add[mul[lin, lin], mul[F.const(4), rhs]]]
        js.append(j)
        counts.append(npts)
    return np.concatenate(js), np.concatenate(counts)


def _census_short(F: GF):
    """All y^2 = x^3 + a x + b (p >= 5); point counts via #{y : y^2 = v} over every x."""
    a, b = np.divmod(np.arange(F.q * F.q, dtype=np.int64), F.q)
    zero = np.zeros_like(a)
    delta, j = _curve_invariants(F, zero, zero, zero, a, b)
    keep = delta != 0
    a, b, j = a[keep], b[keep], j[keep]
    add, mul, roots = F.add_table, F.mul_table, F.sqrt_count
    npts = np.ones(len(j), dtype=np.int64)
    for x in range(F.q):
        npts += roots[add[add[mul[x, mul[x, x]], mul[a, x]], b]]
    return j, npts


def _census_representatives(F: GF):
    """One short model per j in F_q (p >= 5): y^2 = x^3 + 3k x + 2k, k = j/(1728 - j)."""
    a = np.zeros(F.q, dtype=np.int64)
    b = np.zeros(F.q, dtype=np.int64)
    j1728 = F.const(1728)
    for jv in range(F.q):
        jel = F.decode(jv)
        if jv == 0:
            b[jv] = F.const(1)
        elif jv == j1728:
            a[jv] = F.const(1)
        else:
            k = jel / (F(1728) - jel)
            a[jv], b[jv] = (3 * k).encode(), (2 * k).encode()
    add, mul, roots = F.add_table, F.mul_table, F.sqrt_count
    npts = np.ones(F.q, dtype=np.int64)
    for x in range(F.q):
        npts += roots[add[add[mul[x, mul[x, x]], mul[a, x]], b]]
    return np.arange(F.q), npts


@lru_cache(maxsize=None)
def ss_census(p: int, exhaustive: bool | None = None) -> SupersingularCensus:
    """Supersingular j-invariants in F_{p^2}, by enumerating curves over F_{p^2}.

    p <= 5 enumerates every 5-coefficient model; larger p uses the short
    models y^2 = x^3 + a x + b, all of them while q^3 stays within
    EXHAUSTIVE_WORK_LIMIT and one per j beyond that.
    """
    if p > 50 or not is_prime(p):
        raise ValueError("census needs a prime p <= 50")
    F = field(p, 2)
    q = F.q
    if p <= 5:
        exhaustive = True
        j, npts = _census_general(F)
    else:
        if exhaustive is None:
            exhaustive = q**3 <= EXHAUSTIVE_WORK_LIMIT
        j, npts = _census_short(F) if exhaustive else _census_representatives(F)
    trace = q + 1 - npts
    ss = trace % p == 0
    buckets = {}
    for jv in np.unique(j):
        sel = j == jv
        buckets[int(jv)] = (int(sel.sum()), int(ss[sel].sum()))
    js = frozenset(F.decode(int(jv)) for jv in np.unique(j[ss]))
    return SupersingularCensus(p, js, F.modulus, exhaustive, len(j), buckets)
