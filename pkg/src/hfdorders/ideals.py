"""Ideals of the maximal order: HNF, products, prime factorization, principality."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from sympy import factorint
from sympy.ntheory import sqrt_mod

from .core import (
    OrderElement,
    QuadraticOrder,
    ValidationError,
    canonical_associate,
    elements_of_norm,
)
from .lattice import Lattice


def times_omega(O: QuadraticOrder, v: tuple[int, int]) -> tuple[int, int]:
    """Coordinates of ``v * omega`` over ``{1, omega}``."""
    x, y = v
    return -O.omega_norm * y, x + O.trace * y


def order_lattice(O: QuadraticOrder) -> Lattice:
    """``Z + f*omega*Z`` as a lattice in maximal coordinates."""
    return Lattice(1, 0, O.f)


def lattice_mul(O: QuadraticOrder, L: Lattice, M: Lattice) -> Lattice:
    """Z-span of all products of basis vectors (field ``O``)."""
    D = O.maximal
    vecs = []
    for u in L.basis:
        for v in M.basis:
            vecs.append((D.from_maximal(*u) * D.from_maximal(*v)).coords)
    return Lattice.span(vecs)


@dataclass(frozen=True)
class IntegralIdeal:
    """The ideal ``a*Z + (b + c*omega)*Z`` of the maximal order."""

    order: QuadraticOrder
    a: int
    b: int
    c: int

    def __post_init__(self):
        if not self.order.is_maximal:
            raise ValidationError("ideals are represented over the maximal order only")
        L = Lattice(self.a, self.b, self.c)
        if self.a % self.c or self.b % self.c:
            raise ValidationError(f"HNF {(self.a, self.b, self.c)} violates c | a, c | b")
        for v in L.basis:
            if not L.contains(times_omega(self.order, v)):
                raise ValidationError(f"{(self.a, self.b, self.c)} is not closed under omega")

    @classmethod
    def from_lattice(cls, O: QuadraticOrder, L: Lattice) -> IntegralIdeal:
        return cls(O.maximal, L.a, L.b, L.c)

    @property
    def lattice(self) -> Lattice:
        return Lattice(self.a, self.b, self.c)

    @property
    def hnf(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def norm(self) -> int:
        return self.a * self.c

    def contains(self, x: OrderElement) -> bool:
        return self.lattice.contains(x.coords)

    def __contains__(self, x: OrderElement) -> bool:
        return self.contains(x)

    def __le__(self, other: IntegralIdeal) -> bool:
        return self.lattice <= other.lattice

    def __mul__(self, other: IntegralIdeal) -> IntegralIdeal:
        return ideal_mul(self, other)

    def __pow__(self, k: int) -> IntegralIdeal:
        out = unit_ideal(self.order)
        for _ in range(k):
            out = out * self
        return out

    def __add__(self, other: IntegralIdeal) -> IntegralIdeal:
        return IntegralIdeal.from_lattice(self.order, self.lattice + other.lattice)

    def conjugate(self) -> IntegralIdeal:
        t = self.order.trace
        return IntegralIdeal.from_lattice(
            self.order, Lattice.span([(self.a, 0), (self.b + self.c * t, -self.c)])
        )

    def is_unit_ideal(self) -> bool:
        return self.a == 1

    def generators(self) -> tuple[OrderElement, OrderElement]:
        D = self.order
        return D.from_maximal(self.a, 0), D.from_maximal(self.b, self.c)

    def __str__(self):
        return f"[{self.a}, {self.b}+{self.c}w]"


def unit_ideal(O: QuadraticOrder) -> IntegralIdeal:
    return IntegralIdeal(O.maximal, 1, 0, 1)


def ideal_from_generators(O: QuadraticOrder, gens: Iterable[OrderElement | int]) -> IntegralIdeal:
    """HNF of the ideal of the maximal order generated by ``gens``."""
    D = O.maximal
    vecs = []
    for g in gens:
        if isinstance(g, int):
            g = D.element(g)
        v = g.coords
        if v != (0, 0):
            vecs.append(v)
            vecs.append(times_omega(D, v))
    if not vecs:
        raise ValidationError("at least one nonzero generator is required")
    return IntegralIdeal.from_lattice(D, Lattice.span(vecs))


def principal_ideal(x: OrderElement) -> IntegralIdeal:
    return ideal_from_generators(x.parent.maximal, [x])


def ideal_mul(I: IntegralIdeal, J: IntegralIdeal) -> IntegralIdeal:
    if I.order != J.order:
        raise ValidationError("ideals of different rings")
    return IntegralIdeal.from_lattice(I.order, lattice_mul(I.order, I.lattice, J.lattice))


def divide_by_integer(I: IntegralIdeal, k: int) -> IntegralIdeal:
    return IntegralIdeal.from_lattice(I.order, I.lattice.divide(k))


# -- primes ------------------------------------------------------------------

def _omega_roots_mod(D: QuadraticOrder, p: int) -> list[int]:
    """Roots of the minimal polynomial ``X^2 - t*X + n`` of omega modulo ``p``."""
    t, n = D.trace, D.omega_norm
    if p == 2:
        return [r for r in range(2) if (r * r - t * r + n) % 2 == 0]
    roots = sqrt_mod(D.d_K % p, p, all_roots=True) or []
    inv2 = pow(2, -1, p)
    return sorted({(t + s) * inv2 % p for s in roots})


@lru_cache(maxsize=4096)
def primes_above(D: QuadraticOrder, p: int) -> tuple[IntegralIdeal, ...]:
    """Prime ideals of ``D`` over the rational prime ``p``, sorted by (norm, HNF)."""
    D = D.maximal
    roots = _omega_roots_mod(D, p)
    if not roots:
        return (IntegralIdeal(D, p, 0, p),)
    # (p, omega - r) has HNF [p, -r mod p, 1]
    return tuple(sorted((IntegralIdeal(D, p, (-r) % p, 1) for r in roots), key=ideal_sort_key))


def splitting_type(D: QuadraticOrder, p: int) -> str:
    roots = _omega_roots_mod(D.maximal, p)
    return {0: "inert", 1: "ramified", 2: "split"}[len(roots)]


def ideal_sort_key(I: IntegralIdeal):
    return (I.norm(), I.a, I.b, I.c)


def is_prime_ideal(P: IntegralIdeal) -> bool:
    n = P.norm()
    fac = factorint(n)
    if len(fac) != 1:
        return False
    (p, e), = fac.items()
    return e <= 2 and P in primes_above(P.order, p)


def _valuation_step(I: IntegralIdeal, P: IntegralIdeal) -> IntegralIdeal:
    # P * conj(P) = (N(P)), so I * P^-1 = I * conj(P) / N(P)
    return divide_by_integer(ideal_mul(I, P.conjugate()), P.norm())


@dataclass(frozen=True)
class PrimeFactorization:
    ideal: IntegralIdeal
    factors: tuple[tuple[IntegralIdeal, int], ...]

    def product(self) -> IntegralIdeal:
        out = unit_ideal(self.ideal.order)
        for P, e in self.factors:
            out = out * P**e
        return out

    def exponents(self) -> list[int]:
        return [e for _, e in self.factors]

    def count(self) -> int:
        """Number of prime factors with multiplicity."""
        return sum(self.exponents())

    def __iter__(self):
        return iter(self.factors)


def factor_ideal(I: IntegralIdeal) -> PrimeFactorization:
    factors = []
    J = I
    for p in sorted(factorint(I.norm())):
        for P in primes_above(I.order, p):
            e = 0
            while J <= P:
                J = _valuation_step(J, P)
                e += 1
            if e:
                factors.append((P, e))
    assert J.is_unit_ideal(), f"incomplete factorization of {I}"
    return PrimeFactorization(I, tuple(sorted(factors, key=lambda t: ideal_sort_key(t[0]))))


def is_radical(I: IntegralIdeal) -> bool:
    return all(e == 1 for _, e in factor_ideal(I))


def is_principal(I: IntegralIdeal) -> OrderElement | None:
    """A generator of ``I`` (canonical associate) or ``None`` when nonprincipal."""
    D = I.order
    for g in elements_of_norm(D, I.norm()):
        if I.contains(g) and principal_ideal(g) == I:
            return canonical_associate(g)
    return None


def ideals_of_norm(D: QuadraticOrder, n: int) -> list[IntegralIdeal]:
    """Every ideal of the maximal order of norm ``n``, by direct HNF enumeration."""
    D = D.maximal
    out = []
    for c in range(1, math.isqrt(n) + 1):
        if n % (c * c):
            continue
        a = n // c
        for b in range(0, a, c):
            L = Lattice(a, b, c)
            if all(L.contains(times_omega(D, v)) for v in L.basis):
                out.append(IntegralIdeal(D, a, b, c))
    return sorted(out, key=ideal_sort_key)


def ideals_up_to(D: QuadraticOrder, bound: int) -> list[IntegralIdeal]:
    out = []
    for n in range(1, bound + 1):
        out.extend(ideals_of_norm(D, n))
    return out


def ideal_class_count(D: QuadraticOrder) -> int:
    """Class number counted from ideals of norm up to the Minkowski bound.

    Two ideals are equivalent iff ``I * conj(J)`` is principal; this route
    never touches quadratic forms.
    """
    D = D.maximal
    # Minkowski bound (2/pi) sqrt|d_K| < 0.6367 sqrt|d_K|
    mink = math.isqrt(-D.d_K * 6367 * 6367 // 10**8) + 1
    reps: list[IntegralIdeal] = []
    for I in ideals_up_to(D, mink):
        if not any(is_principal(I * J.conjugate()) is not None for J in reps):
            reps.append(I)
    return len(reps)
