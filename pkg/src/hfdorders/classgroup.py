"""Form class groups of negative discriminants via reduced binary quadratic forms.

For discriminant ``f^2 * d_K`` the primitive forms up to proper equivalence
model ``Pic(Z + f*O_K)``; ``f = 1`` gives the ideal class group.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from sympy import factorint

from .core import QuadraticOrder
from .lattice import xgcd


@dataclass(frozen=True, order=True)
class Form:
    """The positive definite form ``A x^2 + B xy + C y^2``."""

    A: int
    B: int
    C: int

    @property
    def disc(self) -> int:
        return self.B * self.B - 4 * self.A * self.C

    def is_reduced(self) -> bool:
        A, B, C = self.A, self.B, self.C
        if not (abs(B) <= A <= C):
            return False
        if (abs(B) == A or A == C) and B < 0:
            return False
        return True

    def normalize(self) -> Form:
        A, B, C = self.A, self.B, self.C
        # shift B into (-A, A]
        r = (A - B) // (2 * A)
        return Form(A, B + 2 * r * A, A * r * r + B * r + C)

    def reduce(self) -> Form:
        F = self.normalize()
        while F.A > F.C or (F.A == F.C and F.B < 0):
            F = Form(F.C, -F.B, F.A).normalize()
        return F

    def inverse(self) -> Form:
        return Form(self.A, -self.B, self.C).reduce()

    def __mul__(self, other: Form) -> Form:
        return compose(self, other)

    def __pow__(self, k: int) -> Form:
        out, base = identity_form(self.disc), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.A, self.B, self.C)

    def __str__(self):
        return f"({self.A},{self.B},{self.C})"


def identity_form(disc: int) -> Form:
    b = disc % 2
    return Form(1, b, (b * b - disc) // 4)


def compose(f1: Form, f2: Form) -> Form:
    """Dirichlet composition followed by reduction."""
    if f1.disc != f2.disc:
        raise ValueError("forms of different discriminants")
    if f1.A > f2.A:
        f1, f2 = f2, f1
    a1, b1, _ = f1.as_tuple()
    a2, b2, c2 = f2.as_tuple()
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, u, _ = xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, x2, v = xgcd(s, d)
        y2 = -v
    v1, v2 = a1 // d1, a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (c2 * d1 + r * (b2 + v2 * r)) // v1
    return Form(a3, b3, c3).reduce()


def reduced_forms(disc: int) -> list[Form]:
    """All primitive reduced forms of the negative discriminant ``disc``."""
    if disc >= 0 or disc % 4 not in (0, 1):
        raise ValueError(f"not a negative discriminant: {disc}")
    out = []
    amax = math.isqrt(-disc // 3)
    for A in range(1, amax + 1):
        for B in range(-A + 1, A + 1):
            if (B * B - disc) % (4 * A):
                continue
            C = (B * B - disc) // (4 * A)
            F = Form(A, B, C)
            if F.is_reduced() and math.gcd(A, B, C) == 1:
                out.append(F)
    return sorted(out)


def element_order(F: Form) -> int:
    e = identity_form(F.disc)
    k, G = 1, F
    while G != e:
        G = G * F
        k += 1
    return k


def group_invariants(forms: list[Form]) -> list[int]:
    """Invariant factors ``d_1 | d_2 | ...`` of the group on ``forms``."""
    h = len(forms)
    if h == 1:
        return []
    orders = [element_order(F) for F in forms]
    pparts: dict[int, list[int]] = {}
    for p, e in factorint(h).items():
        # N_k = #{x : x^(p^k) = 1} = p^(sum_i min(k, e_i))
        logs = [0]
        for k in range(1, e + 1):
            cnt = sum(1 for o in orders if (p**k) % o == 0)
            logs.append(round(math.log(cnt, p)))
        at_least = [logs[k] - logs[k - 1] for k in range(1, e + 1)]
        exps = []
        for k in range(1, e + 1):
            nk = at_least[k - 1] - (at_least[k] if k < e else 0)
            exps += [k] * nk
        pparts[p] = sorted(exps, reverse=True)
    width = max(len(v) for v in pparts.values())
    inv = [1] * width
    for p, exps in pparts.items():
        for i, e in enumerate(exps):
            inv[i] *= p**e
    out = sorted(inv)
    assert math.prod(out) == h
    return out


@dataclass(frozen=True)
class ClassGroupInfo:
    disc: int
    h: int
    invariants: tuple[int, ...]
    representatives: tuple[Form, ...]

    @property
    def is_cyclic(self) -> bool:
        return len(self.invariants) <= 1


@lru_cache(maxsize=None)
def class_group_of_disc(disc: int) -> ClassGroupInfo:
    forms = reduced_forms(disc)
    return ClassGroupInfo(disc, len(forms), tuple(group_invariants(forms)), tuple(forms))


def class_group(O: QuadraticOrder) -> ClassGroupInfo:
    return class_group_of_disc(O.disc)


def class_number(O: QuadraticOrder) -> int:
    return class_group(O).h


def ideal_form(I) -> Form:
    """Reduced form in the class of an ideal of the maximal order."""
    D = I.order
    a, b, c = I.a // I.c, I.b // I.c, 1
    # primitive part a*Z + (b + omega)*Z; N(x*a + y*(b+omega)) / a
    t, n = D.trace, D.omega_norm
    return Form(a, 2 * b + t, (b * b + t * b + n) // a).reduce()
