"""Full-rank sublattices of Z^2 in Hermite normal form.

A lattice is stored as ``(a, b, c)``: it is spanned by ``(a, 0)`` and
``(b, c)`` with ``a, c > 0`` and ``0 <= b < a``.  Coordinates are taken over
the maximal-order basis ``{1, omega}``, so ideals of the maximal order and
ideals of suborders are both plain instances.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

Vector = tuple[int, int]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, u, v)`` with ``u*a + v*b == g == gcd(a, b) >= 0``."""
    u0, v0, u1, v1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    if a < 0:
        a, u0, v0 = -a, -u0, -v0
    return a, u0, v0


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int] | None:
    """Solve ``x = r1 (m1), x = r2 (m2)``; ``(x mod l, l)`` or ``None`` if incompatible."""
    g, u, _ = xgcd(m1, m2)
    if (r2 - r1) % g:
        return None
    l = m1 // g * m2
    x = r1 + (r2 - r1) // g * u % (m2 // g) * m1
    return x % l, l


def _combine(rows, i, j, q):
    # rows[j] -= q * rows[i]
    (xi, yi), ci = rows[i]
    (xj, yj), cj = rows[j]
    rows[j] = ((xj - q * xi, yj - q * yi), [b - q * a for a, b in zip(ci, cj)])


def hnf_with_transform(vectors: Sequence[Vector]):
    """HNF of the span of ``vectors`` together with integer combinations.

    Returns ``(lattice, (coeff_a, coeff_bc))`` where ``coeff_a`` expresses
    ``(a, 0)`` and ``coeff_bc`` expresses ``(b, c)`` over the input vectors.
    """
    n = len(vectors)
    rows = [((int(x), int(y)), [int(k == i) for k in range(n)]) for i, (x, y) in enumerate(vectors)]

    def euclid(idx_of):
        live = [i for i in range(n) if idx_of(rows[i][0]) != 0]
        while len(live) > 1:
            p = min(live, key=lambda i: abs(idx_of(rows[i][0])))
            for j in live:
                if j != p:
                    _combine(rows, p, j, idx_of(rows[j][0]) // idx_of(rows[p][0]))
            live = [i for i in live if idx_of(rows[i][0]) != 0]
        return live[0] if live else None

    piv = euclid(lambda v: v[1])
    if piv is None:
        raise ValueError("vectors do not span a full-rank lattice")
    if rows[piv][0][1] < 0:
        rows[piv] = ((-rows[piv][0][0], -rows[piv][0][1]), [-k for k in rows[piv][1]])
    saved = rows[piv]
    rows[piv] = ((0, 0), [0] * n)
    arow = euclid(lambda v: v[0])
    rows[piv] = saved
    if arow is None:
        raise ValueError("vectors do not span a full-rank lattice")
    if rows[arow][0][0] < 0:
        rows[arow] = ((-rows[arow][0][0], 0), [-k for k in rows[arow][1]])
    a = rows[arow][0][0]
    _combine(rows, arow, piv, rows[piv][0][0] // a)
    (b, c), cb = rows[piv]
    return Lattice(a, b, c), (rows[arow][1], cb)


@dataclass(frozen=True)
class Lattice:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a <= 0 or self.c <= 0 or not 0 <= self.b < self.a:
            raise ValueError(f"not a lattice in HNF: {(self.a, self.b, self.c)}")

    @classmethod
    def span(cls, vectors: Iterable[Vector]) -> Lattice:
        return hnf_with_transform(list(vectors))[0]

    @property
    def basis(self) -> tuple[Vector, Vector]:
        return (self.a, 0), (self.b, self.c)

    @property
    def index(self) -> int:
        """Index in Z^2 (the norm, when the lattice is an ideal of the maximal order)."""
        return self.a * self.c

    def contains(self, v: Vector) -> bool:
        x, y = v
        if y % self.c:
            return False
        return (x - (y // self.c) * self.b) % self.a == 0

    def __contains__(self, v: Vector) -> bool:
        return self.contains(v)

    def __le__(self, other: Lattice) -> bool:
        return all(other.contains(v) for v in self.basis)

    def __ge__(self, other: Lattice) -> bool:
        return other <= self

    def reduce(self, v: Vector) -> Vector:
        """Canonical representative of ``v`` modulo the lattice."""
        x, y = v
        k = y // self.c
        x, y = x - k * self.b, y - k * self.c
        return x % self.a, y

    def __add__(self, other: Lattice) -> Lattice:
        return Lattice.span(self.basis + other.basis)

    def scale(self, k: int) -> Lattice:
        k = abs(k)
        return Lattice(self.a * k, self.b * k, self.c * k)

    def divide(self, k: int) -> Lattice:
        if self.a % k or self.b % k or self.c % k:
            raise ValueError(f"lattice is not divisible by {k}")
        return Lattice(self.a // k, self.b // k, self.c // k)

    def intersect(self, other: Lattice) -> Lattice:
        a1, b1, c1 = self.a, self.b, self.c
        a2, b2, c2 = other.a, other.b, other.c
        C = c1 * c2 // math.gcd(c1, c2)
        g = math.gcd(a1, a2)
        # y = k*C forces x = k*(C/c1)*b1 (a1) and x = k*(C/c2)*b2 (a2)
        delta = (C // c1) * b1 - (C // c2) * b2
        k = g // math.gcd(g, delta)
        sol = crt_pair(k * (C // c1) * b1, a1, k * (C // c2) * b2, a2)
        assert sol is not None
        x, l = sol
        return Lattice(l, x % l, k * C)
