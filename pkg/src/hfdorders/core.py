"""Exact arithmetic in orders ``Z + f*O_K`` of imaginary quadratic fields.

Elements of an order ``O_f`` are stored over the basis ``{1, tau}`` with
``tau = f * omega``, where ``omega`` is ``sqrt(d)`` for ``d = 2, 3 (mod 4)``
and ``(1 + sqrt(d)) / 2`` for ``d = 1 (mod 4)``.  Equality and hashing go
through the maximal-order coordinates, so the same algebraic integer viewed
in two different orders compares equal.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from sympy import factorint


class ValidationError(ValueError):
    """Raised when an order or element is constructed from invalid data."""


def is_squarefree(n: int) -> bool:
    return all(e == 1 for e in factorint(abs(n)).values())


@dataclass(frozen=True, order=True)
class QuadraticOrder:
    """The order of conductor index ``f`` in ``Q(sqrt(d))``, ``d < 0``."""

    d: int
    f: int = 1

    def __post_init__(self):
        if self.d >= 0:
            raise ValidationError(f"d must be negative, got d={self.d}")
        if not is_squarefree(self.d):
            raise ValidationError(f"d must be squarefree, got d={self.d}")
        if self.f <= 0:
            raise ValidationError(f"f must be positive, got f={self.f}")

    # omega satisfies omega^2 = trace*omega - omega_norm
    @property
    def trace(self) -> int:
        return 1 if self.d % 4 == 1 else 0

    @property
    def omega_norm(self) -> int:
        return (1 - self.d) // 4 if self.d % 4 == 1 else -self.d

    @property
    def d_K(self) -> int:
        return self.d if self.d % 4 == 1 else 4 * self.d

    @property
    def disc(self) -> int:
        return self.f * self.f * self.d_K

    @property
    def is_maximal(self) -> bool:
        return self.f == 1

    @property
    def maximal(self) -> QuadraticOrder:
        return self if self.f == 1 else QuadraticOrder(self.d, 1)

    def suborder(self, f: int) -> QuadraticOrder:
        return QuadraticOrder(self.d, f)

    # -- elements --------------------------------------------------------
    def element(self, a: int, b: int = 0) -> OrderElement:
        """``a + b*tau`` in this order's own basis."""
        return OrderElement(self, a, b)

    def from_maximal(self, x: int, y: int) -> OrderElement:
        """The element ``x + y*omega``; raises if it does not lie in this order."""
        if y % self.f:
            raise ValidationError(f"{x} + {y}*omega is not in the order of conductor {self.f}")
        return OrderElement(self, x, y // self.f)

    def contains(self, x: OrderElement) -> bool:
        return x.parent.d == self.d and x.y % self.f == 0

    def coerce(self, x: OrderElement) -> OrderElement:
        """Re-express ``x`` in this order's basis (it must be a member)."""
        if x.parent == self:
            return x
        if x.parent.d != self.d:
            raise ValidationError("elements live in different fields")
        return self.from_maximal(x.x, x.y)

    def zero(self) -> OrderElement:
        return OrderElement(self, 0, 0)

    def one(self) -> OrderElement:
        return OrderElement(self, 1, 0)

    def __str__(self):
        if self.f == 1:
            return f"O_K(d={self.d})"
        return f"Z+{self.f}O_K(d={self.d})"


def make_order(d: int, f: int = 1) -> QuadraticOrder:
    return QuadraticOrder(int(d), int(f))


@dataclass(frozen=True, eq=False)
class OrderElement:
    """``a + b*tau`` in ``parent``; value semantics through maximal coordinates."""

    parent: QuadraticOrder
    a: int
    b: int

    @property
    def x(self) -> int:
        return self.a

    @property
    def y(self) -> int:
        return self.b * self.parent.f

    @property
    def coords(self) -> tuple[int, int]:
        """Coordinates over ``{1, omega}`` of the maximal order."""
        return (self.a, self.b * self.parent.f)

    def _key(self):
        return (self.parent.d, self.a, self.b * self.parent.f)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.b == 0 and self.a == other
        if not isinstance(other, OrderElement):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def _common(self, other) -> tuple[QuadraticOrder, int, int]:
        if isinstance(other, int):
            return self.parent, other, 0
        if other.parent == self.parent:
            return self.parent, other.a, other.b
        if other.parent.d != self.parent.d:
            raise ValidationError("elements live in different fields")
        O = QuadraticOrder(self.parent.d, math.gcd(self.parent.f, other.parent.f))
        return O, other.x, other.y // O.f

    def _lift(self, O: QuadraticOrder) -> tuple[int, int]:
        return self.a, self.b * self.parent.f // O.f

    def __add__(self, other):
        O, c, e = self._common(other)
        a, b = self._lift(O)
        return OrderElement(O, a + c, b + e)

    __radd__ = __add__

    def __neg__(self):
        return OrderElement(self.parent, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        O, c, e = self._common(other)
        a, b = self._lift(O)
        f = O.f
        # tau^2 = f*t*tau - f^2*n
        return OrderElement(
            O,
            a * c - f * f * O.omega_norm * b * e,
            a * e + b * c + f * O.trace * b * e,
        )

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not order elements")
        result, base = self.parent.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> OrderElement:
        O = self.parent
        return OrderElement(O, self.a + O.f * O.trace * self.b, -self.b)

    def norm(self) -> int:
        return norm(self)

    def trace(self) -> int:
        return 2 * self.a + self.parent.f * self.parent.trace * self.b

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"OrderElement({self.parent.d}, f={self.parent.f}, {format_element(self)})"

    def __str__(self):
        return format_element(self)


def format_element(x: OrderElement) -> str:
    """Human-readable form over the maximal basis: ``1+2w`` or ``1+2sqrt(-5)``.

    ``w`` stands for ``(1 + sqrt(d))/2`` and only appears when ``d = 1 (mod 4)``.
    """
    u, v = x.coords
    if v == 0:
        return str(u)
    sym = "w" if x.parent.d % 4 == 1 else f"sqrt({x.parent.d})"
    if v == 1:
        tail = sym
    elif v == -1:
        tail = "-" + sym
    else:
        tail = f"{v}{sym}"
    if u == 0:
        return tail
    return f"{u}{'' if tail.startswith('-') else '+'}{tail}"


def norm(x: OrderElement) -> int:
    O = x.parent
    f = O.f
    return x.a * x.a + f * O.trace * x.a * x.b + f * f * O.omega_norm * x.b * x.b


def divide_exact(x: OrderElement, y: OrderElement) -> OrderElement | None:
    """``q`` with ``x == q*y`` in ``x``'s order, or ``None``."""
    if y.is_zero():
        raise ZeroDivisionError("division by the zero element")
    O = x.parent
    n = norm(y)
    num = x * y.conjugate()
    u, v = num.coords
    if u % n or v % n:
        return None
    u, v = u // n, v // n
    if v % O.f:
        return None
    return O.from_maximal(u, v)


def elements_of_norm(O: QuadraticOrder, n: int) -> list[OrderElement]:
    """Every element of ``O`` of norm exactly ``n``, sorted by coordinates."""
    return list(_elements_of_norm(O, n))


@lru_cache(maxsize=1 << 16)
def _elements_of_norm(O: QuadraticOrder, n: int) -> tuple[OrderElement, ...]:
    if n < 0:
        return ()
    if n == 0:
        return (O.zero(),)
    f, t, dk = O.f, O.trace, -O.d_K
    # 4n = (2a + f*t*b)^2 + |d_K| f^2 b^2
    scale = dk * f * f
    bmax = math.isqrt(4 * n // scale)
    out = []
    for b in range(-bmax, bmax + 1):
        rest = 4 * n - scale * b * b
        if rest < 0:
            continue
        s = math.isqrt(rest)
        if s * s != rest:
            continue
        for root in {s, -s}:
            twice_a = root - f * t * b
            if twice_a % 2 == 0:
                out.append(OrderElement(O, twice_a // 2, b))
    out.sort(key=lambda e: (e.a, e.b))
    return tuple(out)


def units(O: QuadraticOrder) -> list[OrderElement]:
    return elements_of_norm(O, 1)


def is_unit(x: OrderElement) -> bool:
    return norm(x) == 1


def canonical_key(x: OrderElement) -> tuple[int, int]:
    # larger first coordinate wins, then larger second
    u, v = x.coords
    return (-u, -v)


def canonical_associate(x: OrderElement, O: QuadraticOrder | None = None) -> OrderElement:
    """Representative of the orbit of ``x`` under the units of ``O`` (default: its parent)."""
    O = O or x.parent
    x = O.coerce(x)
    return min((u * x for u in units(O)), key=canonical_key)


def associates(x: OrderElement, y: OrderElement, O: QuadraticOrder | None = None) -> bool:
    O = O or x.parent
    return canonical_associate(x, O) == canonical_associate(y, O)


def elements_up_to(O: QuadraticOrder, bound: int) -> dict[int, list[OrderElement]]:
    """Map ``n -> elements_of_norm(O, n)`` for ``1 <= n <= bound`` (empty norms omitted)."""
    out: dict[int, list[OrderElement]] = {}
    f, t, dk = O.f, O.trace, -O.d_K
    scale = dk * f * f
    bmax = math.isqrt(4 * bound // scale)
    for b in range(-bmax, bmax + 1):
        rest = 4 * bound - scale * b * b
        s = math.isqrt(rest)
        # 2a + f*t*b ranges over [-s, s]
        lo, hi = -s - f * t * b, s - f * t * b
        for twice_a in range(lo + (lo % 2), hi + 1, 2):
            e = OrderElement(O, twice_a // 2, b)
            n = norm(e)
            if 1 <= n <= bound:
                out.setdefault(n, []).append(e)
    for v in out.values():
        v.sort(key=lambda e: (e.a, e.b))
    return dict(sorted(out.items()))


@dataclass(frozen=True, eq=False)
class KElement:
    """A nonzero element ``num / den`` of the field, ``num`` over the maximal order."""

    num: OrderElement
    den: int = 1

    def __post_init__(self):
        if self.num.is_zero():
            raise ValidationError("KElement models the nonzero field elements")
        if self.den <= 0:
            raise ValidationError("denominator must be positive")
        O = self.num.parent.maximal
        u, v = self.num.coords
        g = math.gcd(self.den, u, v)
        object.__setattr__(self, "num", O.from_maximal(u // g, v // g))
        object.__setattr__(self, "den", self.den // g)

    @classmethod
    def of(cls, x: OrderElement | int, O: QuadraticOrder | None = None) -> KElement:
        if isinstance(x, int):
            return cls(O.maximal.element(x))
        return cls(x.parent.maximal.coerce(x))

    @property
    def field(self) -> int:
        return self.num.parent.d

    def __eq__(self, other):
        if not isinstance(other, KElement):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __mul__(self, other: KElement) -> KElement:
        return KElement(self.num * other.num, self.den * other.den)

    def inverse(self) -> KElement:
        # 1/(a/b) = b*conj(a)/N(a)
        return KElement(self.num.conjugate() * self.den, norm(self.num))

    def __truediv__(self, other: KElement) -> KElement:
        return self * other.inverse()

    def is_integral(self) -> bool:
        return self.den == 1

    def __repr__(self):
        return f"KElement(({self.num})/{self.den})"
