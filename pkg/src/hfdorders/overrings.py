"""The extension ``R = Z + f*O_K  <=  T  <=  D = O_K`` and executable theorem checks.

Every ``*_check``/``*_scan``/``*_verify`` function returns an
:class:`OverringReport` whose status is one of VERIFIED, VACUOUS (a hypothesis
of the statement fails, recorded with a note) or REFUTED (with replayable
witnesses).  Suborder ideals are plain :class:`Lattice` objects in maximal
coordinates; no invertibility is assumed anywhere.
"""
from __future__ import annotations

import enum
import math
import time
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

from sympy import divisors

from .core import (
    KElement,
    OrderElement,
    QuadraticOrder,
    ValidationError,
    canonical_key,
    elements_up_to,
    is_unit,
    norm,
    units,
)
from .factor import (
    UncertifiedDomain,
    Verdict,
    boundary,
    boundary_norm_requirement,
    engine,
    hfd_certify,
    irreducibles_up_to,
    order_certificate,
)
from .ideals import (
    IntegralIdeal,
    PrimeFactorization,
    factor_ideal,
    ideal_from_generators,
    ideal_sort_key,
    ideals_up_to,
    is_principal,
    order_lattice,
    principal_ideal,
)
from .lattice import Lattice, hnf_with_transform


class NotIntermediate(ValidationError):
    pass


class NonComaximal(ValueError):
    """Two CRT moduli share a prime."""


class NotComaximal(ValueError):
    """An element is not comaximal to the conductor."""


class Status(str, enum.Enum):
    VERIFIED = "VERIFIED"
    VACUOUS = "VACUOUS"
    REFUTED = "REFUTED"


def coords(x: OrderElement) -> list[int]:
    return list(x.coords)


@dataclass
class OverringReport:
    check: str
    orders: list[list[int]]
    bound: int
    status: Status
    witnesses: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    elapsed: float = 0.0

    def to_dict(self) -> dict:
        """Stable part only; ``elapsed`` is reported separately."""
        return {
            "check": self.check,
            "orders": self.orders,
            "bound": self.bound,
            "status": self.status.value,
            "witnesses": self.witnesses,
            "notes": self.notes,
            "stats": self.stats,
        }


def _pair(R: QuadraticOrder, T: QuadraticOrder | None = None) -> list[list[int]]:
    out = [[R.d, R.f]]
    if T is not None:
        out.append([T.d, T.f])
    return out


# -- the lattice of intermediate orders ---------------------------------------

def intermediate_orders(R: QuadraticOrder) -> list[QuadraticOrder]:
    """All ``Z + h*O_K`` with ``h | f``, from ``R`` down to the maximal order."""
    return [QuadraticOrder(R.d, h) for h in sorted(divisors(R.f), reverse=True)]


def _check_intermediate(R: QuadraticOrder, T: QuadraticOrder):
    if R.d != T.d or R.f % T.f:
        raise NotIntermediate(f"{T} is not an overring of {R}")


def lattice_times(D: QuadraticOrder, L: Lattice, t: OrderElement) -> Lattice:
    return Lattice.span((D.from_maximal(*v) * t).coords for v in L.basis)


def preimage_under(D: QuadraticOrder, L: Lattice, t: OrderElement) -> Lattice:
    """``{x in O_K : x*t in L}`` as ``(conj(t)*L  meet  N(t)*Z^2) / N(t)``."""
    n = norm(t)
    image = lattice_times(D, L, t.conjugate())
    return image.intersect(Lattice(n, 0, n)).divide(n)


def colon(R: QuadraticOrder, T: QuadraticOrder) -> Lattice:
    """``(R:T) = {x : x*T <= R}``; contained in ``R`` because ``1`` lies in ``T``."""
    D = R.maximal
    L = order_lattice(R)
    out = L
    for t in (T.one(), T.element(0, 1)):
        out = out.intersect(preimage_under(D, L, D.coerce(t)))
    return out


@dataclass(frozen=True)
class ConductorData:
    sub: QuadraticOrder
    over: QuadraticOrder
    lattice: Lattice
    extension: IntegralIdeal
    factorization: PrimeFactorization
    radical: bool
    contractions: tuple[Lattice, ...]

    def to_dict(self) -> dict:
        return {
            "sub": [self.sub.d, self.sub.f],
            "over": [self.over.d, self.over.f],
            "lattice": [self.lattice.a, self.lattice.b, self.lattice.c],
            "extension": list(self.extension.hnf),
            "factorization": [[list(P.hnf), e] for P, e in self.factorization],
            "radical": self.radical,
            "contractions": [[Q.a, Q.b, Q.c] for Q in self.contractions],
        }


def conductor(R: QuadraticOrder, T: QuadraticOrder) -> ConductorData:
    _check_intermediate(R, T)
    D = R.maximal
    L = colon(R, T)
    m = R.f // T.f
    # closed form: (Z + m*O_T) has conductor m*O_T in O_T
    assert L == Lattice(m, 0, R.f), (L, m)
    ext = ideal_from_generators(D, [D.from_maximal(*v) for v in L.basis])
    if T.is_maximal:
        assert ext == ideal_from_generators(D, [R.f])
    fac = factor_ideal(ext)
    radical = all(e == 1 for _, e in fac)
    RL = order_lattice(R)
    contractions = tuple((P**e).lattice.intersect(RL) for P, e in fac)
    return ConductorData(R, T, L, ext, fac, radical, contractions)


def is_radical(C: ConductorData) -> bool:
    return C.radical


def order_generated(R: QuadraticOrder, alpha: OrderElement) -> QuadraticOrder:
    """``R[alpha]``, which is ``Z + gcd(f, y)*O_K`` for ``alpha = x + y*omega``."""
    h = math.gcd(R.f, alpha.y)
    S = QuadraticOrder(R.d, h)
    D = R.maximal
    a = D.coerce(alpha)
    fw = D.element(0, R.f)
    # R[alpha] is spanned by R and R*alpha since alpha is quadratic
    span = Lattice.span([(1, 0), fw.coords, a.coords, (fw * a).coords])
    assert span == order_lattice(S), (span, S)
    return S


# -- CRT in the maximal order --------------------------------------------------

def _prime_of(M: IntegralIdeal) -> IntegralIdeal:
    fac = factor_ideal(M)
    if len(fac.factors) != 1:
        raise ValueError(f"modulus {M} is not a prime power")
    return fac.factors[0][0]


def crt_solve(D: QuadraticOrder, system) -> OrderElement:
    """``x`` with ``x = r_i mod M_i`` for all ``(r_i, M_i)``, reduced modulo the product."""
    D = D.maximal
    system = [(D.coerce(r), M) for r, M in system]
    primes = [_prime_of(M) for _, M in system]
    for i in range(len(primes)):
        for j in range(i):
            if primes[i] == primes[j]:
                raise NonComaximal(f"moduli {system[j][1]} and {system[i][1]} share the prime {primes[i]}")
    total = None
    for _, M in system:
        total = M if total is None else total * M
    x = D.zero()
    for i, (r, M) in enumerate(system):
        others = None
        for j, (_, N) in enumerate(system):
            if j != i:
                others = N if others is None else others * N
        if others is None:
            e = D.one()
        else:
            vecs = list(others.lattice.basis) + list(M.lattice.basis)
            L, (coeff_one, _) = hnf_with_transform(vecs)
            assert L == Lattice(1, 0, 1)
            # the part of 1 that lies in the product of the other moduli
            ex = sum(k * v[0] for k, v in zip(coeff_one[:2], vecs[:2]))
            ey = sum(k * v[1] for k, v in zip(coeff_one[:2], vecs[:2]))
            e = D.from_maximal(ex, ey)
        x = x + r * e
    return D.from_maximal(*total.lattice.reduce(x.coords))


# -- membership through congruences ---------------------------------------------

@lru_cache(maxsize=None)
def _residues(T: QuadraticOrder, M: IntegralIdeal) -> frozenset[tuple[int, int]]:
    """Images of ``T`` in ``O_K / M`` by enumeration of ``u + v*h*omega``."""
    n = M.norm()
    L = M.lattice
    return frozenset(L.reduce((u, v * T.f)) for u in range(n) for v in range(n))


def units_cover(R: QuadraticOrder) -> tuple[bool, OrderElement | None]:
    """Decide ``O_K = R * U(O_K)`` exactly by checking every residue modulo ``f*O_K``."""
    D = R.maximal
    U = units(D)
    f = R.f
    for u in range(f):
        for v in range(f):
            x = D.from_maximal(u, v)
            if not any((e * x).y % f == 0 for e in U):
                return False, x
    return True, None


@dataclass(frozen=True)
class MembershipResult:
    by_congruence: bool
    by_lattice: bool
    hypothesis_verified: bool

    @property
    def agree(self) -> bool:
        return self.by_congruence == self.by_lattice

    @property
    def value(self) -> bool:
        return self.by_lattice


def membership_via_congruences(x: OrderElement, T: QuadraticOrder, C: ConductorData) -> MembershipResult:
    """Compare ``x in T`` decided by residues modulo each ``P_i^e_i`` with direct lattice membership."""
    _check_intermediate(C.sub, T)
    D = T.maximal
    x = D.coerce(x)
    by_cong = True
    for P, e in C.factorization:
        M = P**e
        if M.lattice.reduce(x.coords) not in _residues(T, M):
            by_cong = False
            break
    return MembershipResult(by_cong, T.contains(x), units_cover(C.sub)[0])


def unit_associate_into(R: QuadraticOrder, x: OrderElement) -> tuple[OrderElement, OrderElement] | None:
    """A unit ``u`` of ``O_K`` with ``u*x`` in ``R``, as ``(u, u*x)``; ``None`` if none exists.

    Elements already in ``R`` come back with ``u = 1``; otherwise the unit
    giving the canonical (per :func:`canonical_key`) product is chosen.
    """
    D = R.maximal
    x = D.coerce(x)
    if R.contains(x):
        return D.one(), R.coerce(x)
    hits = [(u, u * x) for u in units(D) if R.contains(u * x)]
    if not hits:
        return None
    u, y = min(hits, key=lambda h: canonical_key(h[1]))
    return u, R.coerce(y)


def _unit_group_order_mod(D: QuadraticOrder, f: int) -> int:
    return sum(1 for u in range(f) for v in range(f)
               if math.gcd(norm(D.from_maximal(u, v)), f) == 1)


def comaximal_power_into(R: QuadraticOrder, x: OrderElement) -> tuple[int, OrderElement]:
    """Least ``k`` with ``x**k`` in ``R`` for ``x`` comaximal to ``f*O_K``."""
    D = R.maximal
    x = D.coerce(x)
    if not ideal_from_generators(D, [x, R.f]).is_unit_ideal():
        raise NotComaximal(f"{x} is not comaximal to the conductor {R.f}*O_K")
    order = _unit_group_order_mod(D, R.f)
    y = x
    for k in range(1, order + 1):
        if R.contains(y):
            assert order % k == 0
            return k, R.coerce(y)
        y = y * x
    raise AssertionError("power did not land in R within the unit group order")


# -- sweeps -----------------------------------------------------------------------

def _certify_for_boundary(R: QuadraticOrder, bound: int):
    cert = order_certificate(R, max(2, boundary_norm_requirement(R, bound)))
    if not cert.is_hfd:
        raise UncertifiedDomain(f"{R} is not half-factorial ({cert.verdict.value})")
    return cert


def _nonunits(D: QuadraticOrder, bound: int):
    for n, elems in elements_up_to(D, bound).items():
        if n > 1:
            yield from elems


def boundary_zero_scan(R: QuadraticOrder, bound: int) -> OverringReport:
    """Every nonunit of ``O_K`` up to ``bound`` must have strictly positive boundary."""
    t0 = time.perf_counter()
    cert = _certify_for_boundary(R, bound)
    D = R.maximal
    witnesses = []
    count = 0
    hist: Counter[int] = Counter()
    for x in _nonunits(D, bound):
        count += 1
        b = boundary(R, KElement(x), cert)
        hist[b] += 1
        if b <= 0:
            fac = factor_ideal(principal_ideal(x))
            witnesses.append({
                "element": coords(x),
                "boundary": b,
                "prime_in_D": len(fac.factors) == 1 and fac.factors[0][1] == 1,
                "all_prime_factors_principal": all(is_principal(P) is not None for P, _ in fac),
            })
    status = Status.REFUTED if witnesses else Status.VERIFIED
    return OverringReport(
        "boundary_zero", _pair(R), bound, status, witnesses, [],
        {"elements": count, "boundary_histogram": {str(k): v for k, v in sorted(hist.items())}},
        time.perf_counter() - t0,
    )


def irreducible_boundary_profile(R: QuadraticOrder, T: QuadraticOrder, bound: int) -> OverringReport:
    """Boundaries of the irreducibles of ``T`` against the HFD status of ``T``."""
    t0 = time.perf_counter()
    _check_intermediate(R, T)
    cert = _certify_for_boundary(R, bound)
    tcert = order_certificate(T, bound)
    values: Counter[int] = Counter()
    witnesses, notes = [], []
    for p in irreducibles_up_to(T, bound):
        b = boundary(R, KElement(p), cert)
        values[b] += 1
        if b == 0:
            witnesses.append({"element": coords(p), "boundary": b, "reason": "nonunit of boundary 0"})
        elif b != 1 and tcert.is_hfd:
            witnesses.append({"element": coords(p), "boundary": b,
                              "reason": "boundary outside {0,1} in a half-factorial overring"})
    all_one = set(values) <= {1}
    if not tcert.is_hfd and all_one:
        witnesses.append({"reason": "overring is not half-factorial but every irreducible has boundary 1",
                          "length_witness": tcert.witness.to_dict()})
    if not tcert.is_hfd:
        notes.append("overring is not half-factorial; boundaries above 1 are expected")
    status = Status.REFUTED if witnesses else Status.VERIFIED
    return OverringReport(
        "profile", _pair(R, T), bound, status, witnesses, notes,
        {"irreducibles": sum(values.values()),
         "boundary_values": {str(k): v for k, v in sorted(values.items())},
         "overring_verdict": tcert.verdict.value},
        time.perf_counter() - t0,
    )


def bandaid_check(R: QuadraticOrder, bound: int) -> OverringReport:
    """Irreducible in ``R[alpha]`` iff boundary 1, for nonunits ``alpha`` of ``O_K``."""
    t0 = time.perf_counter()
    cert = _certify_for_boundary(R, bound)
    D = R.maximal
    inter = {T: order_certificate(T, bound) for T in intermediate_orders(R)}
    all_hfd = all(c.is_hfd for c in inter.values())
    witnesses, notes = [], []
    count = agree = 0
    example = None
    for a in _nonunits(D, bound):
        count += 1
        b = boundary(R, KElement(a), cert)
        S = order_generated(R, a)
        irr = engine(S).is_irreducible(S.coerce(a))
        if irr == (b == 1):
            agree += 1
        elif all_hfd:
            witnesses.append({"element": coords(a), "boundary": b, "generated_order": [S.d, S.f],
                              "irreducible_in_generated": irr})
        if irr and b > 1 and example is None:
            example = {"element": coords(a), "boundary": b, "generated_order": [S.d, S.f]}
    if all_hfd:
        status = Status.REFUTED if witnesses else Status.VERIFIED
    else:
        bad = [[T.d, T.f] for T, c in inter.items() if not c.is_hfd]
        notes.append(f"intermediate orders {bad} are not half-factorial")
        if example is not None:
            status = Status.VERIFIED
            witnesses.append(example)
        else:
            status = Status.VACUOUS
            notes.append("no irreducible of boundary above 1 found within the bound")
    return OverringReport(
        "bandaid", _pair(R), bound, status, witnesses, notes,
        {"elements": count, "biconditional_holds": agree,
         "intermediate_verdicts": {f"{T.f}": c.verdict.value for T, c in inter.items()}},
        time.perf_counter() - t0,
    )


def uic_check(R: QuadraticOrder, bound: int) -> OverringReport:
    """Distinct ideals of ``O_K`` must have distinct contractions to ``R``."""
    t0 = time.perf_counter()
    D = R.maximal
    notes = ["contraction injectivity is checked for ideals of the maximal order; the statement "
             "speaks of ideals of R, but its argument uses an element of an ideal of O_K and units of O_K"]
    ok, bad = units_cover(R)
    if not ok:
        notes.append(f"O_K != R*U(O_K): residue {list(bad.coords)} has no unit multiple in R")
        return OverringReport("uic", _pair(R, D), bound, Status.VACUOUS, [], notes, {},
                              time.perf_counter() - t0)
    RL = order_lattice(R)
    seen: dict[Lattice, IntegralIdeal] = {}
    witnesses = []
    ideals = ideals_up_to(D, bound)
    for I in ideals:
        Q = I.lattice.intersect(RL)
        J = seen.get(Q)
        if J is not None:
            witnesses.append({"ideals": [list(J.hnf), list(I.hnf)], "contraction": [Q.a, Q.b, Q.c]})
        else:
            seen[Q] = I
    status = Status.REFUTED if witnesses else Status.VERIFIED
    return OverringReport("uic", _pair(R, D), bound, status, witnesses, notes,
                          {"ideals": len(ideals), "distinct_contractions": len(seen)},
                          time.perf_counter() - t0)


def squeeze_verify(R: QuadraticOrder, bound: int) -> OverringReport:
    """Radical conductor and HFD ``R`` force every intermediate order to be HFD."""
    t0 = time.perf_counter()
    D = R.maximal
    C = conductor(R, D)
    rcert = order_certificate(R, bound)
    stats = {"conductor": C.to_dict(), "order_verdict": rcert.verdict.value}
    notes = []
    if not C.radical:
        notes.append("conductor is not radical")
        return OverringReport("squeeze", _pair(R), bound, Status.VACUOUS, [], notes, stats,
                              time.perf_counter() - t0)
    if not rcert.is_hfd:
        notes.append("order is not half-factorial")
        stats["order_witness"] = rcert.witness.to_dict()
        return OverringReport("squeeze", _pair(R), bound, Status.VACUOUS, [], notes, stats,
                              time.perf_counter() - t0)
    witnesses = []
    verdicts = {}
    for T in intermediate_orders(R):
        c = order_certificate(T, bound)
        verdicts[str(T.f)] = c.verdict.value
        if not c.is_hfd:
            witnesses.append({"order": [T.d, T.f], "length_witness": c.witness.to_dict()})
    stats["intermediate_verdicts"] = verdicts
    status = Status.REFUTED if witnesses else Status.VERIFIED
    return OverringReport("squeeze", _pair(R), bound, status, witnesses, notes, stats,
                          time.perf_counter() - t0)


def unit_associate_sweep(R: QuadraticOrder, bound: int) -> OverringReport:
    """Every element of ``O_K`` up to ``bound`` has a unit multiple in ``R``."""
    t0 = time.perf_counter()
    D = R.maximal
    witnesses = []
    count = 0
    for x in _nonunits(D, bound):
        count += 1
        if unit_associate_into(R, x) is None:
            witnesses.append({"element": coords(x)})
    exact, _ = units_cover(R)
    stats = {"elements": count, "failures": len(witnesses), "exact_residue_check": exact}
    if not order_certificate(R, bound).is_hfd:
        return OverringReport("unit_associate", _pair(R, D), bound, Status.VACUOUS, witnesses[:10],
                              ["order is not half-factorial"], stats, time.perf_counter() - t0)
    status = Status.REFUTED if witnesses else Status.VERIFIED
    return OverringReport("unit_associate", _pair(R, D), bound, status, witnesses, [], stats,
                          time.perf_counter() - t0)


def membership_check(R: QuadraticOrder, bound: int) -> OverringReport:
    """Congruence membership against lattice membership for every intermediate order."""
    t0 = time.perf_counter()
    D = R.maximal
    C = conductor(R, D)
    ok, _ = units_cover(R)
    if not ok:
        return OverringReport("membership", _pair(R), bound, Status.VACUOUS, [],
                              ["O_K != R*U(O_K)"], {}, time.perf_counter() - t0)
    witnesses = []
    count = 0
    members = Counter()
    for T in intermediate_orders(R):
        for n, elems in elements_up_to(D, bound).items():
            for x in elems:
                res = membership_via_congruences(x, T, C)
                count += 1
                members[str(T.f)] += res.by_lattice
                if not res.agree:
                    witnesses.append({"element": coords(x), "order": [T.d, T.f],
                                      "by_congruence": res.by_congruence, "by_lattice": res.by_lattice})
    status = Status.REFUTED if witnesses else Status.VERIFIED
    return OverringReport("membership", _pair(R), bound, status, witnesses, [],
                          {"comparisons": count, "members": dict(members)},
                          time.perf_counter() - t0)
