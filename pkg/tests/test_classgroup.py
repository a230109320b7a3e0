import itertools

import pytest
from hypothesis import given, strategies as st

from hfdorders.classgroup import (
    Form,
    class_group,
    class_group_of_disc,
    compose,
    identity_form,
    ideal_form,
    reduced_forms,
)
from hfdorders.core import make_order
from hfdorders.ideals import ideal_class_count, ideals_up_to
from oracles import brute_reduced_form_count

DS = [-1, -2, -3, -5, -6, -7, -10, -11, -13, -14, -15, -17, -21, -23, -26, -30, -47, -71, -89, -105]


def test_worked_examples():
    assert class_group(make_order(-1)).h == 1
    g5 = class_group(make_order(-5))
    assert g5.h == 2 and [F.as_tuple() for F in g5.representatives] == [(1, 0, 5), (2, 2, 3)]
    g14 = class_group(make_order(-14))
    assert g14.h == 4 and g14.invariants == (4,)
    assert class_group(make_order(-21)).invariants == (2, 2)


@pytest.mark.parametrize("d", DS)
def test_h_matches_brute_forms_and_minkowski_ideals(d):
    D = make_order(d)
    h = class_group(D).h
    assert h == brute_reduced_form_count(D.disc)
    assert h == ideal_class_count(D)


@pytest.mark.parametrize("d,f", [(-1, 2), (-3, 2), (-1, 3), (-5, 2), (-3, 7)])
def test_picard_disc_of_orders(d, f):
    O = make_order(d, f)
    assert class_group(O).disc == f * f * O.d_K
    assert class_group(O).h == brute_reduced_form_count(f * f * O.d_K)


@pytest.mark.parametrize("disc", [-20, -56, -84, -23 * 4, -71, -260])
def test_group_axioms(disc):
    forms = reduced_forms(disc)
    e = identity_form(disc)
    for F in forms:
        assert F.is_reduced() and F.disc == disc
        assert compose(F, e) == F
        assert compose(F, F.inverse()) == e
    for F, G in itertools.product(forms, repeat=2):
        assert compose(F, G) == compose(G, F)
        assert compose(F, G) in forms
    for F, G, H in itertools.product(forms[:4], repeat=3):
        assert compose(compose(F, G), H) == compose(F, compose(G, H))


@given(st.sampled_from(DS))
def test_ideal_form_is_homomorphism(d):
    D = make_order(d)
    ideals = ideals_up_to(D, 30)
    for I in ideals[:12]:
        for J in ideals[:12]:
            assert ideal_form(I * J) == compose(ideal_form(I), ideal_form(J))


def test_invariants_multiply_to_h():
    for d in DS:
        info = class_group(make_order(d))
        prod = 1
        for k in info.invariants:
            prod *= k
        assert prod == info.h


def test_cache_is_transparent():
    a = class_group_of_disc(-56)
    class_group_of_disc.cache_clear()
    b = class_group_of_disc(-56)
    assert a == b


def test_reduce_is_idempotent():
    F = Form(7, 17, 13)
    assert F.reduce().reduce() == F.reduce() and F.reduce().disc == F.disc
