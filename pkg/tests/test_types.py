from fractions import Fraction
from itertools import product

from hypothesis import given
from hypothesis import strategies as st

from sejc.sampling import make_rng, random_value
from sejc.types import (AB, ACH, ACONS, AI, ALL_TYPES, AN, AR, AS, AV, AY, JINT,
                        FnType, type_glb, type_leq, type_lub, value_has_type)
from sejc.values import NIL, T, Cons, JInt, rational

EDGES = {(AI, AR), (AR, AN), (AN, AV), (ACONS, AV), (AB, AY), (AY, AV), (ACH, AV), (AS, AV)}


def closure():
    # reflexive-transitive closure of the generator edges, computed independently
    leq = {(t, t) for t in ALL_TYPES} | set(EDGES)
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in product(list(leq), list(leq)):
            if b == c and (a, d) not in leq:
                leq.add((a, d))
                changed = True
    return leq


LEQ = closure()


def test_leq_examples():
    assert type_leq(AI, AN)
    assert type_leq(AN, AN)
    assert not type_leq(JINT, AV)


def test_leq_matches_closure():
    for a, b in product(ALL_TYPES, ALL_TYPES):
        assert type_leq(a, b) == ((a, b) in LEQ), (a, b)


def test_glb_lub_examples():
    assert type_glb(AR, AI) is AI
    assert type_glb(AY, AN) is None
    assert type_glb(AV, JINT) is None
    assert type_lub(AI, AR) is AR
    assert type_lub(AB, ACH) is AV
    assert type_lub(JINT, AI) is None


def _bound(a, b, lower):
    cands = [c for c in ALL_TYPES
             if ((c, a) in LEQ and (c, b) in LEQ if lower else (a, c) in LEQ and (b, c) in LEQ)]
    best = [c for c in cands
            if all(((d, c) in LEQ) if lower else ((c, d) in LEQ) for d in cands)]
    return best[0] if best else None


def test_glb_lub_against_enumeration():
    for a, b in product(ALL_TYPES, ALL_TYPES):
        assert type_glb(a, b) == _bound(a, b, True)
        assert type_lub(a, b) == _bound(a, b, False)


def test_value_has_type_examples():
    assert value_has_type(3, AN)
    assert value_has_type(NIL, AB)
    assert not value_has_type(Cons(1, 2), AI)
    assert value_has_type(JInt(3), JINT) and not value_has_type(3, JINT)
    assert value_has_type(T, AY) and not value_has_type(T, ACONS)


def test_value_has_type_monotone():
    rng = make_rng(5)
    for t in ALL_TYPES:
        for _ in range(50):
            v = random_value(t, rng)
            assert value_has_type(v, t)
            for u in ALL_TYPES:
                if type_leq(t, u):
                    assert value_has_type(v, u), (v, t, u)


@given(st.integers(), st.integers(min_value=1, max_value=10**6), st.integers(min_value=1, max_value=50))
def test_rational_canonical(n, d, k):
    assert rational(n * k, d * k) == rational(n, d)
    assert type(rational(n * k, d * k)) is type(rational(n, d))
    r = rational(n, d)
    if isinstance(r, Fraction):
        assert r.denominator > 1
    else:
        assert r * d == n


def test_narrower_than():
    main = FnType((AN, AN), (AN,))
    assert FnType((AI, AI), (AI,)).narrower_than(main)
    assert not main.narrower_than(main)
    assert not FnType((AV, AN), (AN,)).narrower_than(main)
