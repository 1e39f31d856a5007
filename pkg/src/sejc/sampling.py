"""Random source values of a given type, for directive checks and fuzzing."""

import random

from .types import AB, ACH, ACONS, AI, AN, AR, AS, AV, AY, JINT, Tuple
from .values import (ACL2, INT_MAX, INT_MIN, KEYWORD, NIL, T, Char, Cons, JInt,
                     Symbol, rational)

_SYMBOLS = [T, NIL, Symbol(ACL2, "FOO"), Symbol(ACL2, "BAR"), Symbol(KEYWORD, "KEY"),
            Symbol("COMMON-LISP", "CAR")]
_INT_EDGES = [INT_MIN, INT_MIN + 1, -1, 0, 1, INT_MAX - 1, INT_MAX]


def random_integer(rng):
    r = rng.random()
    if r < 0.6:
        return rng.randint(-10, 10)
    if r < 0.9:
        return rng.randint(-1000, 1000)
    return rng.randint(-(2**70), 2**70)


def random_value(t, rng, depth=2):
    """A value inhabiting simple type ``t``."""
    if isinstance(t, Tuple):
        return tuple(random_value(c, rng, depth) for c in t.types)
    if t is AI:
        return random_integer(rng)
    if t in (AR, AN):
        if rng.random() < 0.5:
            return random_integer(rng)
        return rational(random_integer(rng), rng.randint(1, 12))
    if t is ACONS:
        return Cons(random_value(AV, rng, depth - 1), random_value(AV, rng, depth - 1))
    if t is AB:
        return rng.choice((T, NIL))
    if t is AY:
        return rng.choice(_SYMBOLS)
    if t is ACH:
        return Char(rng.choice((rng.randint(0, 255), rng.randint(97, 122))))
    if t is AS:
        n = rng.randint(0, 5)
        return "".join(chr(rng.choice((rng.randint(32, 126), rng.randint(0, 255))))
                       for _ in range(n))
    if t is JINT:
        if rng.random() < 0.3:
            return JInt(rng.choice(_INT_EDGES))
        return JInt(rng.randint(INT_MIN, INT_MAX) if rng.random() < 0.5
                    else rng.randint(-100, 100))
    if t is AV:
        kinds = [AI, AR, AB, AY, ACH, AS] + ([ACONS] if depth > 0 else [])
        return random_value(rng.choice(kinds), rng, depth)
    raise TypeError(f"cannot sample type {t!r}")


def make_rng(seed):
    return random.Random(seed)
