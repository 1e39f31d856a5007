"""Runtime data of the source language.

Integers are Python ``int``, non-integral rationals are ``Fraction`` and
strings are Python ``str``.  Everything else has a small immutable class
here.  Python ``bool`` is never a source value.
"""

import sys
from dataclasses import dataclass
from fractions import Fraction

# factorials and other big results are printed in full
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)

CL = "COMMON-LISP"
ACL2 = "ACL2"
KEYWORD = "KEYWORD"

INT_MIN = -(2**31)
INT_MAX = 2**31 - 1


@dataclass(frozen=True)
class Symbol:
    package: str
    name: str

    def __repr__(self):
        return f"{self.package}::{self.name}"


T = Symbol(CL, "T")
NIL = Symbol(CL, "NIL")


def keyword(name):
    return Symbol(KEYWORD, name.upper())


@dataclass(frozen=True)
class Char:
    code: int

    def __post_init__(self):
        if not 0 <= self.code <= 255:
            raise ValueError(f"character code out of range: {self.code}")


@dataclass(frozen=True)
class JInt:
    """A Java ``int`` value of the primitive-type model."""

    value: int

    def __post_init__(self):
        if not INT_MIN <= self.value <= INT_MAX:
            raise ValueError(f"not a 32-bit int: {self.value}")

    @staticmethod
    def wrap(n):
        return JInt((n + 2**31) % 2**32 - 2**31)


class Cons:
    __slots__ = ("car", "cdr", "_hash")

    def __init__(self, car, cdr):
        object.__setattr__(self, "car", car)
        object.__setattr__(self, "cdr", cdr)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Cons is immutable")

    def __eq__(self, other):
        # iterative on the cdr chain so long lists do not hit the recursion limit
        a, b = self, other
        while isinstance(a, Cons):
            if not isinstance(b, Cons):
                return False
            if a is b:
                return True
            if not values_equal(a.car, b.car):
                return False
            a, b = a.cdr, b.cdr
        return values_equal(a, b)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        if self._hash is None:
            h = 17
            node = self
            while isinstance(node, Cons):
                h = hash((h, node.car))
                node = node.cdr
            object.__setattr__(self, "_hash", hash((h, node)))
        return self._hash

    def __repr__(self):
        return f"Cons({self.car!r}, {self.cdr!r})"


def values_equal(a, b):
    if type(a) is not type(b):
        return False
    return a == b


def rational(numerator, denominator=1):
    """Canonical rational: an ``int`` whenever the denominator reduces to 1."""
    if denominator == 0:
        raise ZeroDivisionError("rational with zero denominator")
    q = Fraction(numerator, denominator)
    return q.numerator if q.denominator == 1 else q


def canonical_number(q):
    if isinstance(q, Fraction) and q.denominator == 1:
        return q.numerator
    return q


def is_integer(v):
    return type(v) is int


def is_rational(v):
    return type(v) is int or type(v) is Fraction


def is_boolean(v):
    return v == T or v == NIL


def bool_value(b):
    return T if b else NIL


def truthy(v):
    return v != NIL


def make_list(items, tail=NIL):
    result = tail
    for item in reversed(list(items)):
        result = Cons(item, result)
    return result


def list_items(v):
    """Elements of a (possibly improper) list, ignoring the final atom."""
    out = []
    while isinstance(v, Cons):
        out.append(v.car)
        v = v.cdr
    return out


_CHAR_NAMES = {32: "Space", 10: "Newline", 9: "Tab", 13: "Return", 12: "Page",
               127: "Rubout", 0: "Nul"}
CHAR_NAME_CODES = {name.upper(): code for code, name in _CHAR_NAMES.items()}


def print_symbol(sym, package=ACL2):
    if sym.package == KEYWORD:
        return ":" + sym.name
    if sym.package == package or (sym.package == CL and package == ACL2):
        return sym.name
    return f"{sym.package}::{sym.name}"


def print_value(v, package=ACL2):
    """ACL2-style printed representation, readable back by the reader."""
    if isinstance(v, tuple):
        return "(" + " ".join(print_value(x, package) for x in v) + ")"
    if type(v) is int:
        return str(v)
    if type(v) is Fraction:
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, Char):
        if v.code in _CHAR_NAMES:
            return "#\\" + _CHAR_NAMES[v.code]
        if 33 <= v.code <= 126:
            return "#\\" + chr(v.code)
        return f"#\\U+{v.code:02X}"
    if type(v) is str:
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(v, Symbol):
        return print_symbol(v, package)
    if isinstance(v, JInt):
        return f"(int-value {v.value})"
    if isinstance(v, Cons):
        parts = []
        while isinstance(v, Cons):
            parts.append(print_value(v.car, package))
            v = v.cdr
        if v == NIL:
            return "(" + " ".join(parts) + ")"
        return "(" + " ".join(parts) + " . " + print_value(v, package) + ")"
    raise TypeError(f"not a source value: {v!r}")
