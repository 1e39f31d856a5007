"""The type lattice used by the type analysis and by overload selection."""

import enum
from dataclasses import dataclass
from fractions import Fraction

from .values import Char, Cons, JInt, Symbol, T, NIL


class SrcType(enum.Enum):
    AVALUE = ("avalue", "AV", "Acl2Value")
    ANUMBER = ("anumber", "AN", "Acl2Number")
    ARATIONAL = ("arational", "AR", "Acl2Rational")
    AINTEGER = ("ainteger", "AI", "Acl2Integer")
    ACONS = ("acons", "AC", "Acl2ConsPair")
    ASYMBOL = ("asymbol", "AY", "Acl2Symbol")
    ABOOLEAN = ("aboolean", "AB", "boolean")
    ACHARACTER = ("acharacter", "ACH", "char")
    ASTRING = ("astring", "AS", "String")
    JINT = ("jint", "JI", "int")

    def __init__(self, kw, short, java):
        self.kw = kw
        self.short = short
        self.java = java

    @property
    def keyword(self):
        return ":" + self.kw

    def __repr__(self):
        return self.short

    @property
    def is_java_primitive(self):
        return self in _PRIMITIVE


_PRIMITIVE = {SrcType.ABOOLEAN, SrcType.ACHARACTER, SrcType.ASTRING, SrcType.JINT}

ALL_TYPES = tuple(SrcType)

AV = SrcType.AVALUE
AN = SrcType.ANUMBER
AR = SrcType.ARATIONAL
AI = SrcType.AINTEGER
ACONS = SrcType.ACONS
AY = SrcType.ASYMBOL
AB = SrcType.ABOOLEAN
ACH = SrcType.ACHARACTER
AS = SrcType.ASTRING
JINT = SrcType.JINT

BY_KEYWORD = {t.kw: t for t in SrcType}

# generator edges of the partial order: child -> parent
_PARENT = {AI: AR, AR: AN, AN: AV, ACONS: AV, AB: AY, AY: AV, ACH: AV, AS: AV}


def _ancestors(t):
    chain = [t]
    while t in _PARENT:
        t = _PARENT[t]
        chain.append(t)
    return chain


_UP = {t: frozenset(_ancestors(t)) for t in SrcType}


@dataclass(frozen=True)
class Tuple:
    """Types of a multiple-value result."""

    types: tuple

    def __post_init__(self):
        if len(self.types) < 2:
            raise ValueError("a tuple type needs at least two components")
        if any(isinstance(t, Tuple) for t in self.types):
            raise ValueError("tuple types do not nest")

    def __repr__(self):
        return ",".join(t.short for t in self.types)

    def __len__(self):
        return len(self.types)

    def __iter__(self):
        return iter(self.types)


def type_leq(t1, t2):
    return t2 in _UP[t1]


def type_glb(t1, t2):
    if type_leq(t1, t2):
        return t1
    if type_leq(t2, t1):
        return t2
    # the order is a forest, so incomparable types have no lower bound
    return None


def type_lub(t1, t2):
    common = _UP[t1] & _UP[t2]
    if not common:
        return None
    for t in _ancestors(t1):
        if t in common:
            return t
    return None  # pragma: no cover


def tuple_leq(ts1, ts2):
    return len(ts1) == len(ts2) and all(type_leq(a, b) for a, b in zip(ts1, ts2))


def tuple_glb(ts1, ts2):
    out = []
    for a, b in zip(ts1, ts2):
        g = type_glb(a, b)
        if g is None:
            return None
        out.append(g)
    return tuple(out)


def any_leq(t1, t2):
    """type_leq lifted to tuple types."""
    if isinstance(t1, Tuple) or isinstance(t2, Tuple):
        return (isinstance(t1, Tuple) and isinstance(t2, Tuple)
                and tuple_leq(t1.types, t2.types))
    return type_leq(t1, t2)


def any_lub(t1, t2):
    if isinstance(t1, Tuple) or isinstance(t2, Tuple):
        if not (isinstance(t1, Tuple) and isinstance(t2, Tuple)) or len(t1) != len(t2):
            return None
        parts = [type_lub(a, b) for a, b in zip(t1, t2)]
        if None in parts:
            return None
        return Tuple(tuple(parts))
    return type_lub(t1, t2)


_WRAP_PAIRS = {(AB, AY), (AY, AB), (ACH, AV), (AV, ACH), (AS, AV), (AV, AS)}


def conversion_legal(src, dst):
    if isinstance(src, Tuple) or isinstance(dst, Tuple):
        if not (isinstance(src, Tuple) and isinstance(dst, Tuple)):
            return False
        return len(src) == len(dst) and all(
            conversion_legal(a, b) for a, b in zip(src, dst))
    return (src == dst or type_leq(src, dst) or type_leq(dst, src)
            or (src, dst) in _WRAP_PAIRS)


def value_has_type(v, t):
    if t is AV:
        return not isinstance(v, (JInt, tuple))
    if t in (AN, AR):
        return type(v) is int or type(v) is Fraction
    if t is AI:
        return type(v) is int
    if t is ACONS:
        return isinstance(v, Cons)
    if t is AY:
        return isinstance(v, Symbol)
    if t is AB:
        return v == T or v == NIL
    if t is ACH:
        return isinstance(v, Char)
    if t is AS:
        return type(v) is str
    if t is JINT:
        return isinstance(v, JInt)
    raise TypeError(f"not a simple type: {t!r}")


def most_specific_type(v):
    if type(v) is int:
        return AI
    if type(v) is Fraction:
        return AR
    if isinstance(v, Cons):
        return ACONS
    if v == T or v == NIL:
        return AB
    if isinstance(v, Symbol):
        return AY
    if isinstance(v, Char):
        return ACH
    if type(v) is str:
        return AS
    if isinstance(v, JInt):
        return JINT
    raise TypeError(f"not a source value: {v!r}")


def object_type(v):
    """Most specific type whose Java representation is an object."""
    t = most_specific_type(v)
    return {AB: AY, ACH: AV, AS: AV}.get(t, t)


@dataclass(frozen=True)
class FnType:
    inputs: tuple
    outputs: tuple

    def __post_init__(self):
        if len(self.outputs) < 1:
            raise ValueError("a function type has at least one output")

    @property
    def output(self):
        """The result type: a simple type, or a Tuple for several outputs."""
        if len(self.outputs) == 1:
            return self.outputs[0]
        return Tuple(tuple(self.outputs))

    def narrower_than(self, other):
        same_shape = (len(self.inputs) == len(other.inputs)
                      and len(self.outputs) == len(other.outputs))
        if not same_shape:
            return False
        pairs = list(zip(self.inputs + self.outputs, other.inputs + other.outputs))
        return all(type_leq(a, b) for a, b in pairs) and any(a != b for a, b in pairs)

    def __repr__(self):
        ins = " ".join(t.keyword for t in self.inputs)
        outs = " ".join(t.keyword for t in self.outputs)
        return f"({ins}) -> ({outs})"


def java_class_name(t):
    if isinstance(t, Tuple):
        return "MV_" + "_".join(c.java for c in t.types)
    return t.java
