"""Built-in functions with native implementations and their function types."""

from dataclasses import dataclass
from fractions import Fraction

from .errors import EvalError
from .types import AB, ACH, ACONS, AI, AN, AR, AV, AY, JINT, FnType
from .values import (ACL2, CL, INT_MAX, INT_MIN, NIL, T, Char, Cons, JInt,
                     Symbol, bool_value, canonical_number, is_rational,
                     list_items, make_list)


@dataclass(frozen=True)
class Native:
    symbol: Symbol
    arity: int
    java_name: str
    main_type: FnType
    other_types: tuple
    impl: object
    inline_op: str = None  # Java operator replacing the call, if any

    def __repr__(self):
        return f"Native({self.symbol!r})"


def _num(x):
    return x if is_rational(x) else 0


def _plus(x, y):
    a, b = _num(x), _num(y)
    if type(a) is Fraction or type(b) is Fraction:
        return canonical_number(Fraction(a) + b)
    return a + b


def _times(x, y):
    a, b = _num(x), _num(y)
    if type(a) is Fraction or type(b) is Fraction:
        return canonical_number(Fraction(a) * b)
    return a * b


def _minus(x):
    return -_num(x)


def _reciprocal(x):
    a = _num(x)
    if a == 0:
        return 0
    return canonical_number(1 / Fraction(a))


def _less(x, y):
    return bool_value(_num(x) < _num(y))


def _car(x):
    return x.car if isinstance(x, Cons) else NIL


def _cdr(x):
    return x.cdr if isinstance(x, Cons) else NIL


def _zp(x):
    return bool_value(not (type(x) is int and x > 0))


def _natp(x):
    return bool_value(type(x) is int and x >= 0)


def _posp(x):
    return bool_value(type(x) is int and x > 0)


def _len(x):
    n = 0
    while isinstance(x, Cons):
        n += 1
        x = x.cdr
    return n


def _mv_nth(n, x):
    if isinstance(x, tuple):
        if type(n) is int and 0 <= n < len(x):
            return x[n]
        return NIL
    n = n if type(n) is int and n >= 0 else 0
    while n > 0 and isinstance(x, Cons):
        x = x.cdr
        n -= 1
    return _car(x)


def _char_code(c):
    return c.code if isinstance(c, Char) else 0


def _code_char(n):
    return Char(n) if type(n) is int and 0 <= n <= 255 else Char(0)


def _coerce(x, how):
    if how == Symbol(CL, "LIST"):
        if type(x) is not str:
            return NIL
        return make_list(Char(ord(ch)) for ch in x)
    # anything else coerces to a string; non-characters become code 0
    return "".join(chr(c.code) if isinstance(c, Char) else "\0"
                   for c in list_items(x))


def _int_value(n):
    if type(n) is not int or not INT_MIN <= n <= INT_MAX:
        raise EvalError(f"int-value of {n!r} is outside the int range")
    return JInt(n)


def _int_arg(x):
    if not isinstance(x, JInt):
        raise EvalError(f"int operation applied to non-int {x!r}")
    return x.value


def _int_add(x, y):
    return JInt.wrap(_int_arg(x) + _int_arg(y))


def _int_mul(x, y):
    return JInt.wrap(_int_arg(x) * _int_arg(y))


def _pred(check):
    return lambda x: bool_value(check(x))


def _ft(inputs, output):
    return FnType(tuple(inputs), (output,))


_NUMERIC_BINARY = (_ft((AN, AN), AN), (_ft((AR, AR), AR), _ft((AI, AI), AI)))
_NUMERIC_UNARY = (_ft((AN,), AN), (_ft((AR,), AR), _ft((AI,), AI)))
_PREDICATE = (_ft((AV,), AB), ())

_TABLE = [
    # package, name, java name, (main, others), impl, inline operator
    (CL, "CONS", "cons", (_ft((AV, AV), ACONS), ()), Cons, None),
    (CL, "CAR", "car", (_ft((AV,), AV), ()), _car, None),
    (CL, "CDR", "cdr", (_ft((AV,), AV), ()), _cdr, None),
    (CL, "CONSP", "consp", _PREDICATE, _pred(lambda x: isinstance(x, Cons)), None),
    (CL, "ATOM", "atom", _PREDICATE, _pred(lambda x: not isinstance(x, Cons)), None),
    (CL, "ENDP", "endp", _PREDICATE, _pred(lambda x: not isinstance(x, Cons)), None),
    (CL, "EQUAL", "equal", (_ft((AV, AV), AB), ()),
     lambda x, y: bool_value(type(x) is type(y) and x == y), None),
    (CL, "NOT", "not", (_ft((AV,), AB), (_ft((AB,), AB),)),
     lambda x: bool_value(x == NIL), "!"),
    (CL, "<", "less_than", (_ft((AR, AR), AB), ()), _less, None),
    (CL, "RATIONALP", "rationalp", _PREDICATE, _pred(is_rational), None),
    (CL, "INTEGERP", "integerp", _PREDICATE, _pred(lambda x: type(x) is int), None),
    (CL, "SYMBOLP", "symbolp", _PREDICATE, _pred(lambda x: isinstance(x, Symbol)), None),
    (CL, "CHARACTERP", "characterp", _PREDICATE, _pred(lambda x: isinstance(x, Char)), None),
    (CL, "STRINGP", "stringp", _PREDICATE, _pred(lambda x: type(x) is str), None),
    (CL, "CHAR-CODE", "char_code", (_ft((ACH,), AI), ()), _char_code, None),
    (CL, "CODE-CHAR", "code_char", (_ft((AI,), ACH), ()), _code_char, None),
    (CL, "COERCE", "coerce", (_ft((AV, AY), AV), ()), _coerce, None),
    (ACL2, "BINARY-+", "binary_plus", _NUMERIC_BINARY, _plus, None),
    (ACL2, "BINARY-*", "binary_star", _NUMERIC_BINARY, _times, None),
    (ACL2, "UNARY--", "unary_minus", _NUMERIC_UNARY, _minus, None),
    (ACL2, "UNARY-/", "unary_slash", (_ft((AN,), AN), (_ft((AR,), AR),)), _reciprocal, None),
    (ACL2, "ACL2-NUMBERP", "acl2_numberp", _PREDICATE, _pred(is_rational), None),
    (ACL2, "ZP", "zp", (_ft((AI,), AB), ()), _zp, None),
    (ACL2, "NATP", "natp", _PREDICATE, _natp, None),
    (ACL2, "POSP", "posp", _PREDICATE, _posp, None),
    (ACL2, "BOOLEANP", "booleanp", _PREDICATE,
     _pred(lambda x: x == T or x == NIL), None),
    (ACL2, "LEN", "len", (_ft((AV,), AI), ()), _len, None),
    (ACL2, "MV-NTH", "mv_nth", (_ft((AI, AV), AV), ()), _mv_nth, None),
    (ACL2, "INT-VALUEP", "int_valuep", _PREDICATE, _pred(lambda x: isinstance(x, JInt)), None),
    (ACL2, "INT-VALUE", "int_value", (_ft((AI,), JINT), ()), _int_value, None),
    (ACL2, "INT-ADD", "int_add", (_ft((JINT, JINT), JINT), ()), _int_add, "+"),
    (ACL2, "INT-MUL", "int_mul", (_ft((JINT, JINT), JINT), ()), _int_mul, "*"),
]

NATIVES = {}
for _pkg, _name, _java, (_main, _others), _impl, _op in _TABLE:
    _sym = Symbol(_pkg, _name)
    NATIVES[_sym] = Native(_sym, len(_main.inputs), _java, _main, tuple(_others), _impl, _op)

# symbols the ACL2 package (and, by default, user packages) import
BUILTIN_IMPORTS = tuple([T, NIL, Symbol(CL, "IF"), Symbol(CL, "QUOTE"),
                         Symbol(CL, "LAMBDA"), Symbol(CL, "LET"), Symbol(CL, "LET*"),
                         Symbol(CL, "LIST"), Symbol(CL, "STRING")]
                        + [s for s in NATIVES if s.package == CL])


def apply_native(fn, args):
    native = NATIVES.get(fn)
    if native is None:
        raise EvalError(f"unknown native function {fn!r}")
    if len(args) != native.arity:
        raise EvalError(f"{fn!r} expects {native.arity} arguments, got {len(args)}")
    return native.impl(*args)


def unguarded_type(ft):
    """Function type used when guards are not assumed: :a positions widen to :avalue."""
    widen = lambda ts: tuple(t if t is JINT else AV for t in ts)  # noqa: E731
    return FnType(widen(ft.inputs), widen(ft.outputs))

