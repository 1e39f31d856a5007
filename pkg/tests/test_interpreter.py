from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import F_SRC, FACT_SRC, MV_SRC, sym, world_of
from sejc.errors import EvalError, StepLimitExceeded
from sejc.frontend import translate_body
from sejc.interpreter import eval_call, eval_term
from sejc.natives import NATIVES, apply_native
from sejc.reader import read_sexprs
from sejc.terms import App, Quote, mbe
from sejc.values import CL, INT_MAX, INT_MIN, NIL, T, Char, Cons, JInt, Symbol, make_list

REQUIRED = """cons car cdr consp equal not zp binary-+ binary-* unary-- unary-/ <
acl2-numberp rationalp integerp symbolp characterp stringp booleanp mv-nth len
char-code code-char coerce int-value int-add int-mul""".split()


def native(name):
    for s in NATIVES:
        if s.name == name.upper():
            return s
    raise KeyError(name)


def ev(world, text, **binds):
    term = translate_body(read_sexprs(text)[0], world=world,
                          arities={f: len(r.params) for f, r in world.functions.items()},
                          bound={sym(k) for k in binds})
    return eval_term(term, {sym(k): v for k, v in binds.items()}, world)


def test_required_natives_present():
    for name in REQUIRED:
        native(name)


def test_examples():
    w = world_of(F_SRC + FACT_SRC)
    assert eval_call(w, sym("f"), [2, 1]) == 8
    assert ev(w, "(if 'nil 'a 'b)") == sym("b")
    assert eval_call(w, sym("fact-tail"), [5, 1]) == 120


def test_fact_tail_matches_factorial():
    w = world_of(FACT_SRC)
    for n in range(0, 30):
        assert eval_call(w, sym("fact-tail"), [n, 1]) == factorial(n)


def test_deep_tail_recursion_uses_no_host_stack():
    w = world_of(FACT_SRC)
    assert eval_call(w, sym("fact-tail"), [20000, 1]) == factorial(20000)


def test_native_examples():
    assert apply_native(native("car"), [NIL]) == NIL
    r = apply_native(native("binary-+"), [Fraction(1, 2), Fraction(1, 2)])
    assert r == 1 and type(r) is int
    assert apply_native(native("int-add"), [JInt(INT_MAX), JInt(1)]) == JInt(INT_MIN)


def test_completion_conventions():
    assert apply_native(native("cdr"), [3]) == NIL
    assert apply_native(native("binary-+"), [sym("a"), 3]) == 3
    assert apply_native(native("binary-*"), ["s", 3]) == 0
    assert apply_native(native("unary-/"), [0]) == 0


def test_native_errors():
    with pytest.raises(EvalError):
        apply_native(Symbol("ACL2", "NO-SUCH"), [])
    with pytest.raises(EvalError):
        apply_native(native("cons"), [1])
    with pytest.raises(EvalError):
        apply_native(native("int-value"), [2**31])


def test_mv_and_mv_nth():
    w = world_of(MV_SRC)
    assert eval_call(w, sym("two"), [4]) == (4, sym("sym"))
    assert eval_call(w, sym("use-two"), [4]) == Cons(sym("sym"), 4)


def test_coerce_and_chars():
    w = world_of("")
    assert ev(w, "(coerce \"ab\" 'list)") == make_list([Char(97), Char(98)])
    assert ev(w, "(coerce (cons #\\a nil) 'string)") == "a"
    assert ev(w, "(char-code (code-char 65))") == 65
    assert ev(w, "(len '(1 2 3))") == 3


def test_non_strict_if():
    w = world_of("(defun crash (n) (crash (+ n 1)))")
    term = translate_body(read_sexprs("(if 'nil (crash 0) 'ok)")[0], world=w,
                          arities={sym("crash"): 1})
    assert eval_term(term, {}, w) == sym("ok")
    with pytest.raises(StepLimitExceeded):
        eval_term(App(sym("crash"), (Quote(0),)), {}, w, max_steps=10_000)


def test_mbe_logic_and_exec_are_both_available():
    w = world_of("")
    t = mbe(Quote(1), Quote(2))
    # the interpreter runs the logic part; pre-translation chooses a side
    assert eval_term(t, {}, w) in (1, 2)


def test_guard_not_checked():
    w = world_of(F_SRC)
    # f's guard wants numbers; completion makes the call total
    assert eval_call(w, sym("f"), [sym("a"), 1]) == 0


_rat = st.builds(lambda n, d: Fraction(n, d), st.integers(-10**6, 10**6), st.integers(1, 1000))


@given(_rat, _rat)
def test_plus_agrees_with_exact_arithmetic(a, b):
    plus, neg = native("binary-+"), native("unary--")
    s = apply_native(plus, [a, b])
    assert apply_native(plus, [s, apply_native(neg, [a])]) == b


@given(st.integers(INT_MIN, INT_MAX), st.integers(INT_MIN, INT_MAX))
def test_int_model_wraps(a, b):
    s = apply_native(native("int-add"), [JInt(a), JInt(b)])
    p = apply_native(native("int-mul"), [JInt(a), JInt(b)])
    assert s.value == (a + b + 2**31) % 2**32 - 2**31
    assert p.value == (a * b + 2**31) % 2**32 - 2**31


def test_boolean_symbols_live_in_common_lisp():
    assert T == Symbol(CL, "T") and NIL == Symbol(CL, "NIL")
