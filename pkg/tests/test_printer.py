import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sejc.java.ast import (BINARY_OPS, Assign, Binary, BoolLit, Call, Cast, CharLit, Continue,
                           ExprStmt, FieldAccess, If, Index, IntLit, JClass, JField, JMethod,
                           LocalDecl, MethodCall, Name, New, Return, StrLit, Unary, While)
from sejc.java.parser import JavaSyntaxError, parse_expr
from sejc.java.printer import expr, print_class, print_method

x, y, a, b, c, n = (Name(s) for s in "xyabcn")


def test_examples():
    assert expr(Binary("+", Binary("*", IntLit(2), x), Binary("*", y, y))) == "2 * x + y * y"
    assert expr(Binary("*", a, Binary("+", b, c))) == "a * (b + c)"
    assert expr(Unary("!", Call("zp", (n,)))) == "!zp(n)"


def test_left_associativity():
    assert expr(Binary("-", Binary("-", a, b), c)) == "a - b - c"
    assert expr(Binary("-", a, Binary("-", b, c))) == "a - (b - c)"
    assert expr(Binary("/", a, Binary("*", b, c))) == "a / (b * c)"
    # a right child of equal precedence keeps parentheses so the tree reads back
    assert expr(Binary("+", a, Binary("+", b, c))) == "a + (b + c)"


def test_literals_and_casts():
    assert expr(CharLit(39)) == "'\\''"
    assert expr(StrLit('a"b\n')) == '"a\\"b\\012"'
    assert expr(Cast("Acl2Number", x)) == "(Acl2Number) x"
    assert expr(Cast("Acl2Number", Unary("-", x))) == "(Acl2Number) (-x)"
    assert expr(Cast("int", Unary("-", x))) == "(int) -x"
    assert expr(Unary("-", IntLit(-5))) == "-(-5)"
    assert expr(Unary("-", IntLit(5))) == "-(5)"
    assert expr(New("java.math.BigInteger", (StrLit("99"),))) == 'new java.math.BigInteger("99")'
    assert expr(MethodCall(Binary("+", a, b), "equals", (c,))) == "(a + b).equals(c)"
    assert expr(MethodCall(IntLit(0), "equals", ())) == "(0).equals()"
    assert expr(Index(Name("args"), IntLit(0))) == "args[0]"


def test_statement_layout():
    m = JMethod(("public", "static"), "Acl2Value", "g", (("Acl2Value", "x"), ("Acl2Value", "y")), (
        LocalDecl("Acl2Value", "$tmp1"),
        If(Call("equal", (x, y)), (Assign("$tmp1", x),), (Assign("$tmp1", y),)),
        While(BoolLit(True), (ExprStmt(Call("f", ())), Continue())),
        Return(Name("$tmp1")),
    ))
    assert print_method(m) == (
        "public static Acl2Value g(Acl2Value x, Acl2Value y) {\n"
        "    Acl2Value $tmp1;\n"
        "    if (equal(x, y)) {\n"
        "        $tmp1 = x;\n"
        "    } else {\n"
        "        $tmp1 = y;\n"
        "    }\n"
        "    while (true) {\n"
        "        f();\n"
        "        continue;\n"
        "    }\n"
        "    return $tmp1;\n"
        "}\n")


def test_class_layout():
    cls = JClass("Main", ("public",), (JField(("private", "static", "final"), "Acl2Integer", "$N_3",
                                             Call("Acl2Integer.make", (IntLit(3),))),),
                 nested=(JClass("ACL2"),), static_init=(ExprStmt(Call("MainEnvironment.build", ())),))
    text = print_class(cls)
    assert text.endswith("\n") and "\r" not in text
    assert "    private static final Acl2Integer $N_3 = Acl2Integer.make(3);\n" in text
    assert "    static {\n        MainEnvironment.build();\n    }\n" in text
    assert "    public static class ACL2 {\n    }\n" in text


# -- reparse fidelity and minimality

_leaves = st.one_of(
    st.sampled_from([x, y, Name("Acl2Symbol.NIL"), BoolLit(True), BoolLit(False)]),
    st.integers(-3, 3).map(IntLit),
    st.integers(0, 255).map(CharLit),
    st.text(alphabet='ab"\\ \n', max_size=3).map(StrLit),
)


def _extend(inner):
    args = st.lists(inner, max_size=3).map(tuple)
    return st.one_of(
        st.tuples(st.sampled_from(BINARY_OPS), inner, inner).map(lambda t: Binary(*t)),
        st.tuples(st.sampled_from(["!", "-"]), inner).map(lambda t: Unary(*t)),
        st.tuples(st.sampled_from(["Acl2Number", "int", "char"]), inner).map(lambda t: Cast(*t)),
        st.tuples(st.sampled_from(["f", "ACL2.binary_plus"]), args).map(lambda t: Call(*t)),
        args.map(lambda t: New("java.math.BigInteger", t)),
        st.tuples(inner.filter(lambda e: not isinstance(e, Name)), args).map(
            lambda t: MethodCall(t[0], "equals", t[1])),
        st.tuples(inner.filter(lambda e: not isinstance(e, Name))).map(
            lambda t: FieldAccess(t[0], "$0")),
    )


_exprs = st.recursive(_leaves, _extend, max_leaves=20)


@settings(max_examples=400)
@given(_exprs)
def test_reparse_fidelity(e):
    assert parse_expr(expr(e)) == e


def _shapes(depth):
    if depth == 1:
        return [x]
    sub = _shapes(depth - 1)
    out = list(sub)
    for op in BINARY_OPS:
        out += [Binary(op, l, r) for l, r in itertools.product(sub, sub)]
    out += [Unary(op, s) for op in ("!", "-") for s in sub]
    out += [Cast("T", s) for s in sub]
    return list(dict.fromkeys(out))


def _paren_pairs(text):
    stack, pairs = [], []
    for i, ch in enumerate(text):
        if ch == "(":
            stack.append(i)
        elif ch == ")":
            pairs.append((stack.pop(), i))
    return pairs


def _reads_differently(text, tree):
    try:
        return parse_expr(text) != tree
    except JavaSyntaxError:
        return True


def test_minimality_depth3_exhaustive():
    shapes = _shapes(3)
    assert len(shapes) > 3000
    for e in shapes:
        text = expr(e)
        assert parse_expr(text) == e
        for i, j in _paren_pairs(text):
            shorter = text[:i] + text[i + 1:j] + text[j + 1:]
            assert _reads_differently(shorter, e), (text, shorter)


@pytest.mark.parametrize("text", ["a --b", "(a", "a +", "f(a,)", "0.equals(x)"])
def test_parser_rejects(text):
    with pytest.raises(JavaSyntaxError):
        parse_expr(text)
