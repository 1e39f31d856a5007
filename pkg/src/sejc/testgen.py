"""Generation of the Java test class from the workspace's tests."""

from fractions import Fraction

from .errors import EvalError, FrontendError
from .interpreter import eval_call, eval_term
from .java.ast import (Assign, Binary, BoolLit, Call, CharLit, ExprStmt, If,
                       Index, IntLit, JClass, JMethod, LocalDecl, MethodCall,
                       Name, New, StrLit, While)
from .pretrans.names import Kind, fresh_name, translate_name
from .translate import java_type, package_class, function_types
from .types import Tuple
from .values import INT_MAX, INT_MIN, NIL, Char, Cons, Symbol


def _int(n):
    if INT_MIN <= n <= INT_MAX:
        return IntLit(n)
    return New("java.math.BigInteger", (StrLit(str(n)),))


def build_value(v, jtype="Acl2Value"):
    """Expression constructing value ``v`` in a context of Java type ``jtype``."""
    if jtype == "boolean":
        return BoolLit(v != NIL)
    if jtype == "char":
        return CharLit(v.code)
    if jtype == "String":
        return StrLit(v)
    if jtype == "int":
        return IntLit(v.value)
    if type(v) is int:
        return Call("Acl2Integer.make", (_int(v),))
    if type(v) is Fraction:
        return Call("Acl2Rational.make", (_int(v.numerator), _int(v.denominator)))
    if isinstance(v, Symbol):
        return Call("Acl2Symbol.make", (StrLit(v.package), StrLit(v.name)))
    if isinstance(v, Char):
        return Call("Acl2Character.make", (CharLit(v.code),))
    if type(v) is str:
        return Call("Acl2String.make", (StrLit(v),))
    if isinstance(v, Cons):
        # build long lists from the end so the expression nests only on cars
        items, node = [], v
        while isinstance(node, Cons):
            items.append(node.car)
            node = node.cdr
        expr = build_value(node)
        for x in reversed(items):
            expr = Call("Acl2ConsPair.make", (build_value(x), expr))
        return expr
    raise TypeError(f"cannot build {v!r}")


def _equal(result, expected, jtype):
    if jtype in ("boolean", "char", "int"):
        return Binary("==", result, expected)
    return MethodCall(result, "equals", (expected,))


def _inc(var):
    return Assign(var, Binary("+", Name(var), IntLit(1)))


def _test_method(name, label, call_name, ft, args, expected):
    pt = [java_type(t) for t in ft.inputs]
    ret = java_type(ft.output)
    body = []
    arg_names = []
    for i, (v, t) in enumerate(zip(args, pt)):
        body.append(LocalDecl(t, f"arg{i + 1}", build_value(v, t)))
        arg_names.append(Name(f"arg{i + 1}"))
    call = Call(call_name, tuple(arg_names), tuple(pt))
    body.append(LocalDecl(ret, "result", call))
    if isinstance(ft.output, Tuple):
        checks = []
        for i, (t, v) in enumerate(zip(ft.output.types, expected)):
            jt = java_type(t)
            body.append(LocalDecl(jt, f"expected{i}", build_value(v, jt)))
            checks.append(_equal(Name(f"result.${i}"), Name(f"expected{i}"), jt))
        test = checks[0]
        for c in checks[1:]:
            test = Binary("&&", test, c)
    else:
        body.append(LocalDecl(ret, "expected", build_value(expected, ret)))
        test = _equal(Name("result"), Name("expected"), ret)
    say = lambda text: ExprStmt(Call("System.out.println", (text,)))  # noqa: E731
    body.append(If(test, (say(StrLit(f"{label} PASS")),), (say(StrLit(f"{label} FAIL")),)))
    timing = (
        LocalDecl("long", "min", IntLit(0)),
        LocalDecl("long", "max", IntLit(0)),
        LocalDecl("long", "sum", IntLit(0)),
        LocalDecl("int", "k", IntLit(0)),
        While(Binary("<", Name("k"), Name("reps")), (
            LocalDecl("long", "start", Call("System.nanoTime", ())),
            LocalDecl("int", "j", IntLit(0)),
            While(Binary("<", Name("j"), Name("calls")), (
                Assign("result", call), _inc("j"))),
            LocalDecl("long", "time", Binary("-", Call("System.nanoTime", ()), Name("start"))),
            If(Binary("||", Binary("==", Name("k"), IntLit(0)),
                      Binary("<", Name("time"), Name("min"))), (Assign("min", Name("time")),)),
            If(Binary(">", Name("time"), Name("max")), (Assign("max", Name("time")),)),
            Assign("sum", Binary("+", Name("sum"), Name("time"))),
            _inc("k"),
        )),
        say(_concat(StrLit(f"{label} min "), Name("min"), StrLit(" avg "),
                    Binary("/", Name("sum"), Name("reps")), StrLit(" max "), Name("max"))),
    )
    body.append(If(Name("timed"), timing))
    params = (("int", "reps"), ("int", "calls"), ("boolean", "timed"))
    return JMethod(("public", "static"), "void", name, params, tuple(body))


def _concat(*parts):
    e = parts[0]
    for p in parts[1:]:
        e = Binary("+", e, p)
    return e


def generate_tests(world, unit, guards=True, main_class=None):
    """Test class running every workspace test; None when there are none.

    Expected values are computed by the interpreter; a test whose oracle
    evaluation fails is left out.
    """
    if not world.tests:
        return None
    main_class = main_class or unit.main_class.name
    methods, taken = [], {"main"}
    calls = []
    for spec in world.tests:
        call = spec.call
        if call.fn not in world.functions:
            raise FrontendError(f"test {spec.name} calls unknown function")
        try:
            args = [eval_term(a, {}, world) for a in call.args]
            expected = eval_call(world, call.fn, args)
        except EvalError:
            continue
        ft = function_types(world, world.functions[call.fn], guards)[0]
        name = fresh_name("test_" + translate_name(spec.name, Kind.METHOD), taken)
        taken.add(name)
        target = (f"{main_class}.{package_class(call.fn.package)}."
                  f"{translate_name(call.fn.name, Kind.METHOD)}")
        methods.append(_test_method(name, spec.name.lower(), target, ft, args, expected))
        calls.append(name)
    reps_args = (
        LocalDecl("int", "reps", IntLit(1)),
        LocalDecl("int", "calls", IntLit(1)),
        LocalDecl("boolean", "timed", BoolLit(False)),
        If(Binary(">", Name("args.length"), IntLit(0)), (
            Assign("reps", Call("Integer.parseInt", (Index(Name("args"), IntLit(0)),))),
            Assign("timed", BoolLit(True)))),
        If(Binary(">", Name("args.length"), IntLit(1)), (
            Assign("calls", Call("Integer.parseInt", (Index(Name("args"), IntLit(1)),))),)),
    )
    run_args = (Name("reps"), Name("calls"), Name("timed"))
    run = tuple(ExprStmt(Call(n, run_args, ("int", "int", "boolean"))) for n in calls)
    main = JMethod(("public", "static"), "void", "main", (("String[]", "args"),),
                   reps_args + run)
    return JClass(f"{main_class}Tests", ("public",), (), (main,) + tuple(methods))
