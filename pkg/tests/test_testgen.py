from dataclasses import replace
from fractions import Fraction

from conftest import F_MAIN, F_SRC, MV_SRC, world_of
from sejc.java.ast import Call, IntLit, New, StrLit
from sejc.java.printer import expr, print_unit
from sejc.pipeline import compile_world
from sejc.target import Runtime, run_main, to_source
from sejc.testgen import build_value, generate_tests
from sejc.translate import build_unit
from sejc.values import NIL, Char, Cons, make_list


def test_expected_value_embedded():
    unit = compile_world(world_of(F_SRC + "(deftest t1 (f 2 1))"), tests=True)
    text = print_unit(unit)["MainTests.java"]
    assert "Acl2Value expected = Acl2Integer.make(8);" in text
    assert 'System.out.println("t1 PASS");' in text


def test_run_main_passes():
    unit = compile_world(world_of(F_MAIN + "(deftest t1 (f 2 1))\n(deftest t2 (f 1/2 0))"), tests=True)
    assert run_main(unit) == ["t1 PASS", "t2 PASS"]


def test_failing_expectation_reported():
    w = world_of(F_SRC + "(deftest t1 (f 2 1))")
    unit = compile_world(w, tests=True)
    tests = unit.test_class
    bad = [replace(m, body=tuple(
        replace(s, init=Call("Acl2Integer.make", (IntLit(9),))) if getattr(s, "name", "") == "expected" else s
        for s in m.body)) for m in tests.methods]
    unit = replace(unit, test_class=replace(tests, methods=tuple(bad)))
    assert run_main(unit) == ["t1 FAIL"]


def test_no_tests_no_class():
    w = world_of(F_SRC)
    assert generate_tests(w, build_unit(w)) is None
    assert "MainTests.java" not in print_unit(compile_world(w, tests=True))


def test_mv_fieldwise():
    unit = compile_world(world_of(MV_SRC + "(deftest t1 (two 5))"), tests=True)
    text = print_unit(unit)["MainTests.java"]
    assert "result.$0.equals(expected0) && result.$1.equals(expected1)" in text
    assert run_main(unit) == ["t1 PASS"]


def test_timing_lines():
    unit = compile_world(world_of(F_SRC + "(deftest t1 (f 2 1))"), tests=True)
    out = run_main(unit, ["3", "2"])
    assert out[0] == "t1 PASS"
    assert out[1].startswith("t1 min ") and " avg " in out[1] and " max " in out[1]


def test_build_value_shapes():
    assert expr(build_value(3)) == "Acl2Integer.make(3)"
    assert build_value(2**40) == Call("Acl2Integer.make", (New("java.math.BigInteger", (StrLit(str(2**40)),)),))
    assert expr(build_value(Fraction(-1, 3))) == "Acl2Rational.make(-1, 3)"
    assert expr(build_value(Cons(Char(97), NIL))) == (
        'Acl2ConsPair.make(Acl2Character.make(\'a\'), Acl2Symbol.make("COMMON-LISP", "NIL"))')


def test_long_list_roundtrip():
    v = make_list(list(range(3000)))
    rt = Runtime(build_unit(world_of("")))
    assert to_source(rt.eval(build_value(v), {}, rt.main)[0]) == v
