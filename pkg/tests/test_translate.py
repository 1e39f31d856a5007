import re

import pytest

from conftest import (F_MAIN, F_OVERLOADED, F_SRC, G_SRC, H_SRC, MV_SRC, PQ_SRC, sym, tokens,
                      world_of)
from sejc.errors import NameCollisionError
from sejc.java.ast import JMethod, LocalDecl, walk_stmts
from sejc.java.printer import print_method, print_unit
from sejc.target import Runtime, call_with_values, from_source, run_method, to_source
from sejc.translate import TermTranslator, UnitState, build_unit, translate_function
from sejc.values import NIL, Cons, Symbol


def methods(src, name, guards=True):
    w = world_of(src)
    return [t.method for t in translate_function(w, w.functions[sym(name)], guards)]


def same(text, expected):
    assert tokens(text) == tokens(expected)


def test_g_statements_and_tmp():
    [m] = methods(G_SRC, "g")
    same(print_method(m), """
        public static Acl2Value g(Acl2Value x, Acl2Value y) {
            Acl2ConsPair z = cons(x, y);
            Acl2Value $tmp1;
            if (equal(x, y)) { $tmp1 = x; } else { $tmp1 = z; }
            return $tmp1;
        }""")


def test_typed_f_has_no_casts():
    [m] = methods(F_MAIN, "f")
    same(print_method(m), """
        public static Acl2Number f(Acl2Number x, Acl2Number y) {
            return binary_star(x, binary_plus(y, $N_3));
        }""")


def test_h_reuses_variable():
    [m] = methods(H_SRC, "h")
    same(print_method(m), """
        public static Acl2Value h() {
            Acl2Integer x = $N_1;
            x = binary_plus(x, $N_1);
            return binary_star($N_2, x);
        }""")


def test_overload_count_and_bodies():
    ms = methods(F_OVERLOADED, "f")
    assert len(ms) == 3
    assert [m.ret for m in ms] == ["Acl2Number", "Acl2Rational", "Acl2Integer"]
    assert len({print_method(m).split("{", 1)[1] for m in ms}) == 1


def test_untyped_unguarded_f():
    w = world_of(F_SRC)
    text = print_unit(build_unit(w, guards=False))["Main.java"]
    assert "public static Acl2Value binary_plus(Acl2Value x, Acl2Value y)" in text
    assert "public static Acl2Value binary_star(Acl2Value x, Acl2Value y)" in text
    assert "return binary_star(x, binary_plus(y, $N_3));" in text
    assert "private static final Acl2Integer $N_3 = Acl2Integer.make(3);" in text


def test_synonym_layout():
    text = print_unit(build_unit(world_of(PQ_SRC)))["Main.java"]
    q = text[text.index("public static class Q"):]
    same(q[:q.index("}\n    }") + 7], """
        public static class Q {
            public static Acl2Value f(Acl2Value x) { return g(P.f(x)); }
            public static Acl2Value g(Acl2Value x) { return P.g(x); }
        }""")


def test_synonym_per_overload():
    src = """
(defpkg "P" nil)
(in-package "P")
(defun g (x) (declare (xargs :guard (acl2-numberp x))) (+ x 1))
(function-type-main g (:anumber) (:anumber))
(function-type-other g (:ainteger) (:ainteger))
(defpkg "Q" '(p::g))
(in-package "Q")
(defun f (x) (declare (xargs :guard (integerp x))) (g x))
(function-type-main f (:ainteger) (:ainteger))
"""
    text = print_unit(build_unit(world_of(src)))["Main.java"]
    q = text[text.index("public static class Q"):]
    assert "public static Acl2Number g(Acl2Number x) {\n            return P.g(x);" in q
    assert "public static Acl2Integer g(Acl2Integer x) {\n            return P.g(x);" in q


def test_synonym_transparency():
    w = world_of(PQ_SRC)
    rt = Runtime(build_unit(w))
    for v in [1, sym("a"), Cons(1, 2), "s"]:
        arg = from_source(v, "Acl2Value")
        assert to_source(run_method(rt, "P.g", [arg])) == to_source(run_method(rt, "Q.g", [arg]))
        assert call_with_values(rt, Symbol("Q", "G"), [v]) == call_with_values(rt, Symbol("P", "G"), [v])


def test_mv_class():
    text = print_unit(build_unit(world_of(MV_SRC)))["Main.java"]
    assert "public static final class MV_Acl2Integer_Acl2Symbol {" in text
    assert "private static final MV_Acl2Integer_Acl2Symbol $singleton = new MV_Acl2Integer_Acl2Symbol();" in text
    assert "MV_Acl2Integer_Acl2Symbol mv = two(x);" in text
    assert "Acl2Integer a = mv.$0;" in text and "Acl2Symbol b = mv.$1;" in text
    assert text.count("class MV_") == 1


def test_only_needed_mv_classes():
    assert "class MV_" not in print_unit(build_unit(world_of(F_SRC)))["Main.java"]


def test_constant_fields():
    src = """
(defun k () (cons 3 (cons -1 (cons 1/2 (cons 'foo (cons #\\a (cons "s" (cons '(1 2) (cons 99999999999 nil)))))))))
"""
    text = print_unit(build_unit(world_of(src)))["Main.java"]
    for field in ["$N_3 = Acl2Integer.make(3)", "$N_minus1 = Acl2Integer.make(-1)",
                  "$R_1_2 = Acl2Rational.make(1, 2)", '$S_ACL2$$FOO = Acl2Symbol.make("ACL2", "FOO")',
                  "$C_97 = Acl2Character.make('a')", '$STR_1 = Acl2String.make("s")',
                  '$N_99999999999 = Acl2Integer.make(new java.math.BigInteger("99999999999"))']:
        assert field in text, field
    assert re.search(r"\$L_1 = Acl2ConsPair.make\(", text)


def test_name_collision():
    w = world_of("(defun f-g (x) x)\n(defun f_g (x) x)")
    with pytest.raises(NameCollisionError) as exc:
        build_unit(w)
    assert "f-g" in str(exc.value).lower() and "f_g" in str(exc.value).lower()


def test_counter_freshness_and_determinism():
    src = "(defun k (a b c) (if a (if b (cons a b) (if c a b)) (if c (if a b c) c)))"
    w = world_of(src)
    [t] = translate_function(w, w.functions[sym("k")], False)
    m = t.method
    tmps = [s.name for s in walk_stmts(m.body) if isinstance(s, LocalDecl) and s.name.startswith("$tmp")]
    ks = [int(t[4:]) for t in tmps]
    assert ks == sorted(set(ks)) and len(ks) == 5
    a = t.annotated
    tt = TermTranslator(w, UnitState(), None, False).for_package("ACL2")
    assert tt.tr(a, 3) == tt.tr(a, 3)
    assert tt.tr(a, 3).counter == tt.tr(a, 0).counter + 3


def test_and_with_statements_nests_in_if():
    src = """
(defun p (x) (declare (xargs :guard (integerp x))) (and (< 0 x) (let ((y (+ x 1))) (< y 5))))
(function-type-main p (:ainteger) (:aboolean))
(defun q (x y) (declare (xargs :guard (and (integerp x) (integerp y)))) (and (< 0 x) (< y 5)))
(function-type-main q (:ainteger :ainteger) (:aboolean))
"""
    [p] = methods(src, "p")
    same(print_method(p), """
        public static boolean p(Acl2Integer x) {
            boolean $tmp1 = less_than($N_0, x);
            if ($tmp1) {
                Acl2Integer y = binary_plus(x, $N_1);
                $tmp1 = less_than(y, $N_5);
            }
            return $tmp1;
        }""")
    [q] = methods(src, "q")
    same(print_method(q), """
        public static boolean q(Acl2Integer x, Acl2Integer y) {
            return less_than($N_0, x) && less_than(y, $N_5);
        }""")
    rt = Runtime(build_unit(world_of(src)))
    for x in (-2, 2, 4):
        assert call_with_values(rt, sym("p"), [x]) == (Symbol("COMMON-LISP", "T") if 0 < x < 4 else NIL)


def test_non_strict_and():
    src = """
(defun boom (x) (declare (xargs :guard (integerp x))) (boom (+ x 1)))
(function-type-main boom (:ainteger) (:aboolean))
(defun safe (x) (declare (xargs :guard (integerp x))) (and (< x 0) (boom x)))
(function-type-main safe (:ainteger) (:aboolean))
"""
    rt = Runtime(build_unit(world_of(src, validate=False)))
    assert call_with_values(rt, sym("safe"), [5]) == NIL


def test_jint_method():
    from conftest import I_SRC
    [m] = methods(I_SRC, "i")
    assert print_method(m) == "public static int i(int x, int y) {\n    return 2 * x + y * y;\n}\n"
    assert isinstance(m, JMethod)
