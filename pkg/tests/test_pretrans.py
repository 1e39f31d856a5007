import itertools

import pytest

from conftest import F_MAIN, F_OVERLOADED, F_SRC, H_SRC, sym, world_of
from sejc.errors import MissingGlbType, TypeAnnotationError
from sejc.frontend import translate_body
from sejc.pretrans.annotate import AVar, annotate, check_glb_closure, convs, erase, render, select_fn_type
from sejc.pretrans.names import Kind, fresh_name, translate_name
from sejc.pretrans.reuse import mark_reuse, rename_apart
from sejc.pretrans.simplify import (drop_trivial_bindings, drop_unused_bindings, elide_progn,
                                    resolve_mbe, simplify, simplify_if_t)
from sejc.reader import read_sexprs
from sejc.terms import print_term
from sejc.types import ACONS, AI, AN, AR, AV, AY, FnType, JINT, conversion_legal, type_leq


def tr(text, bound=""):
    return translate_body(read_sexprs(text)[0], bound={sym(b) for b in bound.split()})


def pt(term):
    return print_term(term)


def squash(text):
    return " ".join(text.split())


# -- simplification passes

def test_resolve_mbe():
    t = tr("(mbe :logic (+ 0 x) :exec x)", "x")
    assert pt(resolve_mbe(t, True)) == "x"
    assert pt(resolve_mbe(t, False)) == "(binary-+ '0 x)"
    p = tr("(mbt (integerp x))", "x")
    assert pt(resolve_mbe(p, True)) == "'T"
    assert pt(resolve_mbe(p, False)) == "(integerp x)"
    plain = tr("(cons x x)", "x")
    assert resolve_mbe(plain, True) == plain


def test_simplify_if_t():
    assert pt(simplify_if_t(tr("(if t x y)", "x y"))) == "x"
    c = tr("(if c x y)", "c x y")
    assert simplify_if_t(c) == c
    assert pt(simplify_if_t(tr("(if t (if t a b) c)", "a b c"))) == "a"


def test_elide_progn():
    assert pt(elide_progn(tr("(prog2$ a b)", "a b"))) == "b"
    assert pt(elide_progn(tr("(progn$ a b c)", "a b c"))) == "c"
    assert pt(elide_progn(tr("(prog2$ a (prog2$ b c))", "a b c"))) == "c"


def test_drop_unused_bindings():
    assert pt(drop_unused_bindings(tr("((lambda (x y) y) a b)", "a b"))) == "((lambda (y) y) b)"
    keep = tr("((lambda (x) x) a)", "a")
    assert drop_unused_bindings(keep) == keep
    assert pt(drop_unused_bindings(tr("((lambda (x) 'c) a)", "a"))) == "'C"


def test_drop_trivial_bindings():
    t = tr("((lambda (x y) (cons x y)) '0 y)", "y")
    assert pt(drop_trivial_bindings(t)) == "((lambda (x) (cons x y)) '0)"
    assert pt(drop_trivial_bindings(tr("((lambda (x) x) x)", "x"))) == "x"
    closed = tr("((lambda (x) (cons x x)) a)", "a")
    assert drop_trivial_bindings(closed) == closed


def test_simplify_runs_passes_in_order():
    # mbt produces a t test that simplify_if_t then removes
    t = tr("(if (mbt (integerp x)) (prog2$ x (let ((u 1)) x)) 'bad)", "x")
    assert pt(simplify(t, True)) == "x"


# -- annotation

def test_annotate_untyped_f():
    w = world_of(F_SRC)
    r = w.functions[sym("f")]
    a = annotate(simplify(r.body, True), r, w)
    assert render(a) == squash("""
        ([AN>AV] (binary-* ([AV>AN] [AV]x)
                           ([AN>AN] (binary-+ ([AV>AN] [AV]y)
                                              ([AI>AN] '3)))))""")


def test_annotate_typed_f():
    w = world_of(F_MAIN)
    r = w.functions[sym("f")]
    a = annotate(simplify(r.body, True), r, w)
    assert render(a) == squash("""
        ([AN>AN] (binary-* ([AN>AN] [AN]x)
                           ([AN>AN] (binary-+ ([AN>AN] [AN]y)
                                              ([AI>AN] '3)))))""")


def _h():
    w = world_of(H_SRC)
    r = w.functions[sym("h")]
    return annotate(simplify(r.body, True), r, w)


def test_annotate_h():
    assert render(_h()) == squash("""
        ([AV>AV]
         (let (([AI]x ([AI>AI] '1)))
           ([AV>AV] (let (([AI]x ([AI>AI] (binary-+ ([AI>AI] [AI]x)
                                                    ([AI>AI] '1)))))
                      ([AI>AV] (binary-* ([AI>AI] '2)
                                         ([AI>AI] [AI]x)))))))""")


def test_mark_reuse_h():
    assert render(mark_reuse(_h())) == squash("""
        ([AV>AV]
         (let (([N][AI]x ([AI>AI] '1)))
           ([AV>AV] (let (([O][AI]x ([AI>AI] (binary-+ ([AI>AI] [N][AI]x)
                                                       ([AI>AI] '1)))))
                      ([AI>AV] (binary-* ([AI>AI] '2)
                                         ([AI>AI] [O][AI]x)))))))""")


def _marked(src, name):
    w = world_of(src)
    r = w.functions[sym(name)]
    a = annotate(simplify(r.body, True), r, w)
    params = list(zip(r.params, r.main_type.inputs))
    return mark_reuse(a, params), [AVar(p, t) for p, t in params]


def _targets(a):
    out = set()

    def walk(x):
        if isinstance(x, AVar):
            out.add((x.name.name, x.type, x.mark, x.target))
        for v in getattr(x, "__dict__", {}).values():
            for i in v if isinstance(v, tuple) else (v,):
                if hasattr(i, "__dataclass_fields__"):
                    walk(i)
    walk(a)
    return out


def test_fresh_binding_is_new():
    a, _ = _marked("(defun k (y) (let ((x (cons y y))) x))", "k")
    assert "[N][AC]x" in render(a)


def test_shadowing_with_later_use_is_new():
    src = ("(defun m (y) (let ((x (+ y 1))) (cons (let ((x (+ x 2))) x) x)))\n"
           "(function-type-main m (:ainteger) (:acons))")
    a, params = _marked(src, "m")
    assert "[O]" not in render(a)
    renamed, _ = rename_apart(a, params)
    assert {t for n, _, _, t in _targets(renamed) if n == "X"} == {"x", "x$1"}


def test_rename_apart_different_types():
    a, params = _marked("(defun k (y) (let ((x (cons y y))) (let ((x (+ (len x) 1))) (cons x x))))", "k")
    renamed, names = rename_apart(a, params)
    assert names == ["y"]
    assert {(t, ty) for n, ty, _, t in _targets(renamed) if n == "X"} == {("x", ACONS), ("x$1", AI)}


def test_rename_apart_keeps_reused_name():
    renamed, _ = rename_apart(mark_reuse(_h()), [])
    assert {t for n, _, _, t in _targets(renamed) if n == "X"} == {"x"}


def test_erasure_roundtrip():
    for src, name in [(F_SRC, "f"), (F_MAIN, "f"), (H_SRC, "h")]:
        w = world_of(src)
        r = w.functions[sym(name)]
        body = simplify(r.body, True)
        a = annotate(body, r, w)
        assert erase(a) == body
        assert erase(mark_reuse(a)) == body


def test_conversions_legal():
    w = world_of(F_OVERLOADED + H_SRC)
    for name in ("f", "h"):
        r = w.functions[sym(name)]
        for c in convs(annotate(simplify(r.body, True), r, w)):
            assert conversion_legal(c.src, c.dst)


def test_illegal_conversion_rejected():
    src = ("(defun j (x) (declare (xargs :guard (symbolp x))) (int-add x x))\n"
           "(function-type-main j (:asymbol) (:jint))")
    w = world_of(src, validate=False)
    r = w.functions[sym("j")]
    with pytest.raises(TypeAnnotationError):
        annotate(simplify(r.body, True), r, w)


# -- overloads

F3 = [FnType((AN, AN), (AN,)), FnType((AR, AR), (AR,)), FnType((AI, AI), (AI,))]


def test_select_fn_type():
    assert select_fn_type((AI, AI), F3) == F3[2]
    assert select_fn_type((AV, AV), F3) == F3[0]
    assert select_fn_type((AI, AR), F3) == F3[1]


def test_select_is_minimal_among_fits():
    types = [AV, AN, AR, AI, AY]
    for args in itertools.product(types, repeat=2):
        chosen = select_fn_type(args, F3)
        fits = [ft for ft in F3 if all(type_leq(a, t) for a, t in zip(args, ft.inputs))]
        for ft in fits:
            assert all(type_leq(x, y) for x, y in zip(chosen.inputs, ft.inputs))


def test_glb_closure():
    w = world_of(F_OVERLOADED)
    check_glb_closure(w.functions[sym("f")])
    check_glb_closure(world_of(F_SRC).functions[sym("f")])
    bad = F_MAIN + ("(function-type-other f (:ainteger :arational) (:arational))\n"
                    "(function-type-other f (:arational :ainteger) (:arational))\n")
    with pytest.raises(MissingGlbType) as exc:
        check_glb_closure(world_of(bad).functions[sym("f")])
    assert exc.value.types == (AI, AI)


def test_jint_not_mixed_with_objects():
    assert not conversion_legal(AY, JINT) and not conversion_legal(JINT, AV)


# -- names

def test_translate_name_examples():
    assert translate_name("JAVA-VM", Kind.PACKAGE) == "JAVA_VM"
    assert translate_name("SQUARE-ROOT", Kind.METHOD) == "square_root"
    assert translate_name("1+", Kind.METHOD) == "_1$2b"
    assert translate_name("WHILE", Kind.VARIABLE) == "while$"


def test_fresh_name():
    assert fresh_name("x", {"y"}) == "x"
    assert fresh_name("x", {"x", "x$1"}) == "x$2"


def test_translate_name_known_clashes_only():
    alphabet = "ABCD-+*1$_"
    for kind in (Kind.METHOD, Kind.VARIABLE):
        names = ["".join(p) for n in (1, 2) for p in itertools.product(alphabet, repeat=n)]
        out = {}
        for n in names:
            out.setdefault(translate_name(n, kind), set()).add(n.replace("-", "_"))
        # hyphen and underscore both map to underscore, and the prefix for a
        # leading digit makes "1" meet "_1"; nothing else clashes
        clashes = [v for v in out.values() if len(v) > 1]
        assert clashes == [{"1", "_1"}]


def test_rename_apart_separates_clashing_variables():
    w = world_of("(defun k (a-b a_b) (let ((c-d (cons a-b a_b))) (let ((c_d (cons c-d c-d))) (cons c_d c-d))))")
    r = w.functions[sym("k")]
    a = annotate(simplify(r.body, True), r, w)
    params = [AVar(p, t) for p, t in zip(r.params, r.main_type.inputs)]
    renamed, names = rename_apart(mark_reuse(a, [(p.name, p.type) for p in params]), params)
    assert names == ["a_b", "a_b$1"]
    assert {t for n, _, _, t in _targets(renamed) if n.startswith("C")} == {"c_d", "c_d$1"}
