"""Proper translation: annotated terms to Java statements and expressions."""

from dataclasses import dataclass

from .errors import NameCollisionError, SejcError
from .java.ast import (Assign, Binary, BoolLit, Call, Cast, CharLit, ExprStmt,
                       If, IntLit, JClass, JField, JMethod, JavaUnit,
                       LocalDecl, MethodCall, Name, New, Return, StrLit, Unary)
from .natives import NATIVES
from .pretrans.annotate import (OLD, ALambda, AQuote, AVar, Conv,
                                annotate_function, check_glb_closure)
from .pretrans.names import Kind, fresh_name, translate_name
from .pretrans.reuse import mark_reuse, rename_apart
from .pretrans.simplify import simplify
from .terms import IF
from .types import (AB, ACH, AS, AV, Tuple, java_class_name, type_leq)
from .values import (ACL2, INT_MAX, INT_MIN, NIL, Char, Cons, Symbol,
                     print_value)
from fractions import Fraction

PUBLIC_STATIC = ("public", "static")
CONSTANT = ("private", "static", "final")
NATIVE_CLASS = ACL2
INT_VALUE = Symbol(ACL2, "INT-VALUE")
NOT = Symbol("COMMON-LISP", "NOT")


@dataclass(frozen=True)
class TransResult:
    stmts: tuple
    expr: object
    counter: int


def package_class(pkg):
    return translate_name(pkg, Kind.PACKAGE)


def java_type(t, unit=None):
    if isinstance(t, Tuple):
        name = java_class_name(t)
        if unit is not None:
            unit.need_mv(t)
        return name
    return t.java


def _nil():
    return Name("Acl2Symbol.NIL")


def _camel(java_name):
    return "".join(part[:1].upper() + part[1:] for part in java_name.split("_"))


class UnitState:
    """Registries shared by every method of one unit."""

    def __init__(self):
        self.constants = {}  # key -> JField, in declaration order
        self.field_names = set()
        self.mv_types = {}
        self.strings = 0
        self.conses = 0
        self.natives_used = set()
        self.simple_calls = {}  # class name -> set of callee symbols named simply

    def need_mv(self, t):
        self.mv_types.setdefault(java_class_name(t), t)

    def _add_field(self, key, base, jtype, init):
        name = fresh_name(base, self.field_names)
        self.field_names.add(name)
        self.constants[key] = JField(CONSTANT, jtype, name, init)
        return name

    def constant(self, v):
        """Name of the field holding the object representation of ``v``."""
        key = (type(v).__name__, v)
        if key in self.constants:
            return self.constants[key].name
        if type(v) is int:
            base = f"$N_minus{-v}" if v < 0 else f"$N_{v}"
            return self._add_field(key, base, "Acl2Integer",
                                   Call("Acl2Integer.make", (_int_expr(v),)))
        if type(v) is Fraction:
            num = f"minus{-v.numerator}" if v.numerator < 0 else str(v.numerator)
            return self._add_field(key, f"$R_{num}_{v.denominator}", "Acl2Rational",
                                   Call("Acl2Rational.make", (_int_expr(v.numerator),
                                                              _int_expr(v.denominator))))
        if isinstance(v, Symbol):
            base = (f"$S_{translate_name(v.package, Kind.PACKAGE)}$$"
                    f"{translate_name(v.name, Kind.PACKAGE)}")
            return self._add_field(key, base, "Acl2Symbol", Call(
                "Acl2Symbol.make", (StrLit(v.package), StrLit(v.name))))
        if isinstance(v, Char):
            return self._add_field(key, f"$C_{v.code}", "Acl2Character",
                                   Call("Acl2Character.make", (CharLit(v.code),)))
        if type(v) is str:
            self.strings += 1
            return self._add_field(key, f"$STR_{self.strings}", "Acl2String",
                                   Call("Acl2String.make", (StrLit(v),)))
        if isinstance(v, Cons):
            car = self.constant(v.car)
            cdr = self.constant(v.cdr)
            self.conses += 1
            return self._add_field(key, f"$L_{self.conses}", "Acl2ConsPair",
                                   Call("Acl2ConsPair.make", (Name(car), Name(cdr))))
        raise TypeError(f"no constant representation for {v!r}")


def _int_expr(n):
    if INT_MIN <= n <= INT_MAX:
        return IntLit(n)
    return New("java.math.BigInteger", (StrLit(str(n)),))


def convert_expr(e, src, dst, unit):
    """Java code realizing conversion ``src`` -> ``dst`` of expression ``e``."""
    if src == dst:
        return e
    if type_leq(src, dst):
        if src is AB:
            return Call("Acl2Symbol.makeBoolean", (e,))
        if src is ACH:
            return Call("Acl2Character.make", (e,))
        if src is AS:
            return Call("Acl2String.make", (e,))
        return e
    if dst is AB:
        return Binary("!=", e, _nil())
    if dst is ACH:
        return MethodCall(Cast("Acl2Character", e), "getJavaChar", ())
    if dst is AS:
        return MethodCall(Cast("Acl2String", e), "getJavaString", ())
    return Cast(java_type(dst, unit), e)


def quote_expr(v, dst, unit):
    """A quoted constant in a context of type ``dst``."""
    if dst is AB:
        return BoolLit(v != NIL)
    if dst is ACH and isinstance(v, Char):
        return CharLit(v.code)
    if dst is AS and type(v) is str:
        return StrLit(v)
    return Name(unit.constant(v))


class TermTranslator:
    def __init__(self, world, unit, cls, guards=True):
        self.world = world
        self.unit = unit
        self.cls = cls  # translated class name of the method being built
        self.pkg = None
        self.guards = guards

    def for_package(self, pkg):
        self.pkg = pkg
        self.cls = package_class(pkg)
        return self

    def tr(self, a, counter):
        if isinstance(a, Conv):
            return self._conv(a, counter)
        if isinstance(a, AVar):
            return TransResult((), Name(a.target), counter)
        if isinstance(a, AQuote):
            return TransResult((), quote_expr(a.value, a.type, self.unit), counter)
        if isinstance(a, ALambda):
            return self._lambda(a, counter)
        if a.form == "if":
            return self._if(a, counter)
        if a.form in ("and", "or"):
            return self._andor(a, counter)
        if a.form == "mv":
            stmts, exprs, counter = self._args(a.args, counter)
            name = java_type(a.type, self.unit)
            return TransResult(stmts, Call(f"{name}.make", exprs), counter)
        if a.form == "mv-nth":
            index, var = a.args[0].inner.value, a.args[1].inner
            return TransResult((), Name(f"{var.target}.${index}"), counter)
        return self._call(a, counter)

    def _args(self, args, counter):
        stmts, exprs = [], []
        for x in args:
            r = self.tr(x, counter)
            stmts += r.stmts
            exprs.append(r.expr)
            counter = r.counter
        return tuple(stmts), tuple(exprs), counter

    def _conv(self, c, counter):
        if isinstance(c.inner, AQuote) and not isinstance(c.dst, Tuple):
            return TransResult((), quote_expr(c.inner.value, c.dst, self.unit), counter)
        r = self.tr(c.inner, counter)
        if isinstance(c.src, Tuple):
            if c.src == c.dst:
                return r
            counter = r.counter + 1
            tmp = f"$tmp{counter}"
            decl = LocalDecl(java_type(c.src, self.unit), tmp, r.expr)
            parts = tuple(convert_expr(Name(f"{tmp}.${i}"), s, d, self.unit)
                          for i, (s, d) in enumerate(zip(c.src.types, c.dst.types)))
            make = Call(f"{java_type(c.dst, self.unit)}.make", parts)
            return TransResult(r.stmts + (decl,), make, counter)
        return TransResult(r.stmts, convert_expr(r.expr, c.src, c.dst, self.unit), r.counter)

    def _test_expr(self, conv, expr):
        # a test that cannot become a boolean is compared against nil
        return expr if conv.dst is AB else Binary("!=", expr, _nil())

    def _if(self, a, counter):
        test, then, other = a.args
        rt = self.tr(test, counter)
        k = rt.counter + 1
        tmp = f"$tmp{k}"
        r1 = self.tr(then, k)
        r2 = self.tr(other, r1.counter)
        stmts = rt.stmts + (
            LocalDecl(java_type(a.type, self.unit), tmp),
            If(self._test_expr(test, rt.expr),
               r1.stmts + (Assign(tmp, r1.expr),),
               r2.stmts + (Assign(tmp, r2.expr),)),
        )
        return TransResult(stmts, Name(tmp), r2.counter)

    def _andor(self, a, counter):
        first = a.args[0]
        second = a.args[1] if a.form == "and" else a.args[2]
        op = "&&" if a.form == "and" else "||"
        ra = self.tr(first, counter)
        k = ra.counter + 1
        rb = self.tr(second, k)
        if not rb.stmts:
            return TransResult(ra.stmts, Binary(op, ra.expr, rb.expr), ra.counter)
        tmp = f"$tmp{k}"
        test = Name(tmp) if a.form == "and" else Unary("!", Name(tmp))
        stmts = ra.stmts + (
            LocalDecl("boolean", tmp, ra.expr),
            If(test, rb.stmts + (Assign(tmp, rb.expr),)),
        )
        return TransResult(stmts, Name(tmp), rb.counter)

    def _lambda(self, a, counter):
        stmts = []
        for p, x in zip(a.params, a.args):
            r = self.tr(x, counter)
            counter = r.counter
            stmts += r.stmts
            if p.mark == OLD:
                stmts.append(Assign(p.target, r.expr))
            else:
                stmts.append(LocalDecl(java_type(p.type, self.unit), p.target, r.expr))
        rb = self.tr(a.body, counter)
        return TransResult(tuple(stmts) + rb.stmts, rb.expr, rb.counter)

    def _call(self, a, counter):
        fn, ft = a.fn, a.ftype
        native = NATIVES.get(fn)
        if native is not None and native.inline_op:
            if fn == NOT and ft.inputs == (AB,):
                r = self.tr(a.args[0], counter)
                return TransResult(r.stmts, Unary("!", r.expr), r.counter)
            if fn != NOT:
                stmts, (x, y), counter = self._args(a.args, counter)
                return TransResult(stmts, Binary(native.inline_op, x, y), counter)
        if fn == INT_VALUE and isinstance(a.args[0].inner, AQuote):
            return TransResult((), IntLit(a.args[0].inner.value), counter)
        stmts, exprs, counter = self._args(a.args, counter)
        sig = tuple(java_type(t, self.unit) for t in ft.inputs)
        java_type(ft.output, self.unit)
        return TransResult(stmts, Call(self.call_name(fn), exprs, sig), counter)

    def call_name(self, fn):
        native = NATIVES.get(fn)
        if native is not None:
            self.unit.natives_used.add(fn)
            method, home = native.java_name, package_class(NATIVE_CLASS)
        else:
            method, home = translate_name(fn.name, Kind.METHOD), package_class(fn.package)
        if home == self.cls:
            return method
        if self.pkg is not None and self.world.import_map(self.pkg).get(fn.name) == fn:
            self.unit.simple_calls.setdefault(self.cls, set()).add(fn)
            return method
        return f"{home}.{method}"


# ---------------------------------------------------------------------------
# functions and units


@dataclass
class TranslatedFunction:
    method: JMethod
    annotated: object
    ftype: object


def function_types(world, rec, guards):
    main, others = world.fn_types(rec.name, guards)
    return (main,) + tuple(others)


def translate_function(world, rec, guards, unit=None, body=None):
    """One method per function type of ``rec``."""
    unit = unit or UnitState()
    if guards:
        check_glb_closure(rec)
    simplified = simplify(rec.body if body is None else body, guards)
    out = []
    for ft in function_types(world, rec, guards):
        try:
            a = annotate_function(rec, ft, world, guards, simplified)
        except SejcError as exc:
            exc.location = exc.location or rec.location
            raise
        a = mark_reuse(a, list(zip(rec.params, ft.inputs)))
        a, names = rename_apart(a, [AVar(p, t) for p, t in zip(rec.params, ft.inputs)])
        tt = TermTranslator(world, unit, None, guards).for_package(rec.name.package)
        r = tt.tr(a, 0)
        params = tuple((java_type(t, unit), n) for t, n in zip(ft.inputs, names))
        method = JMethod(PUBLIC_STATIC, java_type(ft.output, unit),
                         translate_name(rec.name.name, Kind.METHOD), params,
                         r.stmts + (Return(r.expr),))
        out.append(TranslatedFunction(method, a, ft))
    return out


def _object_type(t):
    return AV if t in (AB, ACH, AS) else t


def _wrapper_params(n):
    return ["x", "y", "z"][:n] if n <= 3 else [f"x{i + 1}" for i in range(n)]


def native_wrappers(fn, guards, unit):
    native = NATIVES[fn]
    if guards:
        types = (native.main_type,) + native.other_types
    else:
        from .natives import unguarded_type
        types = (unguarded_type(native.main_type),)
    out = []
    for ft in types:
        names = _wrapper_params(len(ft.inputs))
        params = tuple((java_type(t, unit), n) for t, n in zip(ft.inputs, names))
        # the native implementations take objects (or ints) and return the
        # representation of their main output type
        args = tuple(convert_expr(Name(n), t, _object_type(t), unit)
                     for n, t in zip(names, ft.inputs))
        call = Call(f"Acl2NativeFunction.exec{_camel(native.java_name)}", args)
        body = (Return(convert_expr(call, native.main_type.output, ft.output, unit)),)
        out.append(JMethod(PUBLIC_STATIC, java_type(ft.output, unit), native.java_name,
                           params, body))
    return out


def _synonym(method, home):
    args = tuple(Name(n) for _, n in method.params)
    call = Call(f"{home}.{method.name}", args, method.param_types)
    return JMethod(method.modifiers, method.ret, method.name, method.params, (Return(call),))


def mv_class(t):
    name = java_class_name(t)
    fields = [JField(("public",), c.java, f"${i}") for i, c in enumerate(t.types)]
    fields.append(JField(("private", "static", "final"), name, "$singleton", New(name)))
    params = tuple((c.java, f"${i}") for i, c in enumerate(t.types))
    body = tuple(Assign(_field("$singleton", f"${i}"), Name(f"${i}"))
                 for i in range(len(t.types))) + (Return(Name("$singleton")),)
    make = JMethod(PUBLIC_STATIC, name, "make", params, body)
    return JClass(name, ("public", "static", "final"), tuple(fields), (make,))


def _field(target, name):
    from .java.ast import FieldAccess
    return FieldAccess(Name(target), name)


def env_class(world, name):
    stmts = []
    for pkg in world.packages.values():
        stmts.append(ExprStmt(Call("Acl2Package.define", (StrLit(pkg.name),))))
        for sym in pkg.imports:
            stmts.append(ExprStmt(Call("Acl2Package.addImport", (
                StrLit(pkg.name), StrLit(sym.package), StrLit(sym.name)))))
    build = JMethod(PUBLIC_STATIC, "void", "build", (), tuple(stmts))
    return JClass(name, ("public",), (), (build,))


def check_signatures(cls):
    seen = {}
    for m in cls.methods:
        key = (m.name, m.param_types)
        if key in seen:
            raise NameCollisionError(
                f"class {cls.name}: {seen[key]} and {m.name} translate to the same "
                f"method signature {m.name}({', '.join(m.param_types)})")
        seen[key] = m.name


def build_unit(world, guards=True, main_class="Main", functions=None):
    """Translate every (or the selected) user function of ``world`` to a unit."""
    unit = UnitState()
    methods = {}  # class name -> list of methods
    sources = {}  # (class name, method name) -> source symbol, for diagnostics
    order = []

    def add(cls, m, origin):
        if cls not in methods:
            methods[cls] = []
            order.append(cls)
        key = (cls, m.name, m.param_types)
        if key in sources and sources[key] != origin:
            raise NameCollisionError(
                f"{print_value(sources[key]).lower()} and {print_value(origin).lower()} "
                f"both translate to method {cls}.{m.name}({', '.join(m.param_types)})")
        sources[key] = origin
        methods[cls].append(m)

    selected = list(world.functions.values()) if functions is None else [
        world.functions[f] for f in functions]
    translated = {}
    for rec in selected:
        translated[rec.name] = [t.method for t in translate_function(world, rec, guards, unit)]

    native_cls = package_class(NATIVE_CLASS)
    for fn in NATIVES:
        if fn in unit.natives_used:
            for m in native_wrappers(fn, guards, unit):
                add(native_cls, m, fn)
    for rec in selected:
        for m in translated[rec.name]:
            add(package_class(rec.name.package), m, rec.name)

    # synonyms for imported functions, one per overload
    for pkg in world.packages:
        cls = package_class(pkg)
        wanted = unit.simple_calls.get(cls, set())
        for sym in world.import_map(pkg).values():
            if sym in translated and package_class(sym.package) != cls:
                targets = translated[sym]
                home = package_class(sym.package)
            elif sym in wanted and sym in NATIVES:
                targets = native_wrappers(sym, guards, unit)
                home = native_cls
            else:
                continue
            for m in targets:
                add(cls, _synonym(m, home), sym)

    nested = [JClass(c, PUBLIC_STATIC, (), tuple(methods[c])) for c in order]
    for c in nested:
        check_signatures(c)
    nested += [mv_class(t) for t in unit.mv_types.values()]
    env_name = f"{main_class}Environment"
    main = JClass(main_class, ("public",), tuple(unit.constants.values()), (), tuple(nested),
                  (ExprStmt(Call(f"{env_name}.build", ())),))
    return JavaUnit(main, env_class(world, env_name))


__all__ = ["TermTranslator", "TransResult", "UnitState", "build_unit", "convert_expr",
           "java_type", "package_class", "translate_function", "IF", "AV"]
