"""Evaluator for the emitted Java subset.

Object values reuse the source value model (an ``Acl2Integer`` is a Python
int, an ``Acl2ConsPair`` a Cons, ...); Java primitives get their own wrappers.
Overloaded calls inside generated code are resolved on static types, as javac
would; entry calls from Python are resolved on the runtime classes of the
arguments.
"""

import sys
import threading
from dataclasses import dataclass
from fractions import Fraction

from .errors import (AmbiguousOverload, CastError, DepthExceeded,
                     NoApplicableOverload, TargetError)
from .java.ast import (Assign, Binary, BoolLit, Call, Cast, CharLit, Continue,
                       ExprStmt, FieldAccess, If, Index, IntLit, LocalDecl,
                       MethodCall, Name, New, Return, StrLit, Unary, While)
from .natives import NATIVES, apply_native
from .pretrans.names import Kind, translate_name
from .types import AB, ACH, AS
from .values import (NIL, T, Char, Cons, JInt, Symbol, canonical_number,
                     values_equal)

DEFAULT_MAX_DEPTH = 10_000
DEFAULT_MAX_STEPS = 200_000_000


@dataclass(frozen=True)
class JChar:
    code: int


@dataclass(frozen=True)
class JString:
    value: str


@dataclass(frozen=True)
class JLong:
    value: int

    @staticmethod
    def wrap(n):
        return JLong((n + 2**63) % 2**64 - 2**63)


class MVObject:
    """Instance of a generated MV class; mutable, as emitted."""

    __slots__ = ("cls", "fields")

    def __init__(self, cls, names):
        self.cls = cls
        self.fields = dict.fromkeys(names)

    def __repr__(self):
        return f"{self.cls}{tuple(self.fields.values())!r}"


# -- class hierarchy

OBJECT_PARENT = {
    "Acl2Integer": "Acl2Rational", "Acl2Rational": "Acl2Number", "Acl2Number": "Acl2Value",
    "Acl2Symbol": "Acl2Value", "Acl2Character": "Acl2Value", "Acl2String": "Acl2Value",
    "Acl2ConsPair": "Acl2Value", "Acl2Value": "Object",
}
PRIMITIVES = frozenset({"boolean", "char", "int", "long"})
# entry calls accept a source value for the primitive that represents it
_ENTRY_PARENT = {"boolean": "Acl2Symbol", "char": "Acl2Character", "String": "Acl2String"}


def java_subtype(a, b):
    """Reference/primitive subtyping of the emitted subset (no boxing)."""
    while a is not None:
        if a == b:
            return True
        a = OBJECT_PARENT.get(a, "Object" if a not in PRIMITIVES and a != "Object" else None)
    return False


def entry_subtype(a, b):
    if a == b:
        return True
    return java_subtype(_ENTRY_PARENT.get(a, a), b)


def runtime_class(v):
    t = type(v)
    if t is bool:
        return "boolean"
    if t is JInt:
        return "int"
    if t is JLong:
        return "long"
    if t is JChar:
        return "char"
    if t is JString:
        return "String"
    if t is int:
        return "Acl2Integer"
    if t is Fraction:
        return "Acl2Rational"
    if t is Symbol:
        return "Acl2Symbol"
    if t is Char:
        return "Acl2Character"
    if t is str:
        return "Acl2String"
    if t is Cons:
        return "Acl2ConsPair"
    if t is MVObject:
        return v.cls
    if t is list:
        return "String[]"
    if v is None:
        return "null"
    raise TargetError(f"not a runtime value: {v!r}")


def resolve_overload(candidates, arg_types, leq=java_subtype):
    """The unique pointwise-minimal applicable signature."""
    applicable = [s for s in candidates
                  if len(s) == len(arg_types) and all(leq(a, p) for a, p in zip(arg_types, s))]
    if not applicable:
        raise NoApplicableOverload(f"no overload accepts ({', '.join(arg_types)})")
    below = lambda s, o: all(leq(x, y) for x, y in zip(s, o))  # noqa: E731
    minimal = [s for s in applicable
               if not any(o != s and below(o, s) for o in applicable)]
    if len(set(minimal)) != 1:
        shown = "; ".join("(" + ", ".join(s) + ")" for s in minimal)
        raise AmbiguousOverload(f"ambiguous call with ({', '.join(arg_types)}): {shown}")
    return minimal[0]


# -- value conversions between the source model and Java primitives


def to_source(v):
    """Source value denoted by a runtime value (MV instances become tuples)."""
    t = type(v)
    if t is bool:
        return T if v else NIL
    if t is JChar:
        return Char(v.code)
    if t is JString:
        return v.value
    if t is MVObject:
        return tuple(to_source(x) for x in v.fields.values())
    return v


def from_source(v, jtype):
    if jtype == "boolean":
        return v != NIL
    if jtype == "char":
        return JChar(v.code)
    if jtype == "String":
        return JString(v)
    return v


def _entry_class(v):
    # source values with a primitive representation resolve as the primitive,
    # which entry_subtype places below the corresponding object class
    if type(v) is Symbol and (v == T or v == NIL):
        return "boolean"
    if type(v) is Char:
        return "char"
    if type(v) is str:
        return "String"
    return runtime_class(v)


def java_string(v):
    t = type(v)
    if t is JString:
        return v.value
    if t is bool:
        return "true" if v else "false"
    if t in (JInt, JLong):
        return str(v.value)
    if t is JChar:
        return chr(v.code)
    from .values import print_value
    return print_value(to_source(v))


# -- loaded classes


class ClassInfo:
    def __init__(self, decl, outer=None):
        self.decl = decl
        self.name = decl.name
        self.outer = outer
        self.qualname = f"{outer.qualname}.{decl.name}" if outer else decl.name
        self.fields = {}  # name -> [type, value]
        self.methods = {}
        for m in decl.methods:
            self.methods.setdefault(m.name, []).append(m)
        self.nested = {c.name: ClassInfo(c, self) for c in decl.nested}

    def chain(self):
        c = self
        while c is not None:
            yield c
            c = c.outer


_UNSET = object()
_CONTINUE = object()
BUILTIN_CLASSES = frozenset({
    "Acl2Integer", "Acl2Rational", "Acl2Symbol", "Acl2Character", "Acl2String",
    "Acl2ConsPair", "Acl2Package", "Acl2NativeFunction", "System", "System.out", "Integer",
})
_EXEC_NATIVES = {}
for _sym, _n in NATIVES.items():
    _EXEC_NATIVES["exec" + "".join(p[:1].upper() + p[1:] for p in _n.java_name.split("_"))] = _n


class Runtime:
    """A loaded unit: static fields initialized, ready for calls."""

    def __init__(self, unit, max_depth=DEFAULT_MAX_DEPTH, max_steps=DEFAULT_MAX_STEPS):
        self.unit = unit
        self.max_depth = max_depth
        self.max_steps = max_steps
        self.steps = 0
        self.depth = 0
        self.max_depth_seen = 0
        self.output = []
        self.packages = {}
        self.classes = {c.name: ClassInfo(c) for c in unit.classes()}
        self.main = self.classes[unit.main_class.name]
        _run_deep(self._load)

    # -- loading

    def _load(self):
        if self.main.decl.static_init:
            self.exec_block(self.main.decl.static_init, {}, self.main)
        self._init_fields(self.main)

    def _init_fields(self, c):
        for f in c.decl.fields:
            v = _UNSET if f.init is None else self.eval(f.init, {}, c)[0]
            c.fields[f.name] = [f.type, v]
        for n in c.nested.values():
            self._init_fields(n)

    # -- lookup

    def find_class(self, path, cls):
        """Class named by dotted ``path`` seen from ``cls``; None if unknown."""
        parts = path.split(".")
        found = None
        for c in cls.chain() if cls else ():
            if parts[0] in c.nested:
                found = c.nested[parts[0]]
                break
            if c.name == parts[0]:
                found = c
                break
        if found is None:
            found = self.classes.get(parts[0])
        if found is None:
            return None
        for p in parts[1:]:
            found = found.nested.get(p)
            if found is None:
                return None
        return found

    def _field_slot(self, name, cls):
        for c in cls.chain():
            if name in c.fields:
                return c.fields[name]
        return None

    # -- calls

    def invoke(self, cls, m, args):
        self.depth += 1
        if self.depth > self.max_depth:
            self.depth -= 1
            raise DepthExceeded(f"call depth exceeds {self.max_depth} in {cls.qualname}.{m.name}")
        if self.depth > self.max_depth_seen:
            self.max_depth_seen = self.depth
        try:
            env = {n: [t, _assign_conv(v, t)] for (t, n), v in zip(m.params, args)}
            r = self.exec_block(m.body, env, cls)
        finally:
            self.depth -= 1
        if m.ret == "void":
            return None
        if r is None or r is _CONTINUE:
            raise TargetError(f"{cls.qualname}.{m.name} ended without returning")
        value = _assign_conv(r[1], m.ret)
        if not java_subtype(runtime_class(value), m.ret) and value is not None:
            raise TargetError(f"{cls.qualname}.{m.name} returned a {runtime_class(value)}, "
                              f"declared {m.ret}")
        return value

    def _call(self, e, env, cls):
        args, types = [], []
        for a in e.args:
            v, t = self.eval(a, env, cls)
            args.append(v)
            types.append(t)
        if "." in e.name:
            owner_path, method = e.name.rsplit(".", 1)
            owner = self.find_class(owner_path, cls)
            if owner is None:
                if owner_path in BUILTIN_CLASSES:
                    return self._builtin(owner_path, method, args)
                raise TargetError(f"unknown class {owner_path}")
        else:
            method = e.name
            owner = next((c for c in cls.chain() if method in c.methods), None)
            if owner is None:
                raise TargetError(f"unknown method {method} in {cls.qualname}")
        cands = owner.methods.get(method)
        if not cands:
            raise TargetError(f"unknown method {owner.qualname}.{method}")
        m = self._select(cands, tuple(types), java_subtype)
        return self.invoke(owner, m, args), m.ret

    @staticmethod
    def _select(cands, types, leq):
        sig = resolve_overload([m.param_types for m in cands], types, leq)
        return next(m for m in cands if m.param_types == sig)

    def _builtin(self, owner, method, args):
        name = f"{owner}.{method}"
        if name == "Acl2Integer.make":
            return _unwrap_int(args[0]), "Acl2Integer"
        if name == "Acl2Rational.make":
            n, d = (_unwrap_int(a) for a in args)
            if d == 0:
                raise TargetError("zero denominator")
            return canonical_number(Fraction(n, d)), "Acl2Rational"
        if name == "Acl2Symbol.make":
            return self._intern(args[0].value, args[1].value), "Acl2Symbol"
        if name == "Acl2Symbol.makeBoolean":
            return (T if args[0] else NIL), "Acl2Symbol"
        if name == "Acl2Character.make":
            return Char(args[0].code), "Acl2Character"
        if name == "Acl2String.make":
            return args[0].value, "Acl2String"
        if name == "Acl2ConsPair.make":
            return Cons(args[0], args[1]), "Acl2ConsPair"
        if name == "Acl2Package.define":
            self.packages.setdefault(args[0].value, {})
            return None, "void"
        if name == "Acl2Package.addImport":
            pkg, home, sym = (a.value for a in args)
            self.packages.setdefault(pkg, {})[sym] = Symbol(home, sym)
            return None, "void"
        if owner == "Acl2NativeFunction" and method in _EXEC_NATIVES:
            native = _EXEC_NATIVES[method]
            if any(type(a) in (bool, JChar, JString) for a in args):
                raise TargetError(f"{name} takes objects, not Java primitives")
            result = apply_native(native.symbol, list(args))
            out = native.main_type.output
            if out is AB:
                result = result != NIL
            elif out is ACH:
                result = JChar(result.code)
            elif out is AS:
                result = JString(result)
            return result, runtime_class(result)
        if name == "System.out.println":
            self.output.append(java_string(args[0]) if args else "")
            return None, "void"
        if name == "System.nanoTime":
            return JLong(self.steps), "long"
        if name == "Integer.parseInt":
            try:
                return JInt.wrap(int(args[0].value)), "int"
            except ValueError:
                raise TargetError(f"not an int: {args[0].value!r}") from None
        raise TargetError(f"unknown library method {name}")

    def _intern(self, pkg, name):
        return self.packages.get(pkg, {}).get(name, Symbol(pkg, name))

    # -- statements

    def exec_block(self, stmts, env, cls):
        for s in stmts:
            r = self.exec_stmt(s, env, cls)
            if r is not None:
                return r
        return None

    def exec_stmt(self, s, env, cls):
        self.steps += 1
        if self.steps > self.max_steps:
            raise TargetError(f"evaluation exceeds {self.max_steps} steps")
        if isinstance(s, Return):
            return ("ret", None if s.expr is None else self.eval(s.expr, env, cls)[0])
        if isinstance(s, LocalDecl):
            v = _UNSET if s.init is None else _assign_conv(self.eval(s.init, env, cls)[0], s.type)
            env[s.name] = [s.type, v]
            return None
        if isinstance(s, Assign):
            v = self.eval(s.expr, env, cls)[0]
            if isinstance(s.target, str):
                slot = env.get(s.target) or self._field_slot(s.target, cls)
                if slot is None:
                    raise TargetError(f"assignment to unknown variable {s.target}")
                slot[1] = _assign_conv(v, slot[0])
            else:
                obj = self.eval(s.target.target, env, cls)[0]
                if not isinstance(obj, MVObject):
                    raise TargetError(f"field assignment on {runtime_class(obj)}")
                obj.fields[s.target.field] = v
            return None
        if isinstance(s, If):
            if self._test(s.test, env, cls):
                return self.exec_block(s.then, env, cls)
            if s.orelse is not None:
                return self.exec_block(s.orelse, env, cls)
            return None
        if isinstance(s, While):
            while self._test(s.test, env, cls):
                r = self.exec_block(s.body, env, cls)
                if r is not None and r is not _CONTINUE:
                    return r
            return None
        if isinstance(s, Continue):
            return _CONTINUE
        if isinstance(s, ExprStmt):
            self.eval(s.expr, env, cls)
            return None
        raise TargetError(f"unsupported statement {s!r}")

    def _test(self, e, env, cls):
        v = self.eval(e, env, cls)[0]
        if type(v) is not bool:
            raise TargetError(f"condition is a {runtime_class(v)}, not boolean")
        return v

    # -- expressions

    def eval(self, e, env, cls):
        """Value and static type of expression ``e``."""
        self.steps += 1
        if isinstance(e, Name):
            return self._name(e.name, env, cls)
        if isinstance(e, Call):
            return self._call(e, env, cls)
        if isinstance(e, Binary):
            return self._binary(e, env, cls)
        if isinstance(e, Cast):
            v = self.eval(e.operand, env, cls)[0]
            return _cast(v, e.type), e.type
        if isinstance(e, Unary):
            v, t = self.eval(e.operand, env, cls)
            if e.op == "!":
                if type(v) is not bool:
                    raise TargetError("! applied to a non-boolean")
                return (not v), "boolean"
            if type(v) is JInt:
                return JInt.wrap(-v.value), "int"
            if type(v) is JLong:
                return JLong.wrap(-v.value), "long"
            raise TargetError("unary minus on a non-number")
        if isinstance(e, IntLit):
            return JInt(e.value), "int"
        if isinstance(e, BoolLit):
            return e.value, "boolean"
        if isinstance(e, CharLit):
            return JChar(e.code), "char"
        if isinstance(e, StrLit):
            return JString(e.value), "String"
        if isinstance(e, MethodCall):
            return self._method_call(e, env, cls)
        if isinstance(e, FieldAccess):
            obj = self.eval(e.target, env, cls)[0]
            return self._member(obj, e.field)
        if isinstance(e, New):
            if e.cls == "java.math.BigInteger":
                return int(self.eval(e.args[0], env, cls)[0].value), e.cls
            c = self.find_class(e.cls, cls)
            if c is None:
                raise TargetError(f"unknown class {e.cls}")
            names = [f.name for f in c.decl.fields if "static" not in f.modifiers]
            return MVObject(c.name, names), c.name
        if isinstance(e, Index):
            arr = self.eval(e.target, env, cls)[0]
            i = self.eval(e.index, env, cls)[0].value
            if not 0 <= i < len(arr):
                raise TargetError(f"array index {i} out of bounds")
            return arr[i], "String"
        raise TargetError(f"unsupported expression {e!r}")

    def _name(self, name, env, cls):
        slot = env.get(name)
        if slot is None and "." not in name:
            slot = self._field_slot(name, cls)
        if slot is not None:
            if slot[1] is _UNSET:
                raise TargetError(f"variable {name} read before assignment")
            return slot[1], slot[0]
        if name == "Acl2Symbol.NIL":
            return NIL, "Acl2Symbol"
        if name == "Acl2Symbol.T":
            return T, "Acl2Symbol"
        if "." in name:
            head, member = name.rsplit(".", 1)
            if head in env or (("." not in head) and self._field_slot(head, cls)):
                return self._member(self._name(head, env, cls)[0], member)
            owner = self.find_class(head, cls)
            if owner is not None and member in owner.fields:
                slot = owner.fields[member]
                return slot[1], slot[0]
        raise TargetError(f"unknown name {name}")

    def _member(self, obj, field):
        if isinstance(obj, MVObject):
            if field not in obj.fields:
                raise TargetError(f"{obj.cls} has no field {field}")
            c = self._mv_class(obj.cls)
            ftype = next(f.type for f in c.decl.fields if f.name == field)
            return obj.fields[field], ftype
        if isinstance(obj, list) and field == "length":
            return JInt(len(obj)), "int"
        raise TargetError(f"field {field} of a {runtime_class(obj)}")

    def _mv_class(self, name):
        return self.main.nested[name]

    def _method_call(self, e, env, cls):
        obj = self.eval(e.target, env, cls)[0]
        args = [self.eval(a, env, cls)[0] for a in e.args]
        if e.name == "getJavaChar" and type(obj) is Char:
            return JChar(obj.code), "char"
        if e.name == "getJavaString" and type(obj) is str:
            return JString(obj), "String"
        if e.name == "equals" and len(args) == 1:
            return values_equal(obj, args[0]), "boolean"
        raise TargetError(f"unsupported method {e.name} on a {runtime_class(obj)}")

    def _binary(self, e, env, cls):
        op = e.op
        if op in ("&&", "||"):
            left = self._test(e.left, env, cls)
            if (op == "&&") != left:
                return left, "boolean"
            return self._test(e.right, env, cls), "boolean"
        a, _ = self.eval(e.left, env, cls)
        b, _ = self.eval(e.right, env, cls)
        if op == "+" and (type(a) is JString or type(b) is JString):
            return JString(java_string(a) + java_string(b)), "String"
        if op in ("==", "!="):
            same = _same(a, b)
            return (same if op == "==" else not same), "boolean"
        if type(a) not in (JInt, JLong) or type(b) not in (JInt, JLong):
            raise TargetError(f"operator {op} on {runtime_class(a)} and {runtime_class(b)}")
        wide = type(a) is JLong or type(b) is JLong
        x, y = a.value, b.value
        if op in ("<", "<=", ">", ">="):
            return {"<": x < y, "<=": x <= y, ">": x > y, ">=": x >= y}[op], "boolean"
        if op == "+":
            r = x + y
        elif op == "-":
            r = x - y
        elif op == "*":
            r = x * y
        elif op == "/":
            if y == 0:
                raise TargetError("division by zero")
            r = abs(x) // abs(y) * (1 if (x < 0) == (y < 0) else -1)
        else:
            raise TargetError(f"unsupported operator {op}")
        return (JLong.wrap(r), "long") if wide else (JInt.wrap(r), "int")


def _same(a, b):
    # primitives compare by value; of the objects only symbols are interned
    if type(a) in (bool, JInt, JLong, JChar) or type(b) in (bool, JInt, JLong, JChar):
        x = a.value if type(a) in (JInt, JLong) else a
        y = b.value if type(b) in (JInt, JLong) else b
        return x == y
    if type(a) is Symbol and type(b) is Symbol:
        return a == b
    return a is b


def _unwrap_int(v):
    if type(v) in (JInt, JLong):
        return v.value
    if type(v) is int:
        return v
    raise TargetError(f"expected an integer, got {runtime_class(v)}")


def _assign_conv(v, jtype):
    if jtype == "long" and type(v) is JInt:
        return JLong(v.value)
    return v


def _cast(v, jtype):
    if jtype in PRIMITIVES:
        if jtype == "int" and type(v) in (JInt, JLong):
            return JInt.wrap(v.value)
        if jtype == "long" and type(v) in (JInt, JLong):
            return JLong(v.value)
        if runtime_class(v) != jtype:
            raise CastError(f"cannot cast {runtime_class(v)} to {jtype}")
        return v
    cls = runtime_class(v)
    if not java_subtype(cls, jtype):
        raise CastError(f"cannot cast {cls} to {jtype}")
    return v


# -- deep recursion support

_STACK_BYTES = 512 * 1024 * 1024
_RECURSION = 1_000_000
_stack_lock = threading.Lock()


def _run_deep(fn, *args):
    """Run ``fn`` on a thread with a large stack so deep evaluation fits."""
    if getattr(_tls, "deep", False):
        return fn(*args)
    box = {}

    def body():
        _tls.deep = True
        try:
            box["value"] = fn(*args)
        except BaseException as exc:  # re-raised on the caller's thread
            box["error"] = exc

    with _stack_lock:
        old_size = threading.stack_size(_STACK_BYTES)
        try:
            worker = threading.Thread(target=body)
            worker.start()
        finally:
            threading.stack_size(old_size)
    old_limit = sys.getrecursionlimit()
    if old_limit < _RECURSION:
        sys.setrecursionlimit(_RECURSION)
    worker.join()
    if "error" in box:
        raise box["error"]
    return box.get("value")


_tls = threading.local()


# -- entry points


def load(unit, **kw):
    return unit if isinstance(unit, Runtime) else Runtime(unit, **kw)


def _entry_method(rt, qualified_name):
    owner_path, method = qualified_name.rsplit(".", 1)
    owner = rt.find_class(owner_path, rt.main)
    if owner is None or method not in owner.methods:
        raise TargetError(f"unknown method {qualified_name}")
    return owner, owner.methods[method]


def run_method(unit, qualified_name, args, **kw):
    """Call a method with runtime values, resolving overloads on their classes."""
    rt = load(unit, **kw)
    owner, cands = _entry_method(rt, qualified_name)
    m = Runtime._select(cands, tuple(runtime_class(a) for a in args), java_subtype)
    return _run_deep(rt.invoke, owner, m, list(args))


def run_main(unit, args=(), **kw):
    """Run the test class's main method; returns the printed lines."""
    rt = load(unit, **kw)
    tests = rt.classes[unit.test_class.name]
    m = tests.methods["main"][0]
    _run_deep(rt.invoke, tests, m, [[JString(a) for a in args]])
    return rt.output


def method_path(fn):
    """Qualified Java method name of a source function."""
    return f"{translate_name(fn.package, Kind.PACKAGE)}.{translate_name(fn.name, Kind.METHOD)}"


def call_with_values(unit, fn, values, **kw):
    """Call the translation of source function ``fn`` on source values.

    Returns a source value (a tuple for several results).
    """
    rt = load(unit, **kw)
    owner, cands = _entry_method(rt, method_path(fn))
    m = Runtime._select(cands, tuple(_entry_class(v) for v in values), entry_subtype)
    args = [from_source(v, t) for v, t in zip(values, m.param_types)]
    result = _run_deep(rt.invoke, owner, m, args)
    return to_source(result)
