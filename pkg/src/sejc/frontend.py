"""Workspace parsing: surface S-expressions to a World of translated terms."""

from dataclasses import dataclass, field
from pathlib import Path

from .errors import DirectiveError, FrontendError, SejcError
from .natives import BUILTIN_IMPORTS, NATIVES, unguarded_type
from .reader import Dotted, SSym, read_located
from .terms import (IF, MBE_TAG, MV, MV_NTH, MV_VAR, PROGN_TAG, RETURN_LAST,
                    App, FunctionRecord, LambdaApp, Quote, TestSpec, Var,
                    free_vars)
from .types import AV, BY_KEYWORD, FnType
from .values import (ACL2, CL, KEYWORD, NIL, T, Char, Cons, Symbol, make_list,
                     print_value)

SPECIAL_FUNCTIONS = frozenset({IF, MV, RETURN_LAST})


@dataclass(frozen=True)
class PackageDef:
    name: str
    imports: tuple = ()

    def __post_init__(self):
        if not self.name:
            raise FrontendError("package name must be non-empty")
        names = [s.name for s in self.imports]
        if len(names) != len(set(names)):
            raise FrontendError(f"package {self.name} imports two symbols with the same name")


def _builtin_packages():
    acl2_natives = [s for s in NATIVES if s.package == ACL2]
    return {
        CL: PackageDef(CL, ()),
        ACL2: PackageDef(ACL2, BUILTIN_IMPORTS),
    }, tuple(BUILTIN_IMPORTS) + tuple(acl2_natives)


@dataclass
class World:
    packages: dict = field(default_factory=dict)
    functions: dict = field(default_factory=dict)
    tests: list = field(default_factory=list)
    natives: frozenset = frozenset(NATIVES) | SPECIAL_FUNCTIONS

    def __post_init__(self):
        if not self.packages:
            self.packages, _ = _builtin_packages()
        self._imports = {}

    def import_map(self, package):
        cached = self._imports.get(package)
        if cached is None:
            pkg = self.packages.get(package)
            if pkg is None:
                raise FrontendError(f"unknown package {package!r}")
            cached = {s.name: s for s in pkg.imports}
            self._imports[package] = cached
        return cached

    def intern(self, name, package):
        if package == KEYWORD:
            return Symbol(KEYWORD, name)
        return self.import_map(package).get(name, Symbol(package, name))

    def is_defined(self, sym):
        return sym in self.functions or sym in self.natives

    def fn_types(self, sym, guards=True):
        """Main and other function types of a user or native function."""
        if sym in self.functions:
            rec = self.functions[sym]
            main, others = rec.main_type, tuple(rec.other_types)
        else:
            native = NATIVES[sym]
            main, others = native.main_type, native.other_types
        if not guards:
            return unguarded_type(main), ()
        return main, others

    def package_names(self):
        return list(self.packages)


_ARITH_NAMES = {"+", "*", "-", "/", "1+", "1-", "<=", ">", ">=", "=", "/="}
MACRO_NAMES = frozenset({
    "QUOTE", "LET", "LET*", "AND", "OR", "IF", "COND", "MBE", "MBT", "PROG2$",
    "PROGN$", "MV", "MV-LET", "LIST"} | _ARITH_NAMES)


def _is_sym(x, name=None):
    return isinstance(x, SSym) and (name is None or x.name == name)


class Translator:
    """Translates surface bodies to translated-form terms."""

    def __init__(self, world, arities):
        self.world = world
        self.arities = arities  # user functions: Symbol -> arity

    def symbol(self, s, pkg):
        if s.package is None:
            return self.world.intern(s.name, pkg)
        if s.package not in self.world.packages and s.package != KEYWORD:
            raise FrontendError(f"unknown package in symbol {s!r}")
        return self.world.intern(s.name, s.package)

    def datum(self, x, pkg):
        if isinstance(x, SSym):
            return self.symbol(x, pkg)
        if isinstance(x, list):
            return make_list(self.datum(i, pkg) for i in x)
        if isinstance(x, Dotted):
            return make_list((self.datum(i, pkg) for i in x.items), self.datum(x.tail, pkg))
        return x

    def variable(self, s, pkg):
        if not _is_sym(s):
            raise FrontendError(f"expected a variable, found {s!r}")
        sym = self.symbol(s, pkg)
        if sym in (T, NIL) or sym.package == KEYWORD:
            raise FrontendError(f"{s!r} cannot be used as a variable")
        return sym

    def translate(self, x, pkg, bound=frozenset()):
        return self._tr(x, pkg, bound)

    def _tr(self, x, pkg, bound):
        if isinstance(x, SSym):
            sym = self.symbol(x, pkg)
            if sym in (T, NIL) or sym.package == KEYWORD:
                return Quote(sym)
            if sym not in bound:
                raise FrontendError(f"unbound variable {x!r}")
            return Var(sym)
        if isinstance(x, (int, str, Char)) or type(x).__name__ == "Fraction":
            return Quote(x)
        if isinstance(x, Dotted):
            raise FrontendError(f"malformed form {x!r}")
        head, args = x[0], x[1:]
        if isinstance(head, list) and head and _is_sym(head[0], "LAMBDA"):
            return self._lambda(head, args, pkg, bound)
        if not isinstance(head, SSym):
            raise FrontendError(f"illegal function position {head!r}")
        fn = self.symbol(head, pkg)
        if head.name in MACRO_NAMES and not self.world.is_defined(fn) or head.name in (
                "IF", "MV"):
            return self._macro(head.name, args, pkg, bound)
        return self._call(fn, args, pkg, bound)

    def _call(self, fn, args, pkg, bound):
        if fn in self.arities:
            arity = self.arities[fn]
        elif fn in NATIVES:
            arity = NATIVES[fn].arity
        elif fn == RETURN_LAST:
            arity = 3
        else:
            raise FrontendError(f"undefined function {print_value(fn)}")
        if len(args) != arity:
            raise FrontendError(
                f"{print_value(fn)} expects {arity} arguments, got {len(args)}")
        return App(fn, tuple(self._tr(a, pkg, bound) for a in args))

    def _lambda(self, head, args, pkg, bound):
        if len(head) != 3 or not isinstance(head[1], (list, SSym)):
            raise FrontendError("malformed lambda expression")
        formals = [] if head[1] == SSym(None, "NIL") else head[1]
        params = [self.variable(p, pkg) for p in formals]
        if len(params) != len(args):
            raise FrontendError("lambda applied to the wrong number of arguments")
        actuals = [self._tr(a, pkg, bound) for a in args]
        return self._closed_lambda(params, head[2], actuals, pkg, bound)

    def _closed_lambda(self, params, body_src, actuals, pkg, bound):
        if len(set(params)) != len(params):
            raise FrontendError("duplicate variable in binding list")
        body = self._tr(body_src, pkg, bound | frozenset(params))
        return close_lambda(params, body, actuals)

    def _macro(self, name, args, pkg, bound):
        tr = lambda a: self._tr(a, pkg, bound)  # noqa: E731
        if name == "QUOTE":
            self._nargs(name, args, 1)
            return Quote(self.datum(args[0], pkg))
        if name == "IF":
            self._nargs(name, args, 3)
            return App(IF, tuple(tr(a) for a in args))
        if name in ("LET", "LET*"):
            if len(args) != 2:
                raise FrontendError(f"malformed {name.lower()}")
            bindings = [] if args[0] == SSym(None, "NIL") else args[0]
            if not isinstance(bindings, list):
                raise FrontendError(f"malformed {name.lower()} bindings")
            for b in bindings:
                if not (isinstance(b, list) and len(b) == 2):
                    raise FrontendError(f"malformed binding {b!r}")
            if name == "LET*" and len(bindings) > 1:
                inner = [SSym(None, "LET*"), bindings[1:], args[1]]
                return self._macro("LET", [[bindings[0]], inner], pkg, bound)
            params = [self.variable(b[0], pkg) for b in bindings]
            if not params:
                return tr(args[1])
            return self._closed_lambda(params, args[1], [tr(b[1]) for b in bindings],
                                       pkg, bound)
        if name == "AND":
            if not args:
                return Quote(T)
            if len(args) == 1:
                return tr(args[0])
            rest = self._macro("AND", args[1:], pkg, bound)
            return App(IF, (tr(args[0]), rest, Quote(NIL)))
        if name == "OR":
            if not args:
                return Quote(NIL)
            if len(args) == 1:
                return tr(args[0])
            first = tr(args[0])
            return App(IF, (first, first, self._macro("OR", args[1:], pkg, bound)))
        if name == "COND":
            if not args:
                return Quote(NIL)
            clause = args[0]
            if not (isinstance(clause, list) and len(clause) == 2):
                raise FrontendError("cond clauses must have a test and one body")
            rest = self._macro("COND", args[1:], pkg, bound)
            return App(IF, (tr(clause[0]), tr(clause[1]), rest))
        if name == "MBE":
            if len(args) != 4:
                raise FrontendError("mbe takes :logic and :exec arguments")
            parts = dict()
            for key, val in ((args[0], args[1]), (args[2], args[3])):
                if not (_is_sym(key) and key.package == KEYWORD
                        and key.name in ("LOGIC", "EXEC")):
                    raise FrontendError(f"unexpected mbe keyword {key!r}")
                parts[key.name] = tr(val)
            if len(parts) != 2:
                raise FrontendError("mbe needs both :logic and :exec")
            return App(RETURN_LAST, (Quote(MBE_TAG), parts["EXEC"], parts["LOGIC"]))
        if name == "MBT":
            self._nargs(name, args, 1)
            return App(RETURN_LAST, (Quote(MBE_TAG), Quote(T), tr(args[0])))
        if name == "PROG2$":
            self._nargs(name, args, 2)
            return App(RETURN_LAST, (Quote(PROGN_TAG), tr(args[0]), tr(args[1])))
        if name == "PROGN$":
            if not args:
                return Quote(NIL)
            if len(args) == 1:
                return tr(args[0])
            rest = self._macro("PROGN$", args[1:], pkg, bound)
            return App(RETURN_LAST, (Quote(PROGN_TAG), tr(args[0]), rest))
        if name == "MV":
            if len(args) < 2:
                raise FrontendError("mv needs at least two arguments")
            return App(MV, tuple(tr(a) for a in args))
        if name == "MV-LET":
            return self._mv_let(args, pkg, bound)
        if name == "LIST":
            result = Quote(NIL)
            for a in reversed(args):
                result = App(NATIVE("CONS"), (tr(a), result))
            return result
        return self._arith(name, [tr(a) for a in args])

    def _mv_let(self, args, pkg, bound):
        if len(args) != 3 or not isinstance(args[0], list):
            raise FrontendError("malformed mv-let")
        vars_ = [self.variable(v, pkg) for v in args[0]]
        if len(vars_) < 2:
            raise FrontendError("mv-let binds at least two variables")
        if len(set(vars_)) != len(vars_):
            raise FrontendError("duplicate variable in mv-let")
        producer = self._tr(args[1], pkg, bound)
        body = self._tr(args[2], pkg, bound | frozenset(vars_))
        if MV_VAR in free_vars(body) and MV_VAR not in vars_:
            raise FrontendError("the variable mv is reserved inside mv-let bodies")
        nths = [App(MV_NTH, (Quote(i), Var(MV_VAR))) for i in range(len(vars_))]
        inner = close_lambda(vars_, body, nths)
        return close_lambda([MV_VAR], inner, [producer])

    def _arith(self, name, args):
        n = NATIVE
        if name in ("+", "*"):
            fn = n("BINARY-+") if name == "+" else n("BINARY-*")
            if not args:
                return Quote(0 if name == "+" else 1)
            if len(args) == 1:
                return App(fn, (Quote(0 if name == "+" else 1), args[0]))
            result = args[-1]
            for a in reversed(args[:-1]):
                result = App(fn, (a, result))
            return result
        if name == "-":
            if len(args) == 1:
                return App(n("UNARY--"), (args[0],))
            self._nargs(name, args, 2)
            return App(n("BINARY-+"), (args[0], App(n("UNARY--"), (args[1],))))
        if name == "/":
            if len(args) == 1:
                return App(n("UNARY-/"), (args[0],))
            self._nargs(name, args, 2)
            return App(n("BINARY-*"), (args[0], App(n("UNARY-/"), (args[1],))))
        if name in ("1+", "1-"):
            self._nargs(name, args, 1)
            return App(n("BINARY-+"), (Quote(1 if name == "1+" else -1), args[0]))
        self._nargs(name, args, 2)
        x, y = args
        less = n("<")
        if name == "<=":
            return App(n("NOT"), (App(less, (y, x)),))
        if name == ">":
            return App(less, (y, x))
        if name == ">=":
            return App(n("NOT"), (App(less, (x, y)),))
        if name == "=":
            return App(n("EQUAL"), (x, y))
        return App(n("NOT"), (App(n("EQUAL"), (x, y)),))

    @staticmethod
    def _nargs(name, args, n):
        if len(args) != n:
            raise FrontendError(f"{name.lower()} expects {n} arguments, got {len(args)}")


def NATIVE(name):
    for pkg in (CL, ACL2):
        sym = Symbol(pkg, name)
        if sym in NATIVES:
            return sym
    raise KeyError(name)


def close_lambda(params, body, actuals):
    """Lambda application with the body's other free variables bound to themselves."""
    extra = [v for v in free_vars(body) if v not in params]
    return LambdaApp(tuple(params) + tuple(extra), body,
                     tuple(actuals) + tuple(Var(v) for v in extra))


def translate_body(surface, pkg=ACL2, world=None, arities=None, bound=frozenset()):
    """Translate one surface term read in package ``pkg``."""
    world = world or World()
    return Translator(world, arities or {}).translate(surface, pkg, frozenset(bound))


# ---------------------------------------------------------------------------
# top-level forms

def _string_name(x, what):
    if isinstance(x, str):
        return x
    if isinstance(x, SSym):
        return x.name
    raise FrontendError(f"expected a {what} name, found {x!r}")


@dataclass
class _Defun:
    name: Symbol
    params: list
    guard_src: object
    body_src: object
    package: str


def _parse_type(x):
    if not (isinstance(x, SSym) and x.package == KEYWORD):
        raise DirectiveError(f"expected a type keyword, found {x!r}")
    t = BY_KEYWORD.get(x.name.lower())
    if t is None:
        raise DirectiveError(f"unknown type keyword :{x.name.lower()}")
    return t


def _parse_types(x):
    if x == SSym(None, "NIL"):
        return ()
    if isinstance(x, list):
        return tuple(_parse_type(i) for i in x)
    raise DirectiveError(f"expected a list of type keywords, found {x!r}")


def parse_workspace(sexprs, validate=True, samples=100, seed=0, locations=None):
    """Build a World from the top-level forms of a workspace.

    ``locations`` gives a ``file:line:col`` string per form; errors about a
    form, or later about the function it defines, carry that location.
    """
    sexprs = list(sexprs)
    locations = list(locations) if locations is not None else [None] * len(sexprs)
    world = World()
    tr = Translator(world, {})
    pkg = ACL2
    defuns = []  # (_Defun, location)
    directives = []  # (kind, fn symbol, FnType, location)
    tests = []  # (name, call source, package, location)
    for form, loc in zip(sexprs, locations):
        with _located(loc):
            pkg = _top_form(world, tr, form, pkg, loc, defuns, directives, tests)

    arities, where = {}, {}
    for d, loc in defuns:
        with _located(loc):
            if d.name in arities or d.name in world.natives:
                raise FrontendError(f"duplicate function {print_value(d.name)}")
        arities[d.name] = len(d.params)
        where[d.name] = loc
    tr.arities = arities

    mains, others = {}, {}
    for kind, fn, ft, loc in directives:
        with _located(loc):
            if fn not in arities:
                raise DirectiveError(f"type directive for undefined function {print_value(fn)}")
            if len(ft.inputs) != arities[fn]:
                raise DirectiveError(
                    f"type directive for {print_value(fn)} has {len(ft.inputs)} inputs, "
                    f"but the function has {arities[fn]} parameters")
            if kind == "main":
                if fn in mains:
                    raise DirectiveError(f"duplicate main type for {print_value(fn)}")
                mains[fn] = ft
            else:
                others.setdefault(fn, []).append(ft)

    for d, loc in defuns:
        with _located(loc):
            bound = frozenset(d.params)
            guard = tr.translate(d.guard_src, d.package, bound)
            body = tr.translate(d.body_src, d.package, bound)
            main = mains.get(d.name, FnType((AV,) * len(d.params), (AV,)))
            extra = tuple(others.get(d.name, ()))
            for ft in extra:
                if not ft.narrower_than(main):
                    raise DirectiveError(
                        f"other type {ft!r} of {print_value(d.name)} is not narrower "
                        f"than its main type {main!r}")
            if len(set(extra)) != len(extra) or main in extra:
                raise DirectiveError(f"duplicate function type for {print_value(d.name)}")
        world.functions[d.name] = FunctionRecord(
            d.name, tuple(d.params), guard, body, main, extra, d.package, loc)

    for rec in world.functions.values():
        counts = _result_counts(rec.body, world)
        if counts != {len(rec.main_type.outputs)}:
            shown = " or ".join(str(c) for c in sorted(counts))
            raise DirectiveError(
                f"{print_value(rec.name)} returns {shown} values but its main type "
                f"declares {len(rec.main_type.outputs)}; multi-value functions need "
                f"a main type with one output per value", rec.location)

    for name, call_src, tpkg, loc in tests:
        with _located(loc):
            call = tr.translate(call_src, tpkg)
            if not isinstance(call, App) or call.fn not in world.functions:
                raise FrontendError(f"test {name} must call a defined function")
            if free_vars(call):
                raise FrontendError(f"test {name} is not a ground call")
        world.tests.append(TestSpec(name, call))

    if validate:
        from .validate import validate_directives
        validate_directives(world, samples=samples, seed=seed)
    return world


class _located:
    """Context attaching ``location`` to a SejcError raised without one."""

    def __init__(self, location):
        self.location = location

    def __enter__(self):
        return self

    def __exit__(self, kind, exc, tb):
        if isinstance(exc, SejcError) and exc.location is None:
            exc.location = self.location
        return False


def _top_form(world, tr, form, pkg, loc, defuns, directives, tests):
    """Process one top-level form; returns the current package afterwards."""
    if not (isinstance(form, list) and form and isinstance(form[0], SSym)):
        raise FrontendError(f"unexpected top-level form {form!r}")
    head = form[0].name
    if head == "IN-PACKAGE":
        if len(form) != 2:
            raise FrontendError("malformed in-package")
        pkg = _string_name(form[1], "package")
        if pkg not in world.packages:
            raise FrontendError(f"unknown package {pkg!r}")
    elif head in ("DEFPACKAGE", "DEFPKG"):
        _define_package(world, tr, form, pkg)
    elif head == "DEFUN":
        defuns.append((_parse_defun(tr, form, pkg), loc))
    elif head in ("FUNCTION-TYPE-MAIN", "ATJ-MAIN-FUNCTION-TYPE",
                  "FUNCTION-TYPE-OTHER", "ATJ-OTHER-FUNCTION-TYPE"):
        if len(form) != 4:
            raise DirectiveError(f"malformed {head.lower()}")
        fn = tr.symbol(form[1], pkg) if isinstance(form[1], SSym) else None
        if fn is None:
            raise DirectiveError(f"malformed {head.lower()}")
        outs = form[3]
        outputs = (_parse_type(outs),) if isinstance(outs, SSym) and outs != SSym(
            None, "NIL") else _parse_types(outs)
        kind = "main" if "MAIN" in head else "other"
        try:
            ft = FnType(_parse_types(form[2]), outputs)
        except ValueError as exc:
            raise DirectiveError(f"{head.lower()} for {print_value(fn)}: {exc}")
        directives.append((kind, fn, ft, loc))
    elif head == "DEFTEST":
        if len(form) != 3:
            raise FrontendError("malformed deftest")
        tests.append((_string_name(form[1], "test"), form[2], pkg, loc))
    else:
        raise FrontendError(f"unknown top-level form {head.lower()}")
    return pkg


def _result_counts(term, world):
    """Possible numbers of values a body returns."""
    if isinstance(term, LambdaApp):
        return _result_counts(term.body, world)
    if not isinstance(term, App):
        return {1}
    if term.fn == MV:
        return {len(term.args)}
    if term.fn == IF:
        return _result_counts(term.args[1], world) | _result_counts(term.args[2], world)
    if term.fn == RETURN_LAST:
        if term.args[0] == Quote(MBE_TAG):
            return _result_counts(term.args[1], world) | _result_counts(term.args[2], world)
        return _result_counts(term.args[-1], world)
    if term.fn in world.functions:
        return {len(world.functions[term.fn].main_type.outputs)}
    return {1}


def _define_package(world, tr, form, current):
    if len(form) < 2:
        raise FrontendError("malformed package definition")
    name = _string_name(form[1], "package")
    if name in world.packages:
        raise FrontendError(f"package {name} is already defined")
    listed = []
    if form[0].name == "DEFPKG":
        if len(form) != 3:
            raise FrontendError("malformed defpkg")
        spec = form[2]
        if isinstance(spec, list) and spec and _is_sym(spec[0], "QUOTE"):
            spec = spec[1]
        if spec != SSym(None, "NIL"):
            listed = spec if isinstance(spec, list) else None
    else:
        for clause in form[2:]:
            if not (isinstance(clause, list) and clause and _is_sym(clause[0], "IMPORT")):
                raise FrontendError(f"unsupported defpackage clause {clause!r}")
            listed.extend(clause[1:])
    if listed is None or not all(isinstance(s, SSym) for s in listed):
        raise FrontendError(f"imports of package {name} must be symbols")
    explicit = [tr.symbol(s, current) for s in listed]
    names = [s.name for s in explicit]
    if len(names) != len(set(names)):
        raise FrontendError(f"package {name} imports two symbols with the same name")
    _, defaults = _builtin_packages()
    imports = list(explicit) + [s for s in defaults if s.name not in set(names)]
    world.packages[name] = PackageDef(name, tuple(imports))


def _parse_defun(tr, form, pkg):
    if len(form) < 4 or not isinstance(form[1], SSym):
        raise FrontendError("malformed defun")
    name = tr.symbol(form[1], pkg)
    formals = [] if form[2] == SSym(None, "NIL") else form[2]
    if not isinstance(formals, list):
        raise FrontendError(f"malformed parameter list of {form[1]!r}")
    params = [tr.variable(p, pkg) for p in formals]
    if len(set(params)) != len(params):
        raise FrontendError(f"duplicate parameter in {form[1]!r}")
    guard = SSym(None, "T")
    for extra in form[3:-1]:
        if isinstance(extra, str):
            continue  # documentation string
        if not (isinstance(extra, list) and extra and _is_sym(extra[0], "DECLARE")):
            raise FrontendError(f"unexpected form in defun {form[1]!r}")
        for decl in extra[1:]:
            if isinstance(decl, list) and decl and _is_sym(decl[0], "XARGS"):
                kv = decl[1:]
                for i in range(0, len(kv) - 1, 2):
                    if _is_sym(kv[i], "GUARD") and kv[i].package == KEYWORD:
                        guard = kv[i + 1]
    return _Defun(name, params, guard, form[-1], pkg)


def load_workspace(path, **kwargs):
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    located = read_located(text, str(path))
    return parse_workspace([f for f, _ in located], locations=[loc for _, loc in located], **kwargs)


def value_from_sexpr(x, world, pkg=ACL2):
    return Translator(world, {}).datum(x, pkg)


__all__ = ["Cons", "PackageDef", "World", "close_lambda", "load_workspace",
           "parse_workspace", "translate_body"]
