"""Type analysis: annotated terms with conversions, and overload selection."""

from dataclasses import dataclass, replace
from itertools import combinations

from ..errors import MissingGlbType, TypeAnnotationError
from ..terms import IF, MV, MV_NTH, App, LambdaApp, Quote, Var
from ..types import (AB, AV, JINT, Tuple, any_lub, conversion_legal,
                     most_specific_type, type_glb, type_leq)
from ..values import NIL, print_value

NEW, OLD = "N", "O"


@dataclass(frozen=True)
class AVar:
    name: object  # Symbol
    type: object
    mark: str = None
    target: str = None


@dataclass(frozen=True)
class AQuote:
    value: object
    type: object


@dataclass(frozen=True)
class AApp:
    """Function application.

    ``form`` is one of ``call``, ``if``, ``and``, ``or``, ``mv`` and ``mv-nth``;
    ``ftype`` is the selected function type for calls.
    """

    fn: object
    args: tuple
    type: object
    form: str = "call"
    ftype: object = None


@dataclass(frozen=True)
class ALambda:
    params: tuple  # AVar binding sites
    body: object  # Conv
    args: tuple  # Conv per param
    type: object


@dataclass(frozen=True)
class Conv:
    src: object
    dst: object
    inner: object

    def __post_init__(self):
        if not conversion_legal(self.src, self.dst):
            raise TypeAnnotationError(f"no conversion from {self.src!r} to {self.dst!r}")


def _conv(inner, src, dst, what):
    if not conversion_legal(src, dst):
        raise TypeAnnotationError(f"{what}: cannot convert {src!r} to {dst!r}")
    return Conv(src, dst, inner)


def _leq(a, b):
    if isinstance(a, Tuple) or isinstance(b, Tuple):
        return False
    return type_leq(a, b)


def select_fn_type(arg_types, candidates):
    """Most specific candidate needing no down-conversion, else the first (main)."""
    fits = [ft for ft in candidates
            if len(ft.inputs) == len(arg_types)
            and all(_leq(a, t) for a, t in zip(arg_types, ft.inputs))]
    for ft in fits:
        if all(all(type_leq(a, b) for a, b in zip(ft.inputs, other.inputs))
               for other in fits):
            return ft
    return candidates[0]


def check_glb_closure(rec):
    """Raise MissingGlbType unless the declared input tuples are glb-closed."""
    declared = [ft.inputs for ft in rec.all_types]
    present = set(declared)
    for a, b in combinations(declared, 2):
        glb = tuple(type_glb(x, y) for x, y in zip(a, b))
        if None not in glb and glb not in present:
            exc = MissingGlbType(print_value(rec.name).lower(), glb)
            exc.location = rec.location
            raise exc


class Annotator:
    def __init__(self, world, guards=True, name="term"):
        self.world = world
        self.guards = guards
        self.name = name

    def fn_candidates(self, fn):
        main, others = self.world.fn_types(fn, self.guards)
        return (main,) + tuple(others)

    def root(self, term, env, required):
        aterm, t = self.ann(term, env, required)
        return _conv(aterm, t, required, self.name)

    def ann(self, term, env, required=None):
        """Annotate ``term``; returns (annotated term, its type)."""
        if isinstance(term, Var):
            if term.name not in env:
                raise TypeAnnotationError(f"{self.name}: unbound variable {term.name!r}")
            t = env[term.name]
            return AVar(term.name, t), t
        if isinstance(term, Quote):
            t = most_specific_type(term.value)
            return AQuote(term.value, t), t
        if isinstance(term, LambdaApp):
            return self._lambda(term, env, required)
        if term.fn == IF:
            return self._if(term, env, required)
        if term.fn == MV:
            return self._mv(term, env, required)
        if term.fn == MV_NTH:
            idx, src = term.args
            if (isinstance(idx, Quote) and isinstance(src, Var)
                    and isinstance(env.get(src.name), Tuple)):
                tt = env[src.name]
                if type(idx.value) is int and 0 <= idx.value < len(tt):
                    t = tt.types[idx.value]
                    index = AQuote(idx.value, most_specific_type(idx.value))
                    args = (Conv(index.type, index.type, index),
                            Conv(tt, tt, AVar(src.name, tt)))
                    return AApp(MV_NTH, args, t, "mv-nth"), t
        return self._call(term, env)

    def _call(self, term, env):
        if not self.world.is_defined(term.fn):
            raise TypeAnnotationError(f"{self.name}: undefined function {term.fn!r}")
        annotated = [self.ann(a, env) for a in term.args]
        types = [t for _, t in annotated]
        for t in types:
            if isinstance(t, Tuple):
                raise TypeAnnotationError(
                    f"{self.name}: multiple values passed as an argument of "
                    f"{print_value(term.fn).lower()}")
        ft = select_fn_type(types, self.fn_candidates(term.fn))
        where = f"{self.name}: argument of {print_value(term.fn).lower()}"
        args = tuple(_conv(a, t, req, where)
                     for (a, t), req in zip(annotated, ft.inputs))
        return AApp(term.fn, args, ft.output, "call", ft), ft.output

    def _mv(self, term, env, required):
        reqs = list(required.types) if isinstance(required, Tuple) and len(
            required) == len(term.args) else [None] * len(term.args)
        args, types = [], []
        for a, req in zip(term.args, reqs):
            aterm, t = self.ann(a, env, req)
            if isinstance(t, Tuple):
                raise TypeAnnotationError(f"{self.name}: nested multiple values")
            dst = req if req is not None and conversion_legal(t, req) else t
            args.append(Conv(t, dst, aterm))
            types.append(dst)
        tt = Tuple(tuple(types))
        return AApp(MV, tuple(args), tt, "mv"), tt

    def _lambda(self, term, env, required):
        args, params = [], []
        inner_env = dict(env)
        for p, a in zip(term.params, term.args):
            aterm, t = self.ann(a, env)
            args.append(Conv(t, t, aterm))
            params.append(AVar(p, t))
        for pv in params:
            inner_env[pv.name] = pv.type
        body, bt = self.ann(term.body, inner_env, required)
        lt = required if required is not None and conversion_legal(bt, required) else bt
        return ALambda(tuple(params), Conv(bt, lt, body), tuple(args), lt), lt

    def _test(self, term, env):
        aterm, t = self.ann(term, env)
        if t == JINT or isinstance(t, Tuple):
            raise TypeAnnotationError(f"{self.name}: if test of type {t!r}")
        dst = AB if conversion_legal(t, AB) else AV
        return Conv(t, dst, aterm), t

    def _if(self, term, env, required):
        a, b, c = term.args
        test, ta = self._test(a, env)
        same = b is a or b == a
        if same:
            then_a, tb = test.inner, ta
        else:
            then_a, tb = self.ann(b, env, required)
        else_a, tc = self.ann(c, env, required)
        # boolean and/or are recognized here so they can become && and ||
        if ta == AB and tb == AB and tc == AB:
            if same:
                return AApp(IF, (test, Conv(AB, AB, then_a), Conv(AB, AB, else_a)),
                            AB, "or"), AB
            if c == Quote(NIL):
                return AApp(IF, (test, Conv(AB, AB, then_a), Conv(AB, AB, else_a)),
                            AB, "and"), AB
        if required is not None and conversion_legal(tb, required) and conversion_legal(
                tc, required):
            t = required
        else:
            t = any_lub(tb, tc)
            if t is None:
                raise TypeAnnotationError(
                    f"{self.name}: if branches of types {tb!r} and {tc!r} have no common type")
        args = (test, _conv(then_a, tb, t, self.name), _conv(else_a, tc, t, self.name))
        return AApp(IF, args, t, "if"), t


def annotate_function(rec, ft, world, guards=True, body=None):
    """Annotate ``body`` (default: the record's body) against function type ``ft``."""
    env = dict(zip(rec.params, ft.inputs))
    name = print_value(rec.name).lower()
    return Annotator(world, guards, name).root(
        rec.body if body is None else body, env, ft.output)


def annotate(term, rec, world, guards=True):
    main, _ = world.fn_types(rec.name, guards)
    return annotate_function(rec, main, world, guards, term)


# ---------------------------------------------------------------------------

def erase(a):
    """Strip annotations, giving back the plain term."""
    if isinstance(a, Conv):
        return erase(a.inner)
    if isinstance(a, AVar):
        return Var(a.name)
    if isinstance(a, AQuote):
        return Quote(a.value)
    if isinstance(a, AApp):
        return App(a.fn, tuple(erase(x) for x in a.args))
    return LambdaApp(tuple(p.name for p in a.params), erase(a.body),
                     tuple(erase(x) for x in a.args))


def convs(a):
    """Every Conv node in an annotated term."""
    stack, out = [a], []
    while stack:
        x = stack.pop()
        if isinstance(x, Conv):
            out.append(x)
            stack.append(x.inner)
        elif isinstance(x, AApp):
            stack.extend(x.args)
        elif isinstance(x, ALambda):
            stack.extend(x.args)
            stack.append(x.body)
    return out


def _short(t):
    return repr(t)


def render(a):
    """Bracket notation: ``([AV>AN] [AV]x)`` and ``(let (([N][AI]x ...)) ...)``."""
    if isinstance(a, Conv):
        return f"([{_short(a.src)}>{_short(a.dst)}] {render(a.inner)})"
    if isinstance(a, AVar):
        mark = f"[{a.mark}]" if a.mark else ""
        return f"{mark}[{_short(a.type)}]{a.name.name.lower()}"
    if isinstance(a, AQuote):
        return "'" + print_value(a.value)
    if isinstance(a, AApp):
        parts = [a.fn.name.lower()] + [render(x) for x in a.args]
        return "(" + " ".join(parts) + ")"
    bindings = " ".join(f"({render(p)} {render(x)})" for p, x in zip(a.params, a.args))
    return f"(let ({bindings}) {render(a.body)})"


__all__ = ["AApp", "ALambda", "AQuote", "AVar", "Annotator", "Conv", "NEW", "OLD",
           "annotate", "annotate_function", "check_glb_closure", "convs", "erase",
           "render", "replace", "select_fn_type"]
