"""Random well-typed workspaces and ground calls for differential testing.

Terms are generated against a semantic type for every variable, which may be
narrower than the type the annotator can see (for instance inside the true
branch of ``(if (integerp v) ...)``).  Every native call receives arguments
satisfying its guard, and every declared function type holds by construction.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import EvalError
from .interpreter import Interpreter
from .reader import read_sexprs
from .sampling import make_rng
from .types import (AB, ACH, ACONS, AI, AN, AR, AS, AV, AY, JINT, any_lub,
                    type_leq)
from .values import (ACL2, INT_MAX, INT_MIN, NIL, T, Char, Cons, JInt, Symbol,
                     keyword, make_list, print_value, values_equal)

MAX_DEPTH = 6
SIMPLE = (AV, AN, AR, AI, ACONS, AY, AB, ACH, AS)
RECOGNIZER = {AI: "integerp", AR: "rationalp", AN: "acl2-numberp", ACONS: "consp",
              AY: "symbolp", AB: "booleanp", ACH: "characterp", AS: "stringp",
              JINT: "int-valuep"}
_NAMES = ("x", "y", "z", "u", "v", "w")
_SYMS = (T, NIL, Symbol(ACL2, "FOO"), Symbol(ACL2, "BAR"), keyword("KEY"))
REC_LIMIT = 50


@dataclass
class FnInfo:
    name: str
    params: list  # (name, semantic type)
    declared: tuple = None  # declared input types, None when untyped
    outputs: tuple = ()  # semantic output types
    kind: str = "plain"  # plain | mv | rec
    package: str = "ACL2"
    others: list = field(default_factory=list)

    @property
    def typed(self):
        return self.declared is not None


def _const_text(v, pkg):
    if isinstance(v, (Symbol, Cons)):
        return "'" + print_value(v, pkg)
    return print_value(v, pkg)


class WorkspaceGen:
    def __init__(self, rng, max_depth=MAX_DEPTH):
        self.rng = rng
        self.max_depth = max_depth
        self.fns = []
        self.forms = []
        self.pkg = ACL2
        self.imported = set()
        self.refined = set()  # variables narrowed by a recognizer test
        self.counter = 0

    # -- leaves

    def const(self, t):
        r = self.rng
        if t is AV:
            t = r.choice((AI, AR, AB, AY, ACONS, ACH, AS))
        if t is AI:
            return r.randint(-20, 20), AI
        if t in (AR, AN):
            if r.random() < 0.5:
                return r.randint(-20, 20), AI
            q = Fraction(r.randint(-20, 20), r.randint(2, 7))
            return (q if q.denominator != 1 else q.numerator), AR
        if t is AB:
            return r.choice((T, NIL)), AB
        if t is AY:
            v = r.choice(_SYMS)
            return v, (AB if v in (T, NIL) else AY)
        if t is ACONS:
            items = [self.const(r.choice((AI, AY, ACH)))[0] for _ in range(r.randint(1, 3))]
            return make_list(items), ACONS
        if t is ACH:
            return Char(r.choice((r.randint(97, 122), 32, 48))), ACH
        if t is AS:
            return "".join(r.choice("abc xyz") for _ in range(r.randint(0, 4))), AS
        raise ValueError(t)

    def leaf(self, t, env):
        vars_ = [v for v, s in env.items() if type_leq(s, t)]
        if t is JINT:
            if vars_ and self.rng.random() < 0.7:
                v = self.rng.choice(vars_)
                return v, JINT
            k = self.rng.choice((0, 1, -1, 7, 100, INT_MAX, INT_MIN, self.rng.randint(-50, 50)))
            return f"(int-value {k})", JINT
        if vars_ and self.rng.random() < 0.6:
            v = self.rng.choice(vars_)
            return v, env[v]
        v, s = self.const(t)
        return _const_text(v, self.pkg), s

    # -- terms

    def expr(self, t, env, depth):
        if depth <= 0 or self.rng.random() < 0.25:
            return self.leaf(t, env)
        options = self._options(t, env)
        return self.rng.choice(options)(t, env, depth - 1)

    def _options(self, t, env):
        opts = [self._if, self._let]
        if t is JINT:
            return opts + [self._int_op, self._int_op]
        if type_leq(AI, t):
            opts += [self._arith, self._arith]
        if type_leq(AI, t):
            opts.append(self._int_fn)
        if type_leq(AB, t):
            opts += [self._pred, self._pred]
        if type_leq(ACONS, t):
            opts.append(self._cons)
        if t is AV:
            opts.append(self._carcdr)
        if type_leq(ACH, t):
            opts.append(self._code_char)
        opts += [self._mbe, self._cond, self._refine, self._progn]
        if any(f.kind != "mv" and type_leq(f.outputs[0], t) for f in self.fns):
            opts += [self._call, self._call]
        if any(f.kind == "mv" for f in self.fns):
            opts.append(self._mv_let)
        if any(type_leq(s, AI) for s in env.values()):
            opts.append(self._mbt)
        return opts

    def _if(self, t, env, d):
        test, _ = self.expr(self.rng.choice((AB, AB, AV)), env, d)
        a, s1 = self.expr(t, env, d)
        b, s2 = self.expr(t, env, d)
        return f"(if {test} {a} {b})", any_lub(s1, s2)

    def _fresh(self, env):
        if env and self.rng.random() < 0.4:
            return self.rng.choice(list(env))
        self.counter += 1
        return f"{self.rng.choice(_NAMES)}{self.counter}"

    def _let(self, t, env, d):
        n = self.rng.randint(1, 2)
        star = n > 1 and self.rng.random() < 0.5
        binds, inner = [], dict(env)
        for _ in range(n):
            u = self.rng.choice(SIMPLE + (JINT,) if self.rng.random() < 0.1 else SIMPLE)
            e, s = self.expr(u, inner if star else env, d)
            v = self._fresh(env)
            while any(b[0] == v for b in binds):
                v = self._fresh({})
            binds.append((v, e))
            inner[v] = s
        body, s = self.expr(t, inner, d)
        if not star and self.rng.random() < 0.2:
            formals = " ".join(v for v, _ in binds)
            actuals = " ".join(e for _, e in binds)
            return f"((lambda ({formals}) {body}) {actuals})", s
        text = " ".join(f"({v} {e})" for v, e in binds)
        return f"({'let*' if star else 'let'} ({text}) {body})", s

    def _progn(self, t, env, d):
        side = [self.expr(AV, env, d)[0] for _ in range(self.rng.randint(1, 2))]
        main, s = self.expr(t, env, d)
        if len(side) == 1 and self.rng.random() < 0.5:
            return f"(prog2$ {side[0]} {main})", s
        return f"(progn$ {' '.join(side)} {main})", s

    def _arith(self, t, env, d):
        s = self.rng.choice([x for x in (AI, AR, AN) if type_leq(x, t)])
        op = self.rng.choice(("+", "*", "-", "+"))
        if op == "-" and self.rng.random() < 0.5:
            a, _ = self.expr(s, env, d)
            return f"(- {a})", s
        args = [self.expr(s, env, d)[0] for _ in range(self.rng.randint(2, 3 if op != "-" else 2))]
        return f"({op} {' '.join(args)})", s

    def _int_fn(self, t, env, d):
        if self.rng.random() < 0.5:
            x, _ = self.expr(AV, env, d)
            return f"(len {x})", AI
        c, _ = self.expr(ACH, env, d)
        return f"(char-code {c})", AI

    def _int_op(self, t, env, d):
        op = self.rng.choice(("int-add", "int-mul"))
        a, _ = self.expr(JINT, env, d)
        b, _ = self.expr(JINT, env, d)
        return f"({op} {a} {b})", JINT

    def _pred(self, t, env, d):
        r = self.rng.random()
        if r < 0.3:
            p = self.rng.choice(list(RECOGNIZER.values())[:-1] + ["atom", "endp", "natp", "posp"])
            x, _ = self.expr(AV, env, d)
            return f"({p} {x})", AB
        if r < 0.5:
            a, _ = self.expr(AV, env, d)
            b, _ = self.expr(AV, env, d)
            return f"(equal {a} {b})", AB
        if r < 0.65:
            a, _ = self.expr(AR, env, d)
            b, _ = self.expr(AR, env, d)
            return f"({self.rng.choice(('<', '<=', '>', '>='))} {a} {b})", AB
        if r < 0.75:
            n, _ = self.expr(AI, env, d)
            return f"(zp {n})", AB
        if r < 0.85:
            p, _ = self.expr(AB, env, d)
            return f"(not {p})", AB
        ps = [self.expr(AB, env, d)[0] for _ in range(self.rng.randint(2, 3))]
        return f"({self.rng.choice(('and', 'or'))} {' '.join(ps)})", AB

    def _cons(self, t, env, d):
        if self.rng.random() < 0.3:
            items = [self.expr(AV, env, d)[0] for _ in range(self.rng.randint(1, 3))]
            return f"(list {' '.join(items)})", ACONS
        a, _ = self.expr(AV, env, d)
        b, _ = self.expr(AV, env, d)
        return f"(cons {a} {b})", ACONS

    def _carcdr(self, t, env, d):
        x, _ = self.expr(AV, env, d)
        return f"({self.rng.choice(('car', 'cdr'))} {x})", AV

    def _code_char(self, t, env, d):
        n, _ = self.expr(AI, env, d)
        return f"(code-char {n})", ACH

    def _mbe(self, t, env, d):
        logic, s = self.expr(t, env, d)
        r = self.rng.random()
        if s in (AI, AR, AN) and r < 0.5:
            exe = f"(+ 0 {logic})"
        elif s is AB and r < 0.5:
            exe = f"(if {logic} t nil)"
        else:
            v = self._fresh({})
            exe = f"(let (({v} {logic})) {v})"
        return f"(mbe :logic {logic} :exec {exe})", s

    def _mbt(self, t, env, d):
        v = self.rng.choice([v for v, s in env.items() if type_leq(s, AI)])
        a, s1 = self.expr(t, env, d)
        b, s2 = self.expr(t, env, d)
        return f"(if (mbt (integerp {v})) {a} {b})", any_lub(s1, s2)

    def _cond(self, t, env, d):
        clauses, s = [], None
        for _ in range(self.rng.randint(1, 2)):
            test, _ = self.expr(AB, env, d)
            e, s1 = self.expr(t, env, d)
            clauses.append(f"({test} {e})")
            s = s1 if s is None else any_lub(s, s1)
        e, s1 = self.expr(t, env, d)
        clauses.append(f"(t {e})")
        return f"(cond {' '.join(clauses)})", any_lub(s, s1)

    def _refine(self, t, env, d):
        wide = [v for v, s in env.items() if s in (AV, AN, AR, AY)]
        if not wide:
            return self._if(t, env, d)
        v = self.rng.choice(wide)
        self.refined.add(v)
        narrower = [n for n in (AI, AR, AN, ACONS, AY, AB, ACH, AS)
                    if type_leq(n, env[v]) and n != env[v]]
        n = self.rng.choice(narrower)
        a, s1 = self.expr(t, {**env, v: n}, d)
        b, s2 = self.expr(t, env, d)
        return f"(if ({RECOGNIZER[n]} {v}) {a} {b})", any_lub(s1, s2)

    def _args(self, fn, env, d):
        out = []
        for i, (_, s) in enumerate(fn.params):
            if fn.kind == "rec" and i == 0:
                out.append(str(self.rng.randint(0, 8)))
            else:
                out.append(self.expr(s, env, max(d - 1, 0))[0])
        return " ".join(out)

    def _callee_name(self, fn):
        if fn.package == self.pkg or fn.name in self.imported:
            return fn.name
        return f"{fn.package.lower()}::{fn.name}"

    def _call(self, t, env, d):
        fn = self.rng.choice([f for f in self.fns if f.kind != "mv" and type_leq(f.outputs[0], t)])
        return f"({self._callee_name(fn)} {self._args(fn, env, d)})".replace(" )", ")"), fn.outputs[0]

    def _mv_let(self, t, env, d):
        fn = self.rng.choice([f for f in self.fns if f.kind == "mv"])
        a, b = self._fresh({}), self._fresh({})
        body, s = self.expr(t, {**env, a: fn.outputs[0], b: fn.outputs[1]}, d)
        call = f"({self._callee_name(fn)} {self._args(fn, env, d)})".replace(" )", ")")
        return f"(mv-let ({a} {b}) {call} {body})", s

    # -- functions

    def _new_name(self):
        return f"f{len(self.fns) + 1}"

    def _params(self, n):
        types = [self.rng.choice(SIMPLE + (JINT,)) if self.rng.random() < 0.9 else JINT
                 for _ in range(n)]
        return [(f"{_NAMES[i]}", t) for i, t in enumerate(types)]

    @staticmethod
    def _guard(params, extra=()):
        parts = [f"({RECOGNIZER[t]} {p})" for p, t in params if t is not AV] + list(extra)
        if not parts:
            return ""
        g = parts[0] if len(parts) == 1 else f"(and {' '.join(parts)})"
        return f"\n  (declare (xargs :guard {g}))"

    def _directive(self, fn, outputs):
        ins = " ".join(t.keyword for t in fn.declared)
        outs = " ".join(t.keyword for t in outputs)
        self.forms.append(f"(function-type-main {fn.name} ({ins}) ({outs}))")
        for other in fn.others:
            self.forms.append(
                f"(function-type-other {fn.name} ({' '.join(t.keyword for t in other)}) ({outs}))")

    def _declare(self, fn, outputs, needs_type):
        if needs_type or self.rng.random() < 0.7:
            # declared inputs may be wider than the guard types
            fn.declared = tuple(t if t is JINT or self.rng.random() < 0.8 else AV
                                for _, t in fn.params)
            declared_out = tuple(s if s is JINT or self.rng.random() < 0.8 else AV
                                 for s in outputs)
            if fn.kind != "rec" and fn.params and self.rng.random() < 0.3:
                self._add_others(fn)
            self._directive(fn, declared_out)

    def _add_others(self, fn):
        # a chain of narrower input tuples is closed under glb with the main
        # type; staying below the guard types keeps the declared output valid
        current = [s for _, s in fn.params]
        if tuple(current) != fn.declared:
            fn.others.append(tuple(current))
        for _ in range(self.rng.randint(1, 2) - len(fn.others)):
            # a refined parameter may not be narrowed: its refined branch
            # could become ill-typed rather than dead
            idx = [i for i, t in enumerate(current)
                   if _narrower(t) and fn.params[i][0] not in self.refined]
            if not idx:
                break
            i = self.rng.choice(idx)
            current[i] = self.rng.choice(_narrower(current[i]))
            fn.others.append(tuple(current))

    def plain_function(self):
        self.refined = set()
        fn = FnInfo(self._new_name(), self._params(self.rng.randint(0, 3)), package=self.pkg)
        t = self.rng.choice(SIMPLE + (JINT,) if any(s is JINT for _, s in fn.params) else SIMPLE)
        body, s = self.expr(t, dict(fn.params), self.max_depth)
        fn.outputs = (s,)
        needs = s is JINT or any(p is JINT for _, p in fn.params)
        self._emit(fn, body)
        self._declare(fn, fn.outputs, needs)
        self.fns.append(fn)

    def mv_function(self):
        fn = FnInfo(self._new_name(), self._params(self.rng.randint(1, 2)), kind="mv",
                    package=self.pkg)
        env = dict(fn.params)
        t1, t2 = self.rng.choice(SIMPLE), self.rng.choice(SIMPLE)
        d = self.max_depth - 2
        a, s1 = self.expr(t1, env, d)
        b, s2 = self.expr(t2, env, d)
        if self.rng.random() < 0.4:
            test, _ = self.expr(AB, env, 2)
            c, s3 = self.expr(t1, env, d)
            e, s4 = self.expr(t2, env, d)
            body = f"(if {test} (mv {a} {b}) (mv {c} {e}))"
            s1, s2 = any_lub(s1, s3), any_lub(s2, s4)
        else:
            body = f"(mv {a} {b})"
        fn.outputs = (s1, s2)
        self._emit(fn, body)
        self._declare(fn, fn.outputs, True)
        self.fns.append(fn)

    def rec_function(self):
        name = self._new_name()
        tail = self.rng.random() < 0.6
        acc_t = self.rng.choice((AI, AR, AN, AV, ACONS))
        if tail:
            fn = FnInfo(name, [("n", AI), ("acc", acc_t)], kind="rec", package=self.pkg)
            # the accumulator is never multiplied by itself, so values stay small
            if acc_t in (AI, AR, AN):
                step = f"(+ acc {self.expr(acc_t, {'n': AI}, 3)[0]})"
            else:
                step = f"(cons {self.expr(AV, {'n': AI}, 3)[0]} acc)"
            body = f"(if (zp n) acc ({name} (+ -1 n) {step}))"
            fn.outputs = (acc_t,)
        else:
            fn = FnInfo(name, [("n", AI)], kind="rec", package=self.pkg)
            if self.rng.random() < 0.5:
                base, _ = self.expr(AI, {"n": AI}, 1)
                body = f"(if (zp n) {base} (+ n ({name} (1- n))))"
                fn.outputs = (AI,)
            else:
                item, _ = self.expr(AV, {"n": AI}, 2)
                body = f"(if (zp n) nil (cons {item} ({name} (1- n))))"
                fn.outputs = (AV,)
        self._emit(fn, body, extra=(f"(< n {REC_LIMIT})",))
        self._declare(fn, fn.outputs, True)
        self.fns.append(fn)

    def _emit(self, fn, body, extra=()):
        formals = " ".join(p for p, _ in fn.params)
        guard = self._guard(fn.params, extra)
        self.forms.append(f"(defun {fn.name} ({formals}){guard}\n  {body})")

    def other_package(self):
        imported = self.rng.choice([f for f in self.fns if f.package == ACL2])
        self.forms.append(f'(defpkg "PK" \'(acl2::{imported.name}))')
        self.forms.append('(in-package "PK")')
        self.pkg = "PK"
        self.imported = {imported.name}
        for _ in range(self.rng.randint(1, 2)):
            self.plain_function()

    def workspace(self):
        for _ in range(self.rng.randint(1, 4)):
            r = self.rng.random()
            if r < 0.15:
                self.mv_function()
            elif r < 0.35:
                self.rec_function()
            else:
                self.plain_function()
        if self.rng.random() < 0.25:
            self.other_package()
        return "\n".join(self.forms) + "\n"


def _narrower(t):
    return [n for n in SIMPLE if n is not t and type_leq(n, t)]


# -- calls


def _sample(t, rng, rec_bound=False):
    if rec_bound:
        return rng.randint(0, REC_LIMIT - 1)
    if t is AV:
        t = rng.choice((AI, AR, AB, AY, ACONS, ACH, AS))
    if t is JINT:
        return JInt(rng.choice((0, 1, -1, 3, INT_MAX, INT_MIN, rng.randint(-10**6, 10**6))))
    if t is ACONS:
        return Cons(_sample(AV, rng), _sample(rng.choice((AI, AY, AS)), rng))
    if t in (AI, AR, AN):
        k = rng.choice((rng.randint(-9, 9), rng.randint(-10**12, 10**12)))
        if t is not AI and rng.random() < 0.4:
            q = Fraction(k, rng.randint(2, 9))
            return q.numerator if q.denominator == 1 else q
        return k
    return WorkspaceGen(rng).const(t)[0]


@dataclass
class FuzzCase:
    source: str
    fns: list
    calls: list  # (Symbol, args)


def fn_symbol(info):
    return Symbol(info.package, info.name.upper())


def generate_case(seed, calls=10, max_depth=MAX_DEPTH):
    rng = make_rng(seed)
    gen = WorkspaceGen(rng, max_depth)
    source = gen.workspace()
    out = []
    for _ in range(calls):
        fn = rng.choice(gen.fns)
        args = [_sample(t, rng, fn.kind == "rec" and i == 0) for i, (_, t) in enumerate(fn.params)]
        out.append((fn_symbol(fn), args))
    return FuzzCase(source, gen.fns, out)


def guard_ok(world, fn, args):
    rec = world.functions[fn]
    try:
        return Interpreter(world, 100_000).eval(rec.guard, dict(zip(rec.params, args))) != NIL
    except EvalError:
        return False


def parse_case(case, validate=True, samples=20):
    from .frontend import parse_workspace
    return parse_workspace(read_sexprs(case.source), validate=validate, samples=samples)


def results_equal(a, b):
    if isinstance(a, tuple) or isinstance(b, tuple):
        return (isinstance(a, tuple) and isinstance(b, tuple) and len(a) == len(b)
                and all(values_equal(x, y) for x, y in zip(a, b)))
    return values_equal(a, b)


@dataclass
class CaseReport:
    seed: int
    agree: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)  # (guards, fn, args, expected, got)


def run_case(seed, calls=10, modes=(True, False), post=True, max_steps=100_000):
    """Compile a random workspace and compare every call against the interpreter.

    Calls whose guard fails, or whose oracle run errs or exceeds ``max_steps``,
    are skipped.  Target-side errors count as disagreements.
    """
    from .interpreter import eval_call
    from .pipeline import compile_world
    from .target import Runtime, call_with_values

    case = generate_case(seed, calls)
    report = CaseReport(seed)
    world = parse_case(case)
    runtimes = [(g, Runtime(compile_world(world, g, post=post))) for g in modes]
    for fn, args in case.calls:
        if not guard_ok(world, fn, args):
            report.skipped += 1
            continue
        try:
            expected = eval_call(world, fn, args, max_steps)
        except EvalError:
            report.skipped += 1
            continue
        for g, rt in runtimes:
            try:
                got = call_with_values(rt, fn, args)
            except Exception as exc:  # any target failure is a disagreement
                got = exc
            if results_equal(expected, got):
                report.agree += 1
            else:
                report.failures.append((g, fn, args, expected, got))
    return report


def _pre_pass_prefixes(guards):
    from .pretrans.simplify import (drop_trivial_bindings, drop_unused_bindings, elide_progn,
                                    resolve_mbe, simplify_if_t)
    chain = [lambda t: resolve_mbe(t, guards), simplify_if_t, elide_progn,
             drop_unused_bindings, drop_trivial_bindings]
    prefixes = []
    for k in range(1, len(chain) + 1):
        def run(t, passes=tuple(chain[:k])):
            for p in passes:
                t = p(t)
            return t
        prefixes.append(run)
    return prefixes


def pass_preservation(seed, calls=10, max_steps=100_000):
    """Check every prefix of the pre and post pass chains on one random workspace.

    Pre-pass prefixes are applied to all bodies and compared through the
    interpreter; post-pass prefixes are compared through the target evaluator.
    """
    from .pipeline import compile_world
    from .posttrans import METHOD_PASSES, optimize_unit
    from .target import Runtime, call_with_values
    from .translate import build_unit

    case = generate_case(seed, calls)
    report = CaseReport(seed)
    world = parse_case(case)
    pre = [(g, {fn: prefix(rec.body) for fn, rec in world.functions.items()})
           for g in (True, False) for prefix in _pre_pass_prefixes(g)]
    post = []
    for g in (True, False):
        base = build_unit(world, g)
        post += [(g, Runtime(optimize_unit(base, METHOD_PASSES[:k], cache=k == len(METHOD_PASSES))))
                 for k in range(len(METHOD_PASSES) + 1)]
    post.append((True, Runtime(compile_world(world, True))))
    for fn, args in case.calls:
        if not guard_ok(world, fn, args):
            report.skipped += 1
            continue
        try:
            expected = Interpreter(world, max_steps).call(fn, args)
        except EvalError:
            report.skipped += 1
            continue
        results = []
        for g, bodies in pre:
            try:
                results.append((g, Interpreter(world, max_steps * 2, bodies).call(fn, args)))
            except EvalError as exc:
                results.append((g, exc))
        for g, rt in post:
            try:
                results.append((g, call_with_values(rt, fn, args)))
            except Exception as exc:  # any target failure is a disagreement
                results.append((g, exc))
        for g, got in results:
            if results_equal(expected, got):
                report.agree += 1
            else:
                report.failures.append((g, fn, args, expected, got))
    return report


__all__ = ["CaseReport", "FuzzCase", "WorkspaceGen", "generate_case", "guard_ok", "parse_case",
           "pass_preservation", "results_equal", "run_case"]
