"""Java-to-Java passes run after proper translation."""

from dataclasses import replace

from .java.ast import (Assign, Binary, BoolLit, Call, Cast, Continue, ExprStmt,
                       FieldAccess, If, JField, LocalDecl, MethodCall, Name, New,
                       Return, Unary, While, names_read, stmt_exprs, sub_exprs,
                       walk_stmts)


def _is_tmp(name):
    return name.startswith("$tmp")


# -- fold_returns


def fold_returns(m):
    return replace(m, body=_fold(m.body))


def _fold(stmts):
    stmts = list(stmts)
    n = len(stmts)
    if n >= 3:
        decl, cond, ret = stmts[-3:]
        if (isinstance(decl, LocalDecl) and decl.init is None and _is_tmp(decl.name)
                and isinstance(cond, If) and cond.orelse is not None
                and isinstance(ret, Return) and ret.expr == Name(decl.name)):
            tmp = decl.name
            then = _retarget(cond.then, tmp)
            other = _retarget(cond.orelse, tmp)
            if then is not None and other is not None:
                folded = If(cond.test, _fold(then), _fold(other))
                return tuple(stmts[:-3]) + (folded,)
    return tuple(stmts)


def _retarget(branch, tmp):
    # a branch "...; $tmp = e" whose prefix never mentions $tmp becomes "...; return e"
    if not branch:
        return None
    last = branch[-1]
    if not (isinstance(last, Assign) and last.target == tmp):
        return None
    prefix = branch[:-1]
    if tmp in names_read(prefix) or tmp in names_read((ExprStmt(last.expr),)):
        return None
    if any(isinstance(s, (Assign, LocalDecl)) and _target(s) == tmp for s in walk_stmts(prefix)):
        return None
    return tuple(prefix) + (Return(last.expr),)


def _target(s):
    return s.name if isinstance(s, LocalDecl) else s.target


# -- eliminate_tail_recursion


def _is_self_call(e, m):
    return isinstance(e, Call) and e.name == m.name and e.sig == m.param_types


def _self_calls(m):
    tail, other = 0, 0
    for s in walk_stmts(m.body):
        exprs = stmt_exprs(s)
        for top in exprs:
            for e in sub_exprs(top):
                if _is_self_call(e, m):
                    if isinstance(s, Return) and e is s.expr:
                        tail += 1
                    else:
                        other += 1
    return tail, other


def eliminate_tail_recursion(m):
    tail, other = _self_calls(m)
    if tail == 0 or other > 0:
        return m
    if len(m.body) == 1 and isinstance(m.body[0], While):
        return m
    counter = [0]
    body = _replace_tail_calls(m.body, m, counter)
    return replace(m, body=(While(BoolLit(True), body),))


def _replace_tail_calls(stmts, m, counter):
    out = []
    for s in stmts:
        if isinstance(s, Return) and _is_self_call(s.expr, m):
            out += parallel_assign(m.params, s.expr.args, counter)
            out.append(Continue())
        elif isinstance(s, If):
            orelse = None if s.orelse is None else _replace_tail_calls(s.orelse, m, counter)
            out.append(If(s.test, _replace_tail_calls(s.then, m, counter), orelse))
        else:
            out.append(s)
    return tuple(out)


def parallel_assign(params, exprs, counter=None):
    """Sequential statements performing ``params := exprs`` simultaneously.

    An assignment must precede every assignment whose target it reads; cycles
    are broken by saving one target in a fresh ``$paraK`` temporary.
    """
    counter = [0] if counter is None else counter
    pending = {}
    for (t, p), e in zip(params, exprs):
        if e != Name(p):
            pending[p] = (t, e)
    reads = {p: names_read((ExprStmt(e),)) for p, (_, e) in pending.items()}
    out = []
    while pending:
        ready = [p for p in pending
                 if not any(p in reads[q] for q in pending if q != p)]
        if ready:
            p = ready[0]
            out.append(Assign(p, pending.pop(p)[1]))
            continue
        p = next(iter(pending))
        counter[0] += 1
        tmp = f"$para{counter[0]}"
        out.append(LocalDecl(pending[p][0], tmp, Name(p)))
        for q in pending:
            if q != p:
                t, e = pending[q]
                pending[q] = (t, substitute(e, p, tmp))
                reads[q] = names_read((ExprStmt(pending[q][1]),))
    return out


def substitute(e, old, new):
    """Replace variable ``old`` by ``new`` in expression ``e``."""
    if isinstance(e, Name):
        return Name(new) if e.name == old else e
    if isinstance(e, Call):
        return Call(e.name, tuple(substitute(a, old, new) for a in e.args), e.sig)
    if isinstance(e, New):
        return New(e.cls, tuple(substitute(a, old, new) for a in e.args))
    if isinstance(e, MethodCall):
        return MethodCall(substitute(e.target, old, new), e.name,
                          tuple(substitute(a, old, new) for a in e.args))
    if isinstance(e, Binary):
        return Binary(e.op, substitute(e.left, old, new), substitute(e.right, old, new))
    if isinstance(e, Unary):
        return Unary(e.op, substitute(e.operand, old, new))
    if isinstance(e, Cast):
        return Cast(e.type, substitute(e.operand, old, new))
    if isinstance(e, FieldAccess):
        return FieldAccess(substitute(e.target, old, new), e.field)
    return e


# -- lift_loop_test


def negate(e):
    if isinstance(e, Unary) and e.op == "!":
        return e.operand
    return Unary("!", e)


def _always_exits(stmts):
    # runs to a final return and never continues the loop
    if not stmts or not isinstance(stmts[-1], Return):
        return False
    return not any(isinstance(s, Continue) for s in walk_stmts(stmts))


def lift_loop_test(m):
    if len(m.body) != 1 or not isinstance(m.body[0], While):
        return m
    loop = m.body[0]
    if loop.test != BoolLit(True) or len(loop.body) != 1 or not isinstance(loop.body[0], If):
        return m
    cond = loop.body[0]
    if cond.orelse is None:
        return m
    if _always_exits(cond.then):
        return replace(m, body=(While(negate(cond.test), cond.orelse),) + tuple(cond.then))
    if _always_exits(cond.orelse):
        return replace(m, body=(While(cond.test, cond.then),) + tuple(cond.orelse))
    return m


# -- drop_trailing_continue


def drop_trailing_continue(m):
    return replace(m, body=_visit_loops(m.body))


def _visit_loops(stmts):
    out = []
    for s in stmts:
        if isinstance(s, While):
            out.append(While(s.test, _drop_tail(_visit_loops(s.body))))
        elif isinstance(s, If):
            orelse = None if s.orelse is None else _visit_loops(s.orelse)
            out.append(If(s.test, _visit_loops(s.then), orelse))
        else:
            out.append(s)
    return tuple(out)


def _drop_tail(stmts):
    if not stmts:
        return stmts
    last = stmts[-1]
    if isinstance(last, Continue):
        return _drop_tail(stmts[:-1])
    if isinstance(last, If):
        orelse = None if last.orelse is None else _drop_tail(last.orelse)
        return tuple(stmts[:-1]) + (If(last.test, _drop_tail(last.then), orelse),)
    return stmts


# -- cache_nullary

CACHE_PREFIX = "$cached_"


def _calls_nothing(e):
    return not any(isinstance(x, (Call, MethodCall, New)) for x in sub_exprs(e))


def cache_nullary(c):
    fields = list(c.fields)
    taken = {f.name for f in fields}
    methods = []
    for m in c.methods:
        if (not m.params and len(m.body) == 1 and isinstance(m.body[0], Return)
                and m.body[0].expr is not None and _calls_nothing(m.body[0].expr)
                and not (isinstance(m.body[0].expr, Name)
                         and m.body[0].expr.name.startswith(CACHE_PREFIX))):
            name = CACHE_PREFIX + m.name
            k = 1
            while name in taken:
                name = f"{CACHE_PREFIX}{m.name}${k}"
                k += 1
            taken.add(name)
            fields.append(JField(("private", "static", "final"), m.ret, name, m.body[0].expr))
            m = replace(m, body=(Return(Name(name)),))
        methods.append(m)
    return replace(c, fields=tuple(fields), methods=tuple(methods))


METHOD_PASSES = (fold_returns, eliminate_tail_recursion, lift_loop_test, drop_trailing_continue)


def optimize_method(m, passes=METHOD_PASSES):
    for p in passes:
        m = p(m)
    return m


def optimize_class(c, passes=METHOD_PASSES, cache=True):
    c = replace(c, methods=tuple(optimize_method(m, passes) for m in c.methods))
    return cache_nullary(c) if cache else c


def optimize_unit(unit, passes=METHOD_PASSES, cache=True):
    """Apply the passes to every package class of the unit (MV classes untouched)."""
    main = unit.main_class
    # MV classes are the only final nested classes
    nested = tuple(c if "final" in c.modifiers else optimize_class(c, passes, cache)
                   for c in main.nested)
    return replace(unit, main_class=replace(main, nested=nested))
