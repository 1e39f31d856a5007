"""Variable reuse marking and renaming apart.

A let-bound variable is marked old (reused) when the binding that lexically
encloses it has the same name and type and the enclosing variable is not read
again after the rebinding.  Liveness is computed in Java evaluation order:
statements of every argument of a call run before any argument expression is
evaluated, so sibling arguments keep each other's variables alive.
"""

from dataclasses import replace

from ..terms import IF
from .annotate import NEW, OLD, AApp, ALambda, AQuote, AVar, Conv
from .names import Kind, fresh_name, translate_name


def _free(a, bound=frozenset(), out=None):
    """Free variable names of an annotated term."""
    out = set() if out is None else out
    if isinstance(a, Conv):
        _free(a.inner, bound, out)
    elif isinstance(a, AVar):
        if a.name not in bound:
            out.add(a.name)
    elif isinstance(a, AApp):
        for x in a.args:
            _free(x, bound, out)
    elif isinstance(a, ALambda):
        for x in a.args:
            _free(x, bound, out)
        _free(a.body, bound | {p.name for p in a.params}, out)
    return out


def _binders(a, out=None):
    out = set() if out is None else out
    stack = [a]
    while stack:
        x = stack.pop()
        if isinstance(x, Conv):
            stack.append(x.inner)
        elif isinstance(x, AApp):
            stack.extend(x.args)
        elif isinstance(x, ALambda):
            out.update(p.name for p in x.params)
            stack.extend(x.args)
            stack.append(x.body)
    return out


def _reads(a):
    # names whose Java variables the term may read, including its own bindings
    return _free(a) | _binders(a)


def mark_reuse(a, params=()):
    """Mark every let binding (and its occurrences) as new or old.

    ``params`` are (name, type) pairs of the function parameters.
    """
    scope = {name: (t, None) for name, t in params}
    return _mark(a, scope, frozenset())


def _mark(a, scope, live):
    if isinstance(a, Conv):
        return replace(a, inner=_mark(a.inner, scope, live))
    if isinstance(a, AVar):
        entry = scope.get(a.name)
        return replace(a, mark=entry[1]) if entry and entry[1] else a
    if isinstance(a, AQuote):
        return a
    if isinstance(a, AApp):
        args = a.args
        if a.fn == IF and a.form in ("if", "and", "or"):
            test, then, other = args
            if a.form == "if":
                test_live = live | _free(then) | _free(other)
                return replace(a, args=(_mark(test, scope, test_live),
                                        _mark(then, scope, live),
                                        _mark(other, scope, live)))
            second = other if a.form == "or" else then
            first = _mark(test, scope, live | _free(second))
            second = _mark(second, scope, live)
            if a.form == "or":
                return replace(a, args=(first, first, second))
            return replace(a, args=(first, second, _mark(other, scope, live)))
        reads = [_reads(x) for x in args]
        new_args = []
        for i, x in enumerate(args):
            others = set().union(*(r for j, r in enumerate(reads) if j != i))
            new_args.append(_mark(x, scope, live | others))
        return replace(a, args=tuple(new_args))
    return _mark_lambda(a, scope, live)


def _mark_lambda(a, scope, live):
    pnames = [p.name for p in a.params]
    body_free = _free(a.body)
    outer_live = live | (body_free - set(pnames))
    arg_free = [_free(x) for x in a.args]
    params, args = [], []
    inner_scope = dict(scope)
    for i, (p, x) in enumerate(zip(a.params, a.args)):
        later = set().union(*arg_free[i + 1:]) if i + 1 < len(arg_free) else set()
        bound_used = {q for q in pnames[:i] if q in body_free}
        args.append(_mark(x, scope, frozenset(outer_live | later | bound_used)))
        enclosing = scope.get(p.name)
        reusable = (enclosing is not None and enclosing[0] == p.type
                    and p.name not in outer_live and p.name not in later)
        mark = OLD if reusable else NEW
        params.append(replace(p, mark=mark))
        inner_scope[p.name] = (p.type, mark)
    body_live = frozenset(live - set(pnames))
    body = _mark(a.body, inner_scope, body_live)
    return replace(a, params=tuple(params), args=tuple(args), body=body)


def rename_apart(a, params):
    """Assign Java target names to all variables, renaming colliding new ones.

    ``params`` are the function's parameter AVars; returns the renamed term
    and the parameter target names.
    """
    visible = set()
    env = {}
    targets = []
    for p in params:
        t = fresh_name(translate_name(p.name.name, Kind.VARIABLE), visible)
        visible.add(t)
        env[p.name] = t
        targets.append(t)
    return _rename(a, env, visible), targets


def _rename(a, env, visible):
    if isinstance(a, Conv):
        return replace(a, inner=_rename(a.inner, env, visible))
    if isinstance(a, AVar):
        return replace(a, target=env[a.name])
    if isinstance(a, AQuote):
        return a
    if isinstance(a, AApp):
        if a.fn == IF and a.form in ("if", "and", "or"):
            test, then, other = a.args
            test = _rename(test, env, visible)
            if a.form == "if":
                then = _rename(then, env, set(visible))
                other = _rename(other, env, set(visible))
            elif a.form == "or":
                then = test
                other = _rename(other, env, set(visible))
            else:
                then = _rename(then, env, set(visible))
                other = _rename(other, env, set(visible))
            return replace(a, args=(test, then, other))
        return replace(a, args=tuple(_rename(x, env, visible) for x in a.args))
    params, args = [], []
    inner_env = dict(env)
    for p, x in zip(a.params, a.args):
        args.append(_rename(x, env, visible))
        if p.mark == OLD:
            target = env[p.name]
        else:
            target = fresh_name(translate_name(p.name.name, Kind.VARIABLE), visible)
            visible.add(target)
        inner_env[p.name] = target
        params.append(replace(p, target=target))
    body = _rename(a.body, inner_env, visible)
    return replace(a, params=tuple(params), args=tuple(args), body=body)
