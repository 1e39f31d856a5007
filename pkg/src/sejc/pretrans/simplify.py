"""Source-to-source simplifications run before type annotation."""

from ..errors import TypeAnnotationError
from ..terms import (IF, MBE_TAG, PROGN_TAG, RETURN_LAST, App, LambdaApp,
                     Quote, Var, free_vars)
from ..values import T


def _changed(new, old):
    return any(a is not b for a, b in zip(new, old))


def rewrite(term, fn):
    """Apply ``fn`` bottom-up to every subterm."""
    if isinstance(term, App):
        args = tuple(rewrite(a, fn) for a in term.args)
        if _changed(args, term.args):
            term = App(term.fn, args)
    elif isinstance(term, LambdaApp):
        args = tuple(rewrite(a, fn) for a in term.args)
        body = rewrite(term.body, fn)
        if _changed(args, term.args) or body is not term.body:
            term = LambdaApp(term.params, body, args)
    return fn(term)


def resolve_mbe(term, guards):
    """mbe to its exec part (guards) or logic part; mbt falls out of the same rule."""
    def step(t):
        if isinstance(t, App) and t.fn == RETURN_LAST:
            tag = t.args[0]
            if tag == Quote(MBE_TAG):
                return t.args[1] if guards else t.args[2]
            if tag != Quote(PROGN_TAG):
                raise TypeAnnotationError(f"unsupported return-last form with tag {tag!r}")
        return t
    return rewrite(term, step)


def simplify_if_t(term):
    def step(t):
        if isinstance(t, App) and t.fn == IF and t.args[0] == Quote(T):
            return t.args[1]
        return t
    return rewrite(term, step)


def elide_progn(term):
    def step(t):
        if (isinstance(t, App) and t.fn == RETURN_LAST
                and t.args[0] == Quote(PROGN_TAG)):
            return t.args[2]
        return t
    return rewrite(term, step)


def _keep_bindings(t, keep):
    pairs = [(p, a) for p, a in zip(t.params, t.args) if keep(p, a)]
    if not pairs:
        return t.body
    if len(pairs) == len(t.params):
        return t
    params, args = zip(*pairs)
    return LambdaApp(params, t.body, args)


def drop_unused_bindings(term):
    def step(t):
        if isinstance(t, LambdaApp):
            used = set(free_vars(t.body))
            return _keep_bindings(t, lambda p, a: p in used)
        return t
    return rewrite(term, step)


def drop_trivial_bindings(term):
    def step(t):
        if isinstance(t, LambdaApp):
            return _keep_bindings(t, lambda p, a: a != Var(p))
        return t
    return rewrite(term, step)


SIMPLIFICATION_PASSES = ("resolve_mbe", "simplify_if_t", "elide_progn",
                         "drop_unused_bindings", "drop_trivial_bindings")


def simplify(term, guards):
    term = resolve_mbe(term, guards)
    term = simplify_if_t(term)
    term = elide_progn(term)
    term = drop_unused_bindings(term)
    return drop_trivial_bindings(term)
