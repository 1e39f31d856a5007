"""Reference evaluator for translated terms.

Evaluation runs on an explicit work stack, so the host recursion depth does
not grow with the call depth of the evaluated program.  A user-function call
in tail position leaves no pending continuation behind.
"""

from .errors import EvalError, StepLimitExceeded
from .natives import NATIVES
from .terms import (IF, MBE_TAG, MV, PROGN_TAG, RETURN_LAST, App, LambdaApp,
                    Quote, Var)
from .values import NIL, print_value

_EVAL, _BRANCH, _CALL, _BIND, _DROP = range(5)

DEFAULT_MAX_STEPS = 50_000_000


class Interpreter:
    """Evaluator bound to one world; counts steps across calls."""

    def __init__(self, world, max_steps=DEFAULT_MAX_STEPS, bodies=None):
        self.world = world
        self.max_steps = max_steps
        self.bodies = bodies or {}
        self.steps = 0

    def body_of(self, fn):
        body = self.bodies.get(fn)
        if body is None:
            body = self.world.functions[fn].body
        return body

    def eval(self, term, bindings=None):
        vals = []
        work = [(_EVAL, term, dict(bindings or {}))]
        natives = NATIVES
        functions = self.world.functions
        limit = self.max_steps
        steps = self.steps
        while work:
            op = work.pop()
            kind = op[0]
            if kind == _EVAL:
                steps += 1
                if limit is not None and steps > limit:
                    self.steps = steps
                    raise StepLimitExceeded(f"evaluation exceeded {limit} steps")
                t, env = op[1], op[2]
                if isinstance(t, Var):
                    try:
                        vals.append(env[t.name])
                    except KeyError:
                        raise EvalError(f"unbound variable {print_value(t.name)}") from None
                elif isinstance(t, Quote):
                    vals.append(t.value)
                elif isinstance(t, App):
                    fn, args = t.fn, t.args
                    if fn == IF:
                        work.append((_BRANCH, args[1], args[2], env))
                        work.append((_EVAL, args[0], env))
                    elif fn == RETURN_LAST:
                        tag = args[0]
                        if tag == Quote(MBE_TAG):
                            # both parts agree under the guard; the logic part is total
                            work.append((_EVAL, args[2], env))
                        elif tag == Quote(PROGN_TAG):
                            work.append((_EVAL, args[2], env))
                            work.append((_DROP,))
                            work.append((_EVAL, args[1], env))
                        else:
                            raise EvalError(f"unsupported return-last form {tag!r}")
                    else:
                        work.append((_CALL, fn, len(args)))
                        for a in reversed(args):
                            work.append((_EVAL, a, env))
                elif isinstance(t, LambdaApp):
                    work.append((_BIND, t.params, t.body, env))
                    for a in reversed(t.args):
                        work.append((_EVAL, a, env))
                else:
                    raise EvalError(f"not a term: {t!r}")
            elif kind == _BRANCH:
                test = vals.pop()
                work.append((_EVAL, op[2] if test == NIL else op[1], op[3]))
            elif kind == _CALL:
                fn, n = op[1], op[2]
                if n:
                    args = vals[-n:]
                    del vals[-n:]
                else:
                    args = []
                if fn == MV:
                    vals.append(tuple(args))
                elif fn in functions:
                    rec = functions[fn]
                    if len(args) != len(rec.params):
                        raise EvalError(f"arity mismatch calling {print_value(fn)}")
                    work.append((_EVAL, self.body_of(fn), dict(zip(rec.params, args))))
                else:
                    native = natives.get(fn)
                    if native is None:
                        raise EvalError(f"unknown function {print_value(fn)}")
                    if len(args) != native.arity:
                        raise EvalError(f"arity mismatch calling {print_value(fn)}")
                    vals.append(native.impl(*args))
            elif kind == _BIND:
                params, body, env = op[1], op[2], op[3]
                n = len(params)
                args = vals[-n:] if n else []
                if n:
                    del vals[-n:]
                inner = dict(env)
                inner.update(zip(params, args))
                work.append((_EVAL, body, inner))
            else:
                vals.pop()
        self.steps = steps
        return vals[-1]

    def call(self, fn, args):
        return self.eval(App(fn, tuple(Quote(a) for a in args)))


def eval_term(term, bindings, world, max_steps=DEFAULT_MAX_STEPS, bodies=None):
    return Interpreter(world, max_steps, bodies).eval(term, bindings)


def eval_call(world, fn, args, max_steps=DEFAULT_MAX_STEPS):
    return Interpreter(world, max_steps).call(fn, args)


def guard_holds(world, fn, args, max_steps=DEFAULT_MAX_STEPS):
    """Whether ``args`` satisfy the guard of user function ``fn``."""
    rec = world.functions[fn]
    value = eval_term(rec.guard, dict(zip(rec.params, args)), world, max_steps)
    return value != NIL
