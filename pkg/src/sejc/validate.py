"""Directive checking by evaluation on sampled inputs."""

from .errors import DirectiveError, EvalError
from .interpreter import Interpreter
from .sampling import make_rng, random_value
from .types import AV, value_has_type
from .values import NIL, print_value

CHECK_STEPS = 2_000


def _output_ok(value, ft):
    if len(ft.outputs) == 1:
        return not isinstance(value, tuple) and value_has_type(value, ft.outputs[0])
    return (isinstance(value, tuple) and len(value) == len(ft.outputs)
            and all(value_has_type(v, t) for v, t in zip(value, ft.outputs)))


def _check(interp, rec, ft, args, under):
    try:
        value = interp.call(rec.name, args)
    except EvalError:
        return  # outside the function's domain; nothing to check
    if not _output_ok(value, ft):
        shown = " ".join(print_value(a) for a in args)
        raise DirectiveError(
            f"{under} type {ft!r} of {print_value(rec.name)} fails on inputs "
            f"({shown}): result {print_value(value)}", rec.location)


def validate_directives(world, samples=100, seed=0):
    """Check every declared function type on ``samples`` sampled inputs.

    Main types are checked on inputs that satisfy the guard; other types are
    checked on inputs of their own input types, whatever the guard says.
    """
    rng = make_rng(seed)
    for rec in world.functions.values():
        main = rec.main_type
        untyped = all(t is AV for t in main.inputs + main.outputs)
        if untyped and not rec.other_types:
            continue
        found, tries = 0, 0
        while found < samples and tries < samples * 20:
            tries += 1
            args = [random_value(t, rng) for t in main.inputs]
            interp = Interpreter(world, CHECK_STEPS)
            try:
                if interp.eval(rec.guard, dict(zip(rec.params, args))) == NIL:
                    continue
            except EvalError:
                continue
            found += 1
            _check(interp, rec, main, args, "main")
            if not main.inputs:
                break
        for ft in rec.other_types:
            for _ in range(samples if ft.inputs else 1):
                args = [random_value(t, rng) for t in ft.inputs]
                _check(Interpreter(world, CHECK_STEPS), rec, ft, args, "other")
