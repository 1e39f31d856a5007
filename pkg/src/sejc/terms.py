"""Terms in translated form and function records."""

from dataclasses import dataclass, field

from .values import ACL2, CL, Symbol, print_symbol, print_value

IF = Symbol(CL, "IF")
RETURN_LAST = Symbol(ACL2, "RETURN-LAST")
MV = Symbol(ACL2, "MV")
MV_NTH = Symbol(ACL2, "MV-NTH")
MBE_TAG = Symbol(ACL2, "MBE1-RAW")
PROGN_TAG = Symbol(CL, "PROGN")
MV_VAR = Symbol(ACL2, "MV")


@dataclass(frozen=True)
class Var:
    name: Symbol


@dataclass(frozen=True)
class Quote:
    value: object


@dataclass(frozen=True)
class App:
    fn: Symbol
    args: tuple


@dataclass(frozen=True)
class LambdaApp:
    params: tuple
    body: object
    args: tuple

    def __post_init__(self):
        if len(self.params) != len(self.args):
            raise ValueError("lambda parameters and arguments differ in number")


@dataclass(frozen=True)
class FunctionRecord:
    name: Symbol
    params: tuple
    guard: object
    body: object
    main_type: object
    other_types: tuple = ()
    package: str = ACL2  # package the body was read in
    location: str = field(default=None, compare=False)  # file:line:col of the defun

    @property
    def all_types(self):
        return (self.main_type,) + tuple(self.other_types)


@dataclass(frozen=True)
class TestSpec:
    name: str
    call: App


def mbe(logic, exec_):
    return App(RETURN_LAST, (Quote(MBE_TAG), exec_, logic))


def is_mbe(t):
    return (isinstance(t, App) and t.fn == RETURN_LAST and len(t.args) == 3
            and t.args[0] == Quote(MBE_TAG))


def is_progn(t):
    return (isinstance(t, App) and t.fn == RETURN_LAST and len(t.args) == 3
            and t.args[0] == Quote(PROGN_TAG))


def free_vars(term):
    """Free variables, ordered by first occurrence."""
    out = {}
    _free(term, frozenset(), out)
    return list(out)


def _free(term, bound, out):
    stack = [term]
    while stack:
        t = stack.pop()
        if isinstance(t, Var):
            if t.name not in bound:
                out.setdefault(t.name, None)
        elif isinstance(t, App):
            stack.extend(reversed(t.args))
        elif isinstance(t, LambdaApp):
            for a in t.args:
                _free(a, bound, out)
            _free(t.body, frozenset(t.params), out)


def subterms(term):
    stack = [term]
    while stack:
        t = stack.pop()
        yield t
        if isinstance(t, App):
            stack.extend(t.args)
        elif isinstance(t, LambdaApp):
            stack.extend(t.args)
            stack.append(t.body)


def called_functions(term):
    return {t.fn for t in subterms(term) if isinstance(t, App)}


def lambdas_closed(term):
    return all(set(free_vars(t.body)) <= set(t.params)
               for t in subterms(term) if isinstance(t, LambdaApp))


def print_term(term, package=ACL2):
    """Render a term as S-expression text in translated form."""
    if isinstance(term, Var):
        return print_symbol(term.name, package).lower()
    if isinstance(term, Quote):
        return "'" + print_value(term.value, package)
    if isinstance(term, App):
        parts = [print_symbol(term.fn, package).lower()]
        parts += [print_term(a, package) for a in term.args]
        return "(" + " ".join(parts) + ")"
    params = " ".join(print_symbol(p, package).lower() for p in term.params)
    head = f"(lambda ({params}) {print_term(term.body, package)})"
    args = "".join(" " + print_term(a, package) for a in term.args)
    return f"({head}{args})"

