"""Abstract syntax of the emitted Java subset."""

from dataclasses import dataclass, field

# -- expressions


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class CharLit:
    code: int


@dataclass(frozen=True)
class StrLit:
    value: str


@dataclass(frozen=True)
class Name:
    """A possibly qualified name such as ``x`` or ``Acl2Symbol.NIL``."""

    name: str


@dataclass(frozen=True)
class Call:
    """Static call by (possibly qualified) name.

    ``sig`` records the parameter types of the selected overload; it is
    bookkeeping for the post-translation passes and not part of the syntax.
    """

    name: str
    args: tuple
    sig: tuple = field(default=None, compare=False)


@dataclass(frozen=True)
class MethodCall:
    target: object
    name: str
    args: tuple


@dataclass(frozen=True)
class New:
    cls: str
    args: tuple = ()


@dataclass(frozen=True)
class Binary:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Unary:
    op: str
    operand: object


@dataclass(frozen=True)
class Cast:
    type: str
    operand: object


@dataclass(frozen=True)
class FieldAccess:
    target: object
    field: str


@dataclass(frozen=True)
class Index:
    """Array element access, used only by the generated test class."""

    target: object
    index: object


BINARY_OPS = ("+", "-", "*", "/", "&&", "||", "==", "!=", "<", "<=", ">", ">=")
UNARY_OPS = ("!", "-")

# -- statements


@dataclass(frozen=True)
class LocalDecl:
    type: str
    name: str
    init: object = None


@dataclass(frozen=True)
class Assign:
    target: object  # variable name or FieldAccess
    expr: object


@dataclass(frozen=True)
class If:
    test: object
    then: tuple
    orelse: tuple = None


@dataclass(frozen=True)
class While:
    test: object
    body: tuple


@dataclass(frozen=True)
class Return:
    expr: object = None


@dataclass(frozen=True)
class Continue:
    pass


@dataclass(frozen=True)
class ExprStmt:
    expr: object


# -- declarations


@dataclass(frozen=True)
class JField:
    modifiers: tuple
    type: str
    name: str
    init: object = None


@dataclass(frozen=True)
class JMethod:
    modifiers: tuple
    ret: str
    name: str
    params: tuple  # (type, name) pairs
    body: tuple

    @property
    def param_types(self):
        return tuple(t for t, _ in self.params)


@dataclass(frozen=True)
class JClass:
    name: str
    modifiers: tuple = ("public", "static")
    fields: tuple = ()
    methods: tuple = ()
    nested: tuple = ()
    static_init: tuple = None

    def nested_class(self, name):
        for c in self.nested:
            if c.name == name:
                return c
        return None


@dataclass(frozen=True)
class JavaUnit:
    main_class: JClass
    env_class: JClass
    test_class: JClass = None

    def classes(self):
        return [c for c in (self.main_class, self.env_class, self.test_class) if c]


def walk_stmts(stmts):
    """Every statement, recursively, in textual order."""
    for s in stmts:
        yield s
        if isinstance(s, If):
            yield from walk_stmts(s.then)
            if s.orelse is not None:
                yield from walk_stmts(s.orelse)
        elif isinstance(s, While):
            yield from walk_stmts(s.body)


def stmt_exprs(s):
    if isinstance(s, LocalDecl):
        return [s.init] if s.init is not None else []
    if isinstance(s, Assign):
        return ([s.target] if not isinstance(s.target, str) else []) + [s.expr]
    if isinstance(s, (If, While)):
        return [s.test]
    if isinstance(s, Return):
        return [s.expr] if s.expr is not None else []
    if isinstance(s, ExprStmt):
        return [s.expr]
    return []


def sub_exprs(e):
    """Every expression node below and including ``e``."""
    stack = [e]
    while stack:
        x = stack.pop()
        yield x
        if isinstance(x, (Call, New)):
            stack.extend(x.args)
        elif isinstance(x, MethodCall):
            stack.append(x.target)
            stack.extend(x.args)
        elif isinstance(x, Binary):
            stack.extend((x.left, x.right))
        elif isinstance(x, (Unary, Cast)):
            stack.append(x.operand)
        elif isinstance(x, FieldAccess):
            stack.append(x.target)
        elif isinstance(x, Index):
            stack.extend((x.target, x.index))


def names_read(stmts):
    """Simple variable names read anywhere in ``stmts``."""
    out = set()
    for s in walk_stmts(stmts):
        for e in stmt_exprs(s):
            out.update(x.name for x in sub_exprs(e) if isinstance(x, Name))
    return out
