"""Pretty-printer for the Java subset, minimizing parentheses."""

from .ast import (Assign, Binary, BoolLit, Call, Cast, CharLit, Continue,
                  ExprStmt, FieldAccess, If, Index, IntLit, JClass, LocalDecl,
                  MethodCall, Name, New, Return, StrLit, Unary, While)

INDENT = "    "
HEADER = "// Generated by sejc; do not edit."

PRIMITIVE_TYPES = {"boolean", "char", "int", "long", "byte", "short", "float", "double"}

PRIMARY = 16
UNARY = 14
BINARY_PREC = {"*": 12, "/": 12, "+": 11, "-": 11, "<": 9, "<=": 9, ">": 9, ">=": 9,
               "==": 8, "!=": 8, "&&": 4, "||": 3}


def precedence(e):
    if isinstance(e, Binary):
        return BINARY_PREC[e.op]
    if isinstance(e, (Unary, Cast)):
        return UNARY
    if isinstance(e, IntLit) and e.value < 0:
        return UNARY
    return PRIMARY


def _escape(code, quote):
    ch = chr(code)
    if ch == quote or ch == "\\":
        return "\\" + ch
    if 32 <= code <= 126:
        return ch
    return f"\\{code:03o}"


def _starts_with_minus(e):
    while True:
        if isinstance(e, IntLit):
            return e.value < 0
        if isinstance(e, Unary):
            return e.op == "-"
        if isinstance(e, Binary):
            e = e.left
            continue
        return False


def expr(e):
    if isinstance(e, IntLit):
        return str(e.value)
    if isinstance(e, BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, CharLit):
        return "'" + _escape(e.code, "'") + "'"
    if isinstance(e, StrLit):
        return '"' + "".join(_escape(ord(c), '"') for c in e.value) + '"'
    if isinstance(e, Name):
        return e.name
    if isinstance(e, Call):
        return f"{e.name}({_args(e.args)})"
    if isinstance(e, New):
        return f"new {e.cls}({_args(e.args)})"
    if isinstance(e, MethodCall):
        return f"{_target(e.target)}.{e.name}({_args(e.args)})"
    if isinstance(e, FieldAccess):
        return f"{_target(e.target)}.{e.field}"
    if isinstance(e, Index):
        return f"{_target(e.target)}[{expr(e.index)}]"
    if isinstance(e, Unary):
        inner = _wrap(e.operand, UNARY)
        needs = e.op == "-" and (inner.startswith("-") or isinstance(e.operand, IntLit))
        return e.op + (f"({expr(e.operand)})" if needs else inner)
    if isinstance(e, Cast):
        # "(T) -x" reads as a subtraction unless T is primitive
        if (e.type not in PRIMITIVE_TYPES and _starts_with_minus(e.operand)
                and precedence(e.operand) >= UNARY):
            return f"({e.type}) ({expr(e.operand)})"
        return f"({e.type}) {_wrap(e.operand, UNARY)}"
    if isinstance(e, Binary):
        p = BINARY_PREC[e.op]
        left = _wrap(e.left, p)
        # operators associate to the left; an equal-precedence right operand
        # always keeps its parentheses so the tree reads back unchanged
        right = _wrap(e.right, p + 1)
        return f"{left} {e.op} {right}"
    raise TypeError(f"not a Java expression: {e!r}")


def _wrap(e, min_prec):
    text = expr(e)
    return f"({text})" if precedence(e) < min_prec else text


def _target(e):
    # "0.f" would start a floating-point literal
    return f"({expr(e)})" if isinstance(e, IntLit) else _wrap(e, PRIMARY)


def _args(args):
    return ", ".join(expr(a) for a in args)


def stmt_lines(s, depth):
    pad = INDENT * depth
    if isinstance(s, LocalDecl):
        init = f" = {expr(s.init)}" if s.init is not None else ""
        return [f"{pad}{s.type} {s.name}{init};"]
    if isinstance(s, Assign):
        target = s.target if isinstance(s.target, str) else expr(s.target)
        return [f"{pad}{target} = {expr(s.expr)};"]
    if isinstance(s, Return):
        return [f"{pad}return;" if s.expr is None else f"{pad}return {expr(s.expr)};"]
    if isinstance(s, Continue):
        return [f"{pad}continue;"]
    if isinstance(s, ExprStmt):
        return [f"{pad}{expr(s.expr)};"]
    if isinstance(s, If):
        lines = [f"{pad}if ({expr(s.test)}) {{"]
        lines += body_lines(s.then, depth + 1)
        if s.orelse is not None:
            lines.append(f"{pad}}} else {{")
            lines += body_lines(s.orelse, depth + 1)
        lines.append(f"{pad}}}")
        return lines
    if isinstance(s, While):
        lines = [f"{pad}while ({expr(s.test)}) {{"]
        lines += body_lines(s.body, depth + 1)
        lines.append(f"{pad}}}")
        return lines
    raise TypeError(f"not a Java statement: {s!r}")


def body_lines(stmts, depth):
    out = []
    for s in stmts:
        out += stmt_lines(s, depth)
    return out


def method_lines(m, depth):
    pad = INDENT * depth
    params = ", ".join(f"{t} {n}" for t, n in m.params)
    mods = " ".join(m.modifiers)
    lines = [f"{pad}{mods} {m.ret} {m.name}({params}) {{"]
    lines += body_lines(m.body, depth + 1)
    lines.append(f"{pad}}}")
    return lines


def print_method(m):
    return "\n".join(method_lines(m, 0)) + "\n"


def class_lines(c, depth):
    pad = INDENT * depth
    lines = [f"{pad}{' '.join(c.modifiers)} class {c.name} {{"]
    if c.static_init is not None:
        lines.append(f"{pad}{INDENT}static {{")
        lines += body_lines(c.static_init, depth + 2)
        lines.append(f"{pad}{INDENT}}}")
    for f in c.fields:
        init = f" = {expr(f.init)}" if f.init is not None else ""
        lines.append(f"{pad}{INDENT}{' '.join(f.modifiers)} {f.type} {f.name}{init};")
    for m in c.methods:
        lines += method_lines(m, depth + 1)
    for n in c.nested:
        lines += class_lines(n, depth + 1)
    lines.append(f"{pad}}}")
    return lines


def print_class(c: JClass, header=True):
    lines = ([HEADER, ""] if header else []) + class_lines(c, 0)
    return "\n".join(lines) + "\n"


def print_unit(unit):
    """Source text of every class of the unit, keyed by file name."""
    return {f"{c.name}.java": print_class(c) for c in unit.classes()}
