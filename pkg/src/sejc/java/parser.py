"""Reader for the printed Java expression subset.

Used to check that printed expressions read back as the tree they came from.
A dotted identifier chain reads as one qualified ``Name`` (or ``Call`` when
followed by arguments); ``MethodCall``, ``FieldAccess`` and ``Index`` are
produced only on targets that are not plain names.
"""

import re

from .ast import (BINARY_OPS, Binary, BoolLit, Call, Cast, CharLit, FieldAccess,
                  Index, IntLit, MethodCall, Name, New, StrLit, Unary)
from .printer import BINARY_PREC, PRIMITIVE_TYPES as PRIMITIVES


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<float>\d+\.)
  | (?P<int>\d+)
  | (?P<char>'(?:\\[0-7]{1,3}|\\.|[^'\\])')
  | (?P<str>"(?:\\[0-7]{1,3}|\\.|[^"\\])*")
  | (?P<ident>[A-Za-z_$][\w$]*)
  | (?P<op>\+\+|--|&&|\|\||==|!=|<=|>=|[-+*/<>!()\[\],.])
""", re.VERBOSE)

_ESCAPE = re.compile(r"\\([0-7]{1,3}|.)")


class JavaSyntaxError(ValueError):
    pass


def _unescape(body):
    def one(m):
        s = m.group(1)
        return chr(int(s, 8)) if s[0] in "01234567" else s
    return _ESCAPE.sub(one, body)


def tokenize(text):
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise JavaSyntaxError(f"unexpected character {text[pos]!r} at {pos}")
        pos = m.end()
        kind = m.lastgroup
        if kind == "ws":
            continue
        if kind == "float":
            raise JavaSyntaxError(f"floating-point literals are outside the subset (at {m.start()})")
        if kind == "op" and m.group() in ("++", "--"):
            raise JavaSyntaxError(f"increment operators are outside the subset (at {m.start()})")
        out.append((kind, m.group()))
    out.append(("end", ""))
    return out


class _Reader:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value):
        t = self.next()
        if t[1] != value:
            raise JavaSyntaxError(f"expected {value!r}, got {t[1]!r}")

    def expression(self, min_prec=0):
        left = self.unary()
        while True:
            kind, op = self.peek()
            if kind != "op" or op not in BINARY_OPS or BINARY_PREC[op] < min_prec:
                return left
            self.next()
            right = self.expression(BINARY_PREC[op] + 1)
            left = Binary(op, left, right)

    def unary(self):
        kind, tok = self.peek()
        if tok in ("!", "-") and kind == "op":
            self.next()
            if tok == "-" and self.peek()[0] == "int":
                return self.postfix(IntLit(-int(self.next()[1])))
            return Unary(tok, self.unary())
        cast = self._cast_type()
        if cast is not None:
            return Cast(cast, self.unary())
        return self.postfix(self.primary())

    def _cast_type(self):
        # "(" dotted-name ")" followed by something that can start an operand
        if self.peek()[1] != "(":
            return None
        j = 1
        parts = []
        while True:
            kind, tok = self.peek(j)
            if kind != "ident":
                return None
            parts.append(tok)
            j += 1
            if self.peek(j)[1] == ".":
                j += 1
                continue
            break
        if self.peek(j)[1] != ")":
            return None
        name = ".".join(parts)
        kind, tok = self.peek(j + 1)
        starts = kind in ("int", "char", "str", "ident") or tok in ("(", "!")
        if tok == "-" and name in PRIMITIVES:
            starts = True
        if not starts:
            return None
        self.i += j + 1
        return name

    def primary(self):
        kind, tok = self.next()
        if kind == "int":
            return IntLit(int(tok))
        if kind == "char":
            return CharLit(ord(_unescape(tok[1:-1])))
        if kind == "str":
            return StrLit(_unescape(tok[1:-1]))
        if tok == "(":
            e = self.expression()
            self.expect(")")
            return e
        if kind == "ident":
            if tok in ("true", "false"):
                return BoolLit(tok == "true")
            if tok == "new":
                cls = self._dotted(self.next()[1])
                return New(cls, self._args())
            name = self._dotted(tok)
            if self.peek()[1] == "(":
                return Call(name, self._args())
            return Name(name)
        raise JavaSyntaxError(f"unexpected {tok or 'end of input'!r}")

    def _dotted(self, first):
        parts = [first]
        while self.peek()[1] == "." and self.peek(1)[0] == "ident":
            self.next()
            parts.append(self.next()[1])
        return ".".join(parts)

    def _args(self):
        self.expect("(")
        args = []
        if self.peek()[1] != ")":
            args.append(self.expression())
            while self.peek()[1] == ",":
                self.next()
                args.append(self.expression())
        self.expect(")")
        return tuple(args)

    def postfix(self, e):
        while True:
            tok = self.peek()[1]
            if tok == ".":
                self.next()
                name = self.next()[1]
                if self.peek()[1] == "(":
                    e = MethodCall(e, name, self._args())
                else:
                    e = FieldAccess(e, name)
            elif tok == "[":
                self.next()
                idx = self.expression()
                self.expect("]")
                e = Index(e, idx)
            else:
                return e


def parse_expr(text):
    """Read one expression; the whole text must be consumed."""
    r = _Reader(text)
    e = r.expression()
    if r.peek()[0] != "end":
        raise JavaSyntaxError(f"trailing input at {r.peek()[1]!r}")
    return e
