"""S-expression reader for workspace files."""

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ReadError
from .values import CHAR_NAME_CODES, Char, print_value


@dataclass(frozen=True)
class SSym:
    """A symbol as written: optional package prefix, upcased name."""

    package: object  # str or None
    name: str

    def __repr__(self):
        if self.package is None:
            return self.name
        if self.package == "KEYWORD":
            return ":" + self.name
        return f"{self.package}::{self.name}"


@dataclass(frozen=True)
class Dotted:
    items: tuple
    tail: object


NIL_SYM = SSym(None, "NIL")
QUOTE_SYM = SSym(None, "QUOTE")

_INT = re.compile(r"[+-]?\d+\Z")
_RATIO = re.compile(r"([+-]?\d+)/(\d+)\Z")
_DELIMS = set("()'\";")


class _Reader:
    def __init__(self, text, source):
        self.text = text
        self.source = source
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, message, line=None, col=None):
        raise ReadError(message, line or self.line, col or self.col, self.source)

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def advance(self):
        ch = self.text[self.pos]
        self.pos += 1
        if ch == "\n":
            self.line += 1
            self.col = 1
        else:
            self.col += 1
        return ch

    def skip_space(self):
        while self.pos < len(self.text):
            ch = self.peek()
            if ch.isspace():
                self.advance()
            elif ch == ";":
                while self.pos < len(self.text) and self.peek() != "\n":
                    self.advance()
            elif self.text.startswith("#|", self.pos):
                line, col = self.line, self.col
                end = self.text.find("|#", self.pos + 2)
                if end < 0:
                    self.error("unterminated block comment", line, col)
                while self.pos < end + 2:
                    self.advance()
            else:
                return

    def read_all(self, located=False):
        out = []
        while True:
            self.skip_space()
            if self.pos >= len(self.text):
                return out
            loc = f"{self.source or '<input>'}:{self.line}:{self.col}"
            form = self.read()
            out.append((form, loc) if located else form)

    def read(self):
        self.skip_space()
        if self.pos >= len(self.text):
            self.error("unexpected end of input")
        line, col = self.line, self.col
        ch = self.peek()
        if ch == "(":
            self.advance()
            return self.read_list(line, col)
        if ch == ")":
            self.error("unbalanced ')'")
        if ch == "'":
            self.advance()
            return [QUOTE_SYM, self.read()]
        if ch == '"':
            return self.read_string()
        if self.text.startswith("#\\", self.pos):
            return self.read_char()
        if ch == "#":
            self.error("unsupported '#' syntax")
        return self.read_atom()

    def read_list(self, line, col):
        items = []
        while True:
            self.skip_space()
            if self.pos >= len(self.text):
                self.error("unbalanced '(' opened here", line, col)
            ch = self.peek()
            if ch == ")":
                self.advance()
                return items if items else NIL_SYM
            if ch == "." and self._lone_dot():
                dot_line, dot_col = self.line, self.col
                self.advance()
                if not items:
                    self.error("dot at start of list", dot_line, dot_col)
                tail = self.read()
                self.skip_space()
                if self.peek() != ")":
                    self.error("expected ')' after dotted tail")
                self.advance()
                if tail == NIL_SYM:
                    return items
                if isinstance(tail, list):
                    return items + tail
                if isinstance(tail, Dotted):
                    return Dotted(tuple(items) + tail.items, tail.tail)
                return Dotted(tuple(items), tail)
            items.append(self.read())

    def _lone_dot(self):
        nxt = self.text[self.pos + 1:self.pos + 2]
        return nxt == "" or nxt.isspace() or nxt in _DELIMS

    def read_string(self):
        line, col = self.line, self.col
        self.advance()
        chars = []
        while True:
            if self.pos >= len(self.text):
                self.error("unterminated string", line, col)
            ch = self.advance()
            if ch == '"':
                return "".join(chars)
            if ch == "\\":
                if self.pos >= len(self.text):
                    self.error("unterminated string", line, col)
                ch = self.advance()
            if ord(ch) > 255:
                self.error("string character outside 8-bit range")
            chars.append(ch)

    def read_char(self):
        line, col = self.line, self.col
        self.advance()
        self.advance()
        if self.pos >= len(self.text):
            self.error("malformed character", line, col)
        first = self.advance()
        token = first
        while (self.pos < len(self.text) and not self.peek().isspace()
               and self.peek() not in _DELIMS):
            token += self.advance()
        if len(token) == 1:
            if ord(token) > 255:
                self.error("character outside 8-bit range", line, col)
            return Char(ord(token))
        upper = token.upper()
        if upper in CHAR_NAME_CODES:
            return Char(CHAR_NAME_CODES[upper])
        if upper.startswith("U+"):
            try:
                code = int(token[2:], 16)
            except ValueError:
                code = -1
            if 0 <= code <= 255:
                return Char(code)
        self.error(f"malformed character #\\{token}", line, col)

    def read_atom(self):
        line, col = self.line, self.col
        token = ""
        while (self.pos < len(self.text) and not self.peek().isspace()
               and self.peek() not in _DELIMS):
            token += self.advance()
        if _INT.match(token):
            return int(token)
        m = _RATIO.match(token)
        if m:
            den = int(m.group(2))
            if den == 0:
                self.error(f"malformed ratio {token}", line, col)
            q = Fraction(int(m.group(1)), den)
            return q.numerator if q.denominator == 1 else q
        if "#" in token or "|" in token or "\\" in token:
            self.error(f"malformed atom {token}", line, col)
        return self.symbol(token.upper(), line, col)

    def symbol(self, token, line, col):
        if token.startswith(":"):
            name = token[1:]
            if not name or ":" in name:
                self.error(f"malformed keyword {token}", line, col)
            return SSym("KEYWORD", name)
        if ":" in token:
            pkg, sep, name = token.partition("::")
            if not sep:
                pkg, _, name = token.partition(":")
            if not pkg or not name or ":" in name:
                self.error(f"malformed symbol {token}", line, col)
            return SSym(pkg, name)
        if token == ".":
            self.error("unexpected dot", line, col)
        return SSym(None, token)


def read_sexprs(text, source=None):
    """Read every top-level S-expression in ``text``."""
    return _Reader(text, source).read_all()


def read_located(text, source=None):
    """Like read_sexprs, pairing each form with its ``source:line:col``."""
    return _Reader(text, source).read_all(located=True)


def print_sexpr(x):
    if isinstance(x, SSym):
        return repr(x)
    if isinstance(x, list):
        return "(" + " ".join(print_sexpr(i) for i in x) + ")"
    if isinstance(x, Dotted):
        return ("(" + " ".join(print_sexpr(i) for i in x.items)
                + " . " + print_sexpr(x.tail) + ")")
    return print_value(x)
