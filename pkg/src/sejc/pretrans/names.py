"""Translation of source names to Java identifiers."""

import enum
import re

JAVA_RESERVED = frozenset("""
abstract assert boolean break byte case catch char class const continue default
do double else enum extends final finally float for goto if implements import
instanceof int interface long native new package private protected public
return short static strictfp super switch synchronized this throw throws
transient try void volatile while true false null var record yield _
""".split())

_PLAIN = re.compile(r"[A-Za-z0-9_]")


class Kind(enum.Enum):
    PACKAGE = "package"
    METHOD = "method"
    VARIABLE = "variable"


def translate_name(name, kind):
    """Java identifier for a package, function or variable name."""
    kind = Kind(kind) if not isinstance(kind, Kind) else kind
    if kind is not Kind.PACKAGE:
        name = name.lower()
    out = []
    for ch in name:
        if ch == "-":
            out.append("_")
        elif _PLAIN.match(ch):
            out.append(ch)
        else:
            out.append(f"${ord(ch):02x}")
    ident = "".join(out)
    if not ident or ident[0].isdigit():
        ident = "_" + ident
    if ident in JAVA_RESERVED:
        ident += "$"
    return ident


def fresh_name(base, taken):
    """``base`` if free, else ``base$k`` for the smallest free k >= 1."""
    if base not in taken:
        return base
    k = 1
    while f"{base}${k}" in taken:
        k += 1
    return f"{base}${k}"
