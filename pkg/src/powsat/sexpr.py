"""A small s-expression reader and printer.

The reader produces ``SAtom``/``SList`` nodes carrying source positions so
surface-syntax errors can point at the offending token.  The printer is
the inverse on the plain shape (atoms and nested lists), emitting one
space between siblings; ``parse . print`` is the identity on printed
forms.  Comments run from ``;`` to the end of the line.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SourceError


@dataclass(frozen=True)
class SAtom:
    text: str
    line: int = 0
    col: int = 0

    def __str__(self):
        return self.text


@dataclass(frozen=True)
class SList:
    items: tuple
    line: int = 0
    col: int = 0

    def __str__(self):
        return "(" + " ".join(str(i) for i in self.items) + ")"

    def __len__(self):
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]


_DELIMS = set("() \t\r\n;")


def parse_sexprs(text: str) -> list:
    """All top-level forms in the text; SourceError on malformed input."""
    out: list = []
    stack: list[tuple[list, int, int]] = []
    items = out
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
        elif c in " \t\r":
            col += 1
            i += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c == "(":
            stack.append((items, line, col))
            items = []
            col += 1
            i += 1
        elif c == ")":
            if not stack:
                raise SourceError("unbalanced ')'", line, col)
            parent, l0, c0 = stack.pop()
            parent.append(SList(tuple(items), l0, c0))
            items = parent
            col += 1
            i += 1
        else:
            start = i
            c0 = col
            while i < n and text[i] not in _DELIMS:
                i += 1
                col += 1
            items.append(SAtom(text[start:i], line, c0))
    if stack:
        _, l0, c0 = stack[-1]
        raise SourceError("unclosed '('", l0, c0)
    return out


def show(node) -> str:
    """Print atoms, ints, and (possibly nested) lists/tuples/S-nodes."""
    if isinstance(node, SAtom):
        return node.text
    if isinstance(node, SList):
        return "(" + " ".join(show(i) for i in node.items) + ")"
    if isinstance(node, (list, tuple)):
        return "(" + " ".join(show(i) for i in node) + ")"
    return str(node)


def expect_list(node, what: str) -> SList:
    if not isinstance(node, SList):
        raise SourceError(f"expected {what}", getattr(node, "line", 0), getattr(node, "col", 0))
    return node


def expect_atom(node, what: str) -> str:
    if not isinstance(node, SAtom):
        raise SourceError(f"expected {what}", getattr(node, "line", 0), getattr(node, "col", 0))
    return node.text


def expect_int(node, what: str) -> int:
    text = expect_atom(node, what)
    try:
        return int(text)
    except ValueError:
        raise SourceError(f"expected {what}, got {text!r}", node.line, node.col)


def head(node) -> str:
    if isinstance(node, SList) and node.items and isinstance(node.items[0], SAtom):
        return node.items[0].text
    return ""
