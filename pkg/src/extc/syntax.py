"""AST for the Elixir fragment: programs, modules, functions, expressions and
patterns, every node carrying a source span.

Spans never take part in equality, so two parses of equivalent source compare
structurally equal.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .types import MapKey, Type


@dataclass(frozen=True)
class Span:
    """Byte offsets plus 1-based line/column positions covering a source range."""

    start: int
    end: int
    line: int
    col: int
    end_line: int
    end_col: int

    def cover(self, other: "Span") -> "Span":
        first = self if self.start <= other.start else other
        last = self if self.end >= other.end else other
        return Span(first.start, last.end, first.line, first.col, last.end_line, last.end_col)


DUMMY_SPAN = Span(0, 0, 1, 1, 1, 1)


class Node:
    __slots__ = ()


class Expr(Node):
    __slots__ = ()


class Pattern(Node):
    __slots__ = ()


class Literal(Expr, Pattern):
    """Literals appear both as expressions and as patterns."""

    __slots__ = ()


@dataclass(eq=True)
class IntLit(Literal):
    value: int
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        return str(self.value)


@dataclass(eq=True)
class FloatLit(Literal):
    value: float
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        text = repr(self.value)
        return text if "." in text or "e" in text else text + ".0"


@dataclass(eq=True)
class StringLit(Literal):
    value: str
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        escaped = (self.value.replace("\\", "\\\\").replace('"', '\\"')
                   .replace("\n", "\\n").replace("\t", "\\t"))
        return f'"{escaped}"'


@dataclass(eq=True)
class BoolLit(Literal):
    value: bool
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        return "true" if self.value else "false"


@dataclass(eq=True)
class AtomLit(Literal):
    name: str
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        return f":{self.name}"


# --- patterns ---------------------------------------------------------------


@dataclass(eq=True)
class Wildcard(Pattern):
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        return "_"


@dataclass(eq=True)
class VarPattern(Pattern):
    name: str
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        return self.name


@dataclass(eq=True)
class PinPattern(Pattern):
    name: str
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        return f"^{self.name}"


@dataclass(eq=True)
class TuplePattern(Pattern):
    items: list[Pattern]
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        return "{" + ", ".join(str(p) for p in self.items) + "}"


@dataclass(eq=True)
class ElistPattern(Pattern):
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        return "[]"


@dataclass(eq=True)
class ConsPattern(Pattern):
    head: Pattern
    tail: Pattern
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        return f"[{self.head} | {self.tail}]"


@dataclass(eq=True)
class MapPattern(Pattern):
    entries: list[tuple["MapKey", Pattern]]
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        return "%{" + ", ".join(f"{k} => {p}" for k, p in self.entries) + "}"


# --- expressions ------------------------------------------------------------


@dataclass(eq=True)
class Var(Expr):
    name: str
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        return self.name


@dataclass(eq=True)
class TupleExpr(Expr):
    items: list[Expr]
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        return "{" + ", ".join(f"({e})" for e in self.items) + "}"


@dataclass(eq=True)
class ElistExpr(Expr):
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        return "[]"


@dataclass(eq=True)
class ConsExpr(Expr):
    head: Expr
    tail: Expr
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        return f"[({self.head}) | ({self.tail})]"


@dataclass(eq=True)
class MapExpr(Expr):
    entries: list[tuple["MapKey", Expr]]
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        return "%{" + ", ".join(f"{k} => ({e})" for k, e in self.entries) + "}"


@dataclass(eq=True)
class MapAccess(Expr):
    subject: Expr
    key: "MapKey"
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        return f"({self.subject})[{self.key}]"


@dataclass(eq=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        return f"({self.left}) {self.op} ({self.right})"


@dataclass(eq=True)
class UnaryOp(Expr):
    op: str
    operand: Expr
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        sep = " " if self.op == "not" else ""
        return f"{self.op}{sep}({self.operand})"


@dataclass(eq=True)
class If(Expr):
    cond: Expr
    then: Expr
    orelse: Expr
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        return f"if ({self.cond}) do {self.then} else {self.orelse} end"


@dataclass(eq=True)
class CaseClause(Node):
    pattern: Pattern
    body: Expr
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        return f"{self.pattern} -> {self.body}"


@dataclass(eq=True)
class Case(Expr):
    subject: Expr
    clauses: list[CaseClause]
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        branches = "; ".join(str(c) for c in self.clauses)
        return f"case ({self.subject}) do {branches} end"


@dataclass(eq=True)
class CondClause(Node):
    cond: Expr
    body: Expr
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        return f"({self.cond}) -> {self.body}"


@dataclass(eq=True)
class Cond(Expr):
    clauses: list[CondClause]
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        branches = "; ".join(str(c) for c in self.clauses)
        return f"cond do {branches} end"


@dataclass(eq=True)
class Call(Expr):
    """Named function application, optionally qualified by a module path."""

    qualifier: tuple[str, ...]
    name: str
    args: list[Expr]
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def qualified_name(self) -> str:
        return ".".join(self.qualifier + (self.name,))

    def __str__(self):
        args = ", ".join(f"({a})" for a in self.args)
        return f"{self.qualified_name()}({args})"


@dataclass(eq=True)
class VarCall(Expr):
    """Application of a variable bound to an anonymous function: x.(args)."""

    name: str
    args: list[Expr]
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        args = ", ".join(f"({a})" for a in self.args)
        return f"{self.name}.({args})"


@dataclass(eq=True)
class AnonFn(Expr):
    params: list[Pattern]
    body: Expr
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        params = ", ".join(str(p) for p in self.params)
        return f"fn ({params}) -> {self.body} end"


@dataclass(eq=True)
class Match(Expr):
    pattern: Pattern
    value: Expr
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        return f"{self.pattern} = ({self.value})"


@dataclass(eq=True)
class Seq(Expr):
    first: Expr
    second: Expr
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        return f"{self.first}; {self.second}"


# --- declarations and programs ----------------------------------------------


@dataclass(eq=True)
class SpecDecl(Node):
    name: str
    params: list["Type"]
    result: "Type"
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        params = ", ".join(str(t) for t in self.params)
        return f"@spec {self.name}({params}) :: {self.result}"


@dataclass(eq=True)
class FunctionDef(Node):
    name: str
    params: list[Pattern]
    body: Expr
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        params = ", ".join(str(p) for p in self.params)
        return f"def {self.name}({params}) do {self.body} end"


@dataclass(eq=True)
class ModuleDef(Node):
    name: str
    body: list[Node]
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        items = "; ".join(str(i) for i in self.body)
        return f"defmodule {self.name} do {items} end"


@dataclass(eq=True)
class Program(Node):
    items: list[Node]
    path: str = field(compare=False, default="<input>")
    span: Span = field(compare=False, default=DUMMY_SPAN)

    def __str__(self):
        return "\n".join(str(i) for i in self.items)


def span_of(node: Node) -> Span:
    """Source span covering the node's text."""
    return node.span


def children(node: Node):
    """Yield the direct AST children of a node."""
    if not dataclasses.is_dataclass(node):
        return
    for f in dataclasses.fields(node):
        value = getattr(node, f.name)
        if isinstance(value, Node):
            yield value
        elif isinstance(value, list):
            for item in value:
                if isinstance(item, Node):
                    yield item
                elif isinstance(item, tuple):
                    for part in item:
                        if isinstance(part, Node):
                            yield part


def walk(node: Node):
    """Yield node and every descendant, depth-first."""
    yield node
    for child in children(node):
        yield from walk(child)


def dump(node: Node, indent: int = 0) -> str:
    """Readable tree rendering of an AST, one node per line."""
    pad = "  " * indent
    if not dataclasses.is_dataclass(node):
        return pad + repr(node)
    scalars = []
    nested = []
    for f in dataclasses.fields(node):
        value = getattr(node, f.name)
        if f.name == "span" or isinstance(value, Span):
            continue
        if isinstance(value, Node):
            nested.append((f.name, [value]))
        elif isinstance(value, list) and value and isinstance(value[0], (Node, tuple)):
            nested.append((f.name, value))
        else:
            scalars.append(f"{f.name}={value!r}")
    head = pad + type(node).__name__
    if scalars:
        head += " " + " ".join(scalars)
    lines = [head]
    for name, values in nested:
        lines.append(pad + f"  {name}:")
        for value in values:
            if isinstance(value, tuple):
                key, sub = value
                lines.append(pad + f"    {key} =>")
                lines.append(dump(sub, indent + 3))
            else:
                lines.append(dump(value, indent + 2))
    return "\n".join(lines)
