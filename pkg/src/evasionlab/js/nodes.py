"""AST node types for the JavaScript subset.

Nodes are plain dataclasses.  Equality is structural: spans and cached
analysis data are excluded from comparison, so a reparsed tree compares
equal to the original regardless of formatting.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import Iterator, Optional, Union

from .source import SourceSpan


@dataclass
class Node:
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False, kw_only=True)


# -- expressions -------------------------------------------------------------


@dataclass
class Identifier(Node):
    name: str


@dataclass
class StringLit(Node):
    value: str


@dataclass
class NumberLit(Node):
    value: float


@dataclass
class BoolLit(Node):
    value: bool


@dataclass
class NullLit(Node):
    pass


@dataclass
class ArrayLit(Node):
    elements: list[Node]


@dataclass
class Property(Node):
    key: str
    value: Node


@dataclass
class ObjectLit(Node):
    properties: list[Property]


@dataclass
class FunctionExpr(Node):
    name: Optional[str]
    params: list[str]
    body: list[Node]


@dataclass
class Call(Node):
    callee: Node
    args: list[Node]


@dataclass
class New(Node):
    callee: Node
    args: list[Node]


@dataclass
class Member(Node):
    object: Node
    # a str for dot access, an expression node for bracket access
    property: Union[str, Node]
    computed: bool = False


@dataclass
class Assign(Node):
    op: str  # = += -=
    target: Node
    value: Node


@dataclass
class Binary(Node):
    op: str
    left: Node
    right: Node


@dataclass
class Logical(Node):
    op: str  # && ||
    left: Node
    right: Node


@dataclass
class Unary(Node):
    op: str  # ! - +
    argument: Node


@dataclass
class Update(Node):
    op: str  # ++ --
    prefix: bool
    argument: Node


# -- statements --------------------------------------------------------------


@dataclass
class Declarator(Node):
    name: str
    init: Optional[Node] = None


@dataclass
class VarDecl(Node):
    kind: str  # var | const
    declarations: list[Declarator]


@dataclass
class FunctionDecl(Node):
    name: str
    params: list[str]
    body: list[Node]


@dataclass
class ExprStmt(Node):
    expression: Node


@dataclass
class If(Node):
    test: Node
    consequent: Node
    alternate: Optional[Node] = None


@dataclass
class For(Node):
    init: Optional[Node]
    test: Optional[Node]
    update: Optional[Node]
    body: Node


@dataclass
class While(Node):
    test: Node
    body: Node


@dataclass
class Return(Node):
    argument: Optional[Node] = None


@dataclass
class Block(Node):
    body: list[Node]


@dataclass
class Empty(Node):
    pass


@dataclass
class Program(Node):
    body: list[Node]


EXPRESSION_TYPES = (
    Identifier, StringLit, NumberLit, BoolLit, NullLit, ArrayLit, ObjectLit,
    FunctionExpr, Call, New, Member, Assign, Binary, Logical, Unary, Update,
)


def children(node: Node) -> Iterator[Node]:
    """Direct child nodes in source order."""
    for f in fields(node):
        if f.name == "span":
            continue
        value = getattr(node, f.name)
        if isinstance(value, Node):
            yield value
        elif isinstance(value, list):
            for item in value:
                if isinstance(item, Node):
                    yield item


def walk(node: Node) -> Iterator[Node]:
    """Pre-order traversal, which for this grammar is source order."""
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed(list(children(n))))


def to_dict(node: Node) -> dict:
    """JSON-friendly dump used by the debug command."""
    out: dict = {"type": type(node).__name__}
    for f in fields(node):
        if f.name == "span":
            continue
        value = getattr(node, f.name)
        if isinstance(value, Node):
            out[f.name] = to_dict(value)
        elif isinstance(value, list):
            out[f.name] = [to_dict(v) if isinstance(v, Node) else v for v in value]
        else:
            out[f.name] = value
    if node.span is not None:
        out["span"] = [node.span.start_offset, node.span.end_offset]
    return out


def dump(node: Node, indent: int = 0) -> str:
    """Indented text rendering of a tree."""
    pad = "  " * indent
    scalars = []
    nested: list[tuple[str, object]] = []
    for f in fields(node):
        if f.name == "span":
            continue
        value = getattr(node, f.name)
        if isinstance(value, Node) or (isinstance(value, list) and any(isinstance(v, Node) for v in value)):
            nested.append((f.name, value))
        else:
            scalars.append(f"{f.name}={value!r}")
    lines = [f"{pad}{type(node).__name__}" + (f" {' '.join(scalars)}" if scalars else "")]
    for name, value in nested:
        lines.append(f"{pad}  .{name}")
        items = value if isinstance(value, list) else [value]
        for item in items:
            lines.append(dump(item, indent + 2))
    return "\n".join(lines)
