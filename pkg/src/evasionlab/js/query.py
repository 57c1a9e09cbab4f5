"""Predicate queries over syntax trees."""

from __future__ import annotations

from typing import Callable, Iterable

from . import nodes as n

Predicate = Callable[[n.Node], bool]


def query(ast: n.Node, predicate: Predicate) -> list[n.Node]:
    """All nodes satisfying ``predicate``, in source order."""
    return [node for node in n.walk(ast) if predicate(node)]


def callee_name(node: n.Node) -> str | None:
    """Name of a called function: ``f(...)`` gives ``f``, ``a.b.f(...)`` gives ``f``."""
    if not isinstance(node, n.Call):
        return None
    callee = node.callee
    if isinstance(callee, n.Identifier):
        return callee.name
    if isinstance(callee, n.Member) and not callee.computed:
        return callee.property
    return None


def is_call_to(name: str) -> Predicate:
    """Calls whose callee is the bare identifier ``name``."""

    def pred(node: n.Node) -> bool:
        return (
            isinstance(node, n.Call)
            and isinstance(node.callee, n.Identifier)
            and node.callee.name == name
        )

    return pred


def is_method_call(obj: str, prop: str) -> Predicate:
    """Calls of the form ``obj.prop(...)``."""

    def pred(node: n.Node) -> bool:
        if not isinstance(node, n.Call) or not isinstance(node.callee, n.Member):
            return False
        m = node.callee
        return (
            not m.computed
            and m.property == prop
            and isinstance(m.object, n.Identifier)
            and m.object.name == obj
        )

    return pred


def any_of(*preds: Predicate) -> Predicate:
    return lambda node: any(p(node) for p in preds)


def find_function(ast: n.Node, name: str) -> n.FunctionDecl | None:
    for node in n.walk(ast):
        if isinstance(node, n.FunctionDecl) and node.name == name:
            return node
    return None


def string_literals(asts: Iterable[n.Node]) -> list[n.StringLit]:
    out: list[n.StringLit] = []
    for ast in asts:
        out.extend(node for node in n.walk(ast) if isinstance(node, n.StringLit))
    return out
