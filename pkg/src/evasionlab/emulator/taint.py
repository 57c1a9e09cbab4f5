"""Whole-string taint labels.

A tainted runtime string is a :class:`TStr`, a ``str`` subclass carrying a
:class:`TaintLabel`.  Untainted strings are plain ``str``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

NETWORK = "Network"
CROSS_WORKER = "CrossWorker"
STORAGE_DERIVED = "StorageDerived"
SOURCES = (NETWORK, CROSS_WORKER, STORAGE_DERIVED)


@dataclass(frozen=True)
class TaintLabel:
    sources: frozenset = field(default_factory=frozenset)
    # (api, trace ordinal) pairs, sorted and unique
    origins: tuple = ()

    def __post_init__(self) -> None:
        unknown = set(self.sources) - set(SOURCES)
        if unknown:
            raise ValueError(f"unknown taint sources {sorted(unknown)}")

    def union(self, other: Optional["TaintLabel"]) -> "TaintLabel":
        if other is None or other is self:
            return self
        return TaintLabel(
            self.sources | other.sources,
            tuple(sorted(set(self.origins) | set(other.origins), key=lambda o: (o[1], o[0]))),
        )

    def add(self, source: str, api: str, ordinal: int) -> "TaintLabel":
        return self.union(TaintLabel(frozenset({source}), ((api, ordinal),)))

    def to_json(self) -> dict:
        return {"sources": sorted(self.sources), "origins": [list(o) for o in self.origins]}


def new_label(source: str, api: str, ordinal: int) -> TaintLabel:
    return TaintLabel(frozenset({source}), ((api, ordinal),))


class TStr(str):
    """A string carrying a taint label."""

    taint: TaintLabel

    def __repr__(self) -> str:
        return f"TStr({str.__repr__(self)}, {sorted(self.taint.sources)})"


def taint_of(value: object) -> Optional[TaintLabel]:
    return value.taint if isinstance(value, TStr) else None


def tag(text: str, label: Optional[TaintLabel]) -> str:
    """Return ``text`` carrying ``label`` (plain str when label is None)."""
    if label is None:
        return text if type(text) is str else str.__str__(text)
    out = TStr(text)
    out.taint = label
    return out


def merge(values: Iterable[object]) -> Optional[TaintLabel]:
    label: Optional[TaintLabel] = None
    for v in values:
        t = taint_of(v)
        if t is not None:
            label = t if label is None else label.union(t)
    return label
