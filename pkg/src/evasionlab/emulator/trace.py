"""Execution traces, sink events and trace hashing."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional

from .taint import TaintLabel

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
_MASK = (1 << 64) - 1

CODE_PREVIEW = 64

TERMINATIONS = ("completed", "budget_exhausted", "error")


def fnv1a64(data: bytes) -> int:
    h = FNV_OFFSET
    for b in data:
        h ^= b
        h = (h * FNV_PRIME) & _MASK
    return h


@dataclass
class SinkEvent:
    realm: str
    code: str
    taint: Optional[TaintLabel]
    ordinal: int
    marker_hits: list[str] = field(default_factory=list)
    api: str = "eval"

    @property
    def tainted(self) -> bool:
        return self.taint is not None

    def to_json(self) -> dict:
        return {
            "realm": self.realm,
            "ordinal": self.ordinal,
            "api": self.api,
            "code": self.code,
            "marker_hits": list(self.marker_hits),
            "taint": None if self.taint is None else self.taint.to_json(),
        }


@dataclass
class ExecutionTrace:
    records: list[dict] = field(default_factory=list)
    sinks: list[SinkEvent] = field(default_factory=list)
    termination: str = "completed"
    errors: list[dict] = field(default_factory=list)

    def append(self, rtype: str, **data: Any) -> int:
        ordinal = len(self.records)
        self.records.append({"ordinal": ordinal, "type": rtype, **data})
        return ordinal

    @property
    def next_ordinal(self) -> int:
        return len(self.records)

    def of_type(self, *types: str) -> list[dict]:
        return [r for r in self.records if r["type"] in types]

    def record(self, ordinal: int) -> dict:
        return self.records[ordinal]

    def sink_codes(self) -> list[str]:
        return [s.code for s in self.sinks]

    def lines(self) -> list[str]:
        return [json.dumps(r, sort_keys=True, separators=(",", ":")) for r in self.records]

    @property
    def trace_hash(self) -> str:
        data = "\n".join(self.lines()).encode("utf-8")
        return f"{fnv1a64(data):016x}"

    def summary(self) -> dict:
        return {
            "type": "summary",
            "sink_count": len(self.sinks),
            "termination": self.termination,
            "trace_hash": self.trace_hash,
        }

    def to_jsonl(self) -> str:
        out = self.lines()
        out.append(json.dumps(self.summary(), sort_keys=True, separators=(",", ":")))
        return "\n".join(out) + "\n"


def code_hash(code: str) -> str:
    return f"{fnv1a64(code.encode('utf-8', 'surrogatepass')):016x}"


def preview(text: str, limit: int = CODE_PREVIEW) -> str:
    return text if len(text) <= limit else text[:limit] + "..."


def summarize_args(args: Iterable[Any]) -> list:
    from .values import to_python

    out = []
    for a in args:
        v = to_python(a)
        if isinstance(v, str):
            v = preview(v, 32)
        elif isinstance(v, (list, dict)):
            v = preview(json.dumps(v, sort_keys=True), 32)
        out.append(v)
    return out
