"""Semi-static features and the weighted-score classifier."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Iterable

from ..js import nodes as n
from ..js.parser import parse_source
from ..js.query import is_call_to, is_method_call, query
from ..js.source import FileSet
from .verdict import Verdict

DETECTOR_ID = "semistatic"
DECODERS = ("decodeURIComponent", "decodeURI")


@dataclass(frozen=True)
class FeatureVector:
    eval_count: int = 0
    unescape_count: int = 0
    decode_count: int = 0
    doc_write_count: int = 0
    max_string_literal_len: int = 0
    max_static_loop_bound: int = 0
    long_string_flag: bool = False

    def __post_init__(self) -> None:
        for f in fields(self):
            if f.name != "long_string_flag" and getattr(self, f.name) < 0:
                raise ValueError(f"{f.name} must be >= 0")

    def to_json(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SemistaticConfig:
    eval_weight: float = 2
    unescape_weight: float = 2
    decode_weight: float = 1
    doc_write_weight: float = 1
    long_string_weight: float = 3
    long_string_threshold: int = 1024
    loop_bound_threshold: int = 10000
    loop_bound_weight: float = 2
    threshold: float = 5
    suspicious_threshold: float = 3

    @classmethod
    def load(cls, path: str | Path) -> "SemistaticConfig":
        return cls(**json.loads(Path(path).read_text(encoding="utf-8")))


def _loop_bound(test: n.Node | None) -> int:
    # only "ident < literal" style tests; ".length < N" is a growth loop, not a count
    if not isinstance(test, n.Binary):
        return 0
    if test.op in ("<", "<=") and isinstance(test.left, n.Identifier) and isinstance(test.right, n.NumberLit):
        return int(test.right.value)
    if test.op in (">", ">=") and isinstance(test.right, n.Identifier) and isinstance(test.left, n.NumberLit):
        return int(test.left.value)
    return 0


def _doc_write(node: n.Node) -> bool:
    return is_method_call("document", "write")(node) or is_method_call("document", "writeln")(node)


def extract_features(source: n.Program | FileSet | Iterable[n.Program],
                     long_string_threshold: int = 1024) -> FeatureVector:
    """Counts over one tree, or over every script of a file set."""
    if isinstance(source, n.Program):
        programs = [source]
    elif isinstance(source, FileSet):
        programs = [parse_source(f.body, f.id) for f in source.scripts()]
    else:
        programs = list(source)
    counts = dict(eval_count=0, unescape_count=0, decode_count=0, doc_write_count=0)
    max_lit = max_bound = 0
    for prog in programs:
        counts["eval_count"] += len(query(prog, is_call_to("eval")))
        counts["unescape_count"] += len(query(prog, is_call_to("unescape")))
        counts["decode_count"] += sum(len(query(prog, is_call_to(d))) for d in DECODERS)
        counts["doc_write_count"] += len(query(prog, _doc_write))
        for lit in query(prog, lambda x: isinstance(x, n.StringLit)):
            max_lit = max(max_lit, len(lit.value))
        for loop in query(prog, lambda x: isinstance(x, (n.For, n.While))):
            max_bound = max(max_bound, _loop_bound(loop.test))
    return FeatureVector(**counts, max_string_literal_len=max_lit, max_static_loop_bound=max_bound,
                         long_string_flag=max_lit >= long_string_threshold)


def score(fv: FeatureVector, cfg: SemistaticConfig) -> tuple[float, list[str]]:
    parts = [
        ("eval", fv.eval_count, cfg.eval_weight),
        ("unescape", fv.unescape_count, cfg.unescape_weight),
        ("decode", fv.decode_count, cfg.decode_weight),
        ("document.write", fv.doc_write_count, cfg.doc_write_weight),
        ("long string literal", int(fv.max_string_literal_len >= cfg.long_string_threshold), cfg.long_string_weight),
        ("long static loop", int(fv.max_static_loop_bound >= cfg.loop_bound_threshold), cfg.loop_bound_weight),
    ]
    total = 0.0
    evidence = []
    for name, count, weight in parts:
        if count:
            total += count * weight
            evidence.append(f"{name} x{count} (+{count * weight:g})")
    return total, evidence


def classify_semistatic(fv: FeatureVector, cfg: SemistaticConfig = SemistaticConfig(),
                        sample_id: str = "") -> Verdict:
    total, evidence = score(fv, cfg)
    if total >= cfg.threshold:
        label = "malicious"
    elif total >= cfg.suspicious_threshold:
        label = "suspicious"
    else:
        label = "benign"
    return Verdict(DETECTOR_ID, sample_id, label, tuple(evidence), total)
