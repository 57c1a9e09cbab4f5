"""Static signatures: longest string literal and token windows around eval."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from ..js import nodes as n
from ..js.parser import parse_source
from ..js.query import is_call_to, query
from ..js.source import FileSet
from ..js.tokens import tokenize
from .verdict import Verdict

KINDS = ("literal_substring", "token_sequence")
WINDOW = 12
DETECTOR_ID = "signature"


@dataclass(frozen=True)
class Signature:
    id: str
    kind: str
    # literal text, or "kind:lexeme" tokens for token_sequence
    pattern: tuple[str, ...] | str
    source_sample: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown signature kind {self.kind!r}")
        if not self.pattern:
            raise ValueError("signature pattern must be non-empty")
        if self.kind == "token_sequence" and not isinstance(self.pattern, tuple):
            object.__setattr__(self, "pattern", tuple(self.pattern))

    def to_json(self) -> dict:
        pattern = list(self.pattern) if self.kind == "token_sequence" else self.pattern
        return {"id": self.id, "kind": self.kind, "pattern": pattern, "source_sample": self.source_sample}

    @classmethod
    def from_json(cls, data: dict) -> "Signature":
        pattern = data["pattern"]
        return cls(data["id"], data["kind"], tuple(pattern) if isinstance(pattern, list) else pattern,
                   data.get("source_sample"))


def _tok_key(tok) -> str:
    return f"{tok.kind}:{tok.lexeme}"


def _file_tokens(body: str, file_id: str) -> list:
    return [t for t in tokenize(body, file_id) if t.kind != "eof"]


def sample_signatures(sample_id: str, files: FileSet) -> list[Signature]:
    literal: str = ""
    windows: list[tuple[str, ...]] = []
    for f in files.scripts():
        program = parse_source(f.body, f.id)
        for lit in query(program, lambda x: isinstance(x, n.StringLit)):
            raw = lit.span.text(f.body)[1:-1]
            if len(raw) > len(literal):
                literal = raw
        tokens = _file_tokens(f.body, f.id)
        starts = {t.span.start_offset: i for i, t in enumerate(tokens)}
        for call in query(program, is_call_to("eval")):
            i = starts[call.span.start_offset]
            lo = max(0, i - WINDOW // 2)
            windows.append(tuple(_tok_key(t) for t in tokens[lo:lo + WINDOW]))
    sigs = []
    if literal:
        sigs.append(Signature(f"{sample_id}-lit", "literal_substring", literal, sample_id))
    for k, w in enumerate(windows):
        sigs.append(Signature(f"{sample_id}-tok{k}", "token_sequence", w, sample_id))
    return sigs


def build_signature_db(originals: Iterable[tuple[str, FileSet]]) -> list[Signature]:
    """Signatures from ``(sample id, files)`` pairs, deduplicated by pattern."""
    seen: set = set()
    db = []
    for sample_id, files in originals:
        for sig in sample_signatures(sample_id, files):
            key = (sig.kind, sig.pattern)
            if key not in seen:
                seen.add(key)
                db.append(sig)
    return db


def _find_sequence(keys: list[str], pattern: tuple[str, ...]) -> int:
    width = len(pattern)
    first = pattern[0]
    for i in range(len(keys) - width + 1):
        if keys[i] == first and tuple(keys[i:i + width]) == pattern:
            return i
    return -1


def scan_signatures(files: FileSet, db: list[Signature], sample_id: str = "") -> Verdict:
    """Malicious iff any signature matches any page or worker script."""
    evidence = []
    for f in files.scripts():
        tokens = None
        for sig in db:
            if sig.kind == "literal_substring":
                at = f.body.find(sig.pattern)
                if at >= 0:
                    evidence.append(f"{sig.id} at {f.id}:{at}-{at + len(sig.pattern)}")
            else:
                if tokens is None:
                    tokens = _file_tokens(f.body, f.id)
                    keys = [_tok_key(t) for t in tokens]
                i = _find_sequence(keys, sig.pattern)
                if i >= 0:
                    span = tokens[i].span.start_offset, tokens[i + len(sig.pattern) - 1].span.end_offset
                    evidence.append(f"{sig.id} at {f.id}:{span[0]}-{span[1]}")
    label = "malicious" if evidence else "benign"
    return Verdict(DETECTOR_ID, sample_id, label, tuple(evidence), float(len(evidence)))


def save_db(db: list[Signature], path: str | Path) -> None:
    Path(path).write_text(json.dumps([s.to_json() for s in db], indent=2) + "\n", encoding="utf-8")


def load_db(path: str | Path) -> list[Signature]:
    return [Signature.from_json(d) for d in json.loads(Path(path).read_text(encoding="utf-8"))]
