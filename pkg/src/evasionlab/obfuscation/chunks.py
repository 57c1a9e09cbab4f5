"""Splitting a payload into id-numbered chunks."""

from __future__ import annotations

from dataclasses import dataclass

from ..js import nodes as n
from ..js.parser import ParseError, parse_source
from ..js.tokens import LexError

MODES = ("fixed_size", "statement_boundary")


class EmptyPayload(ValueError):
    pass


class UnsupportedConstruct(ValueError):
    """The annotated region does not parse as a program of the subset."""


@dataclass(frozen=True)
class ChunkPolicy:
    mode: str = "fixed_size"
    chunk_size: int = 16
    # decides the wire order of shuffled feeds; ids are always 0..n-1 in text order
    seed: int = 0

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"unknown chunk mode {self.mode!r}")
        if self.chunk_size < 1:
            raise ValueError("chunk_size must be >= 1")


@dataclass(frozen=True)
class ChunkPlan:
    chunks: tuple[tuple[int, str], ...]
    original_length: int

    def __post_init__(self) -> None:
        ids = [cid for cid, _ in self.chunks]
        if ids != list(range(len(ids))):
            raise ValueError("chunk ids must be 0..n-1 in order")

    def reassemble(self) -> str:
        return "".join(text for _, text in self.chunks)

    def __len__(self) -> int:
        return len(self.chunks)

    @property
    def max_chunk_len(self) -> int:
        return max((len(t) for _, t in self.chunks), default=0)

    def to_json(self) -> dict:
        return {"chunks": len(self.chunks), "original_length": self.original_length,
                "max_chunk_len": self.max_chunk_len}


def _statement_cuts(payload: str) -> list[int]:
    try:
        program = parse_source(payload)
    except (ParseError, LexError) as exc:
        raise UnsupportedConstruct(str(exc)) from exc
    cuts = [stmt.span.start_offset for stmt in program.body[1:] if stmt.span is not None]
    return [0, *cuts, len(payload)]


def split_payload(payload: str, policy: ChunkPolicy) -> ChunkPlan:
    """Cut ``payload`` into chunks whose in-order concatenation is the payload.

    ``statement_boundary`` cuts before every top-level statement, so each
    chunk is one statement plus the trivia preceding the next one.
    """
    if not payload:
        raise EmptyPayload("cannot split an empty payload")
    if policy.mode == "fixed_size":
        size = policy.chunk_size
        pieces = [payload[i:i + size] for i in range(0, len(payload), size)]
    else:
        cuts = _statement_cuts(payload)
        pieces = [payload[a:b] for a, b in zip(cuts, cuts[1:]) if b > a]
    return ChunkPlan(tuple(enumerate(pieces)), len(payload))


def check_region(text: str) -> n.Program:
    """Parse the annotated region on its own; it must be a complete program."""
    try:
        return parse_source(text)
    except (ParseError, LexError) as exc:
        raise UnsupportedConstruct(f"annotated region does not parse: {exc}") from exc
