"""An inert sample with its manifest-annotated malicious region."""

from __future__ import annotations

import random
from dataclasses import dataclass

from ..emulator.config import EventDescriptor, FeedMessage, FeedScript
from ..js.source import FileSet, SourceSpan
from .chunks import ChunkPlan, check_region

SENTINEL_BEGIN = "/* @malicious-begin */"
SENTINEL_END = "/* @malicious-end */"

# the emulated server every loader connects to; nothing listens there
SERVER_HOST = "127.0.0.1"
SERVER_PORT = "8080"


def sentinel_span(text: str, source_id: str = "") -> SourceSpan:
    """Span from the begin sentinel through the end sentinel, inclusive."""
    start = text.find(SENTINEL_BEGIN)
    end = text.find(SENTINEL_END)
    if start < 0 or end < 0 or end < start:
        raise ValueError("sentinel comments missing or out of order")
    if text.find(SENTINEL_BEGIN, start + 1) >= 0 or text.find(SENTINEL_END, end + 1) >= 0:
        raise ValueError("sentinel comments must appear once")
    return SourceSpan(start, end + len(SENTINEL_END), source_id)


@dataclass(frozen=True)
class AnnotatedSample:
    id: str
    files: FileSet
    region_file: str
    region: SourceSpan
    marker: str
    required_event_trace: tuple[EventDescriptor, ...] = ()
    description: str = ""

    def __post_init__(self) -> None:
        body = self.files[self.region_file].body
        if self.region.end_offset > len(body):
            raise ValueError(f"region of {self.id} exceeds {self.region_file}")
        if self.region.start_offset == self.region.end_offset:
            raise ValueError(f"region of {self.id} is empty")

    @property
    def host_body(self) -> str:
        return self.files[self.region_file].body

    @property
    def region_text(self) -> str:
        return self.region.text(self.host_body)

    @property
    def prologue(self) -> str:
        return self.host_body[: self.region.start_offset]

    @property
    def epilogue(self) -> str:
        return self.host_body[self.region.end_offset:]

    def validate(self) -> None:
        check_region(self.region_text)


def with_loader(sample: AnnotatedSample, loader: str) -> str:
    """The sample's page with its malicious region replaced by ``loader``."""
    return sample.prologue + loader + sample.epilogue


def server_prelude() -> str:
    return f'var server = "{SERVER_HOST}";\nvar port = "{SERVER_PORT}";\n'


def feed_for(plan: ChunkPlan, *, shuffle_seed: int | None = None, channel: str = "ws",
             framing: str = "object") -> FeedScript:
    """Every chunk as one message; shuffled wire order when a seed is given."""
    messages = [FeedMessage(text, cid, channel) for cid, text in plan.chunks]
    if shuffle_seed is not None:
        random.Random(shuffle_seed).shuffle(messages)
    return FeedScript(tuple(messages), True, framing)
