"""Run configuration: environment, events and the WebSocket feed."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

DEFAULT_STEP_BUDGET = 5_000_000
DEFAULT_STRING_CAP = 1 << 22
DEFAULT_MARKER_PATTERN = r"EVLAB-MARKER-[A-Za-z0-9]+"


@dataclass(frozen=True)
class EventDescriptor:
    kind: str
    payload: tuple = ()  # sorted (field, value) pairs, hashable

    def __post_init__(self) -> None:
        if not self.kind:
            raise ValueError("event kind must be non-empty")
        if isinstance(self.payload, dict):
            object.__setattr__(self, "payload", tuple(sorted(self.payload.items())))

    @classmethod
    def of(cls, kind: str, **payload: Any) -> "EventDescriptor":
        return cls(kind, tuple(sorted(payload.items())))

    @property
    def fields(self) -> dict:
        return dict(self.payload)

    def to_json(self) -> dict:
        return {"kind": self.kind, **dict(self.payload)}

    @classmethod
    def from_json(cls, data: dict) -> "EventDescriptor":
        data = dict(data)
        kind = data.pop("kind")
        return cls(kind, tuple(sorted(data.items())))

    def __str__(self) -> str:
        args = ",".join(f"{k}={v}" for k, v in self.payload)
        return f"{self.kind}({args})" if args else self.kind


@dataclass(frozen=True)
class FeedMessage:
    payload: str
    id: Optional[int] = None
    # sockets receive messages whose channel matches the last path segment of their URL
    channel: str = "ws"

    def to_json(self) -> dict:
        out: dict = {"id": self.id, "payload": self.payload}
        if self.channel != "ws":
            out["channel"] = self.channel
        return out


FRAMINGS = ("object", "text")


@dataclass(frozen=True)
class FeedScript:
    messages: tuple = ()
    close_after: bool = True
    # "object": evt.data is {id, chunk}; "text": evt.data is the payload string
    framing: str = "object"

    def __post_init__(self) -> None:
        if self.framing not in FRAMINGS:
            raise ValueError(f"unknown framing {self.framing!r}")
        if not isinstance(self.messages, tuple):
            object.__setattr__(self, "messages", tuple(self.messages))

    def for_channel(self, channel: str) -> list[FeedMessage]:
        return [m for m in self.messages if m.channel == channel]

    def to_json(self) -> dict:
        out: dict = {"messages": [m.to_json() for m in self.messages], "close_after": self.close_after}
        if self.framing != "object":
            out["framing"] = self.framing
        return out

    @classmethod
    def from_json(cls, data: dict) -> "FeedScript":
        msgs = tuple(
            FeedMessage(m["payload"], m.get("id"), m.get("channel", "ws")) for m in data.get("messages", [])
        )
        return cls(msgs, bool(data.get("close_after", True)), data.get("framing", "object"))

    @classmethod
    def load(cls, path: str | Path) -> "FeedScript":
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass(frozen=True)
class EnvConfig:
    schedule_seed: int = 0
    event_trace: tuple = ()
    # multiplies the step budget and the string cap
    scale: float = 1.0
    step_budget: int = DEFAULT_STEP_BUDGET
    feed: FeedScript = field(default_factory=FeedScript)
    # False models a honeyclient that lacks the HTML5 host objects
    html5: bool = True
    marker_pattern: str = DEFAULT_MARKER_PATTERN
    # raise ScriptError on the first uncaught script error instead of recording it
    strict: bool = False
    string_cap: int = DEFAULT_STRING_CAP

    def __post_init__(self) -> None:
        if self.step_budget <= 0:
            raise ValueError("step_budget must be positive")
        if self.scale <= 0:
            raise ValueError("scale must be positive")
        if not isinstance(self.event_trace, tuple):
            object.__setattr__(self, "event_trace", tuple(self.event_trace))

    @property
    def effective_step_budget(self) -> int:
        return max(1, int(self.step_budget * self.scale))

    @property
    def effective_string_cap(self) -> int:
        return max(1, int(self.string_cap * self.scale))
