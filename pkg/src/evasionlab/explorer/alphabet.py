"""Event alphabets discovered from a page's listener registrations."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Iterator

from ..emulator.config import EnvConfig, EventDescriptor
from ..emulator.errors import BudgetExhausted
from ..emulator.runtime import run_page
from ..emulator.values import ProbeNumber
from ..js.source import FileSet

# fields whose compared values become separate templates
PROBED_FIELDS = ("which",)
PROBE_VALUE = -7351.0


@dataclass(frozen=True)
class EventAlphabet:
    events: tuple[EventDescriptor, ...] = ()

    def __len__(self) -> int:
        return len(self.events)

    def kinds(self) -> list[str]:
        return sorted({e.kind for e in self.events})

    def to_json(self) -> list[dict]:
        return [e.to_json() for e in self.events]


def _sort_key(ev: EventDescriptor) -> tuple:
    return ev.kind, tuple((k, str(v)) for k, v in ev.payload)


def _trace_of(files: FileSet, env: EnvConfig, probe_log: list | None = None):
    try:
        return run_page(files, env, probe_log=probe_log)
    except BudgetExhausted as exc:
        return exc.trace


def _number(v: float):
    return int(v) if float(v).is_integer() else v


def discover_alphabet(files: FileSet, env: EnvConfig = EnvConfig()) -> EventAlphabet:
    """Listener kinds of the page realm; key events expand to one template per compared key code."""
    trace = _trace_of(files, replace(env, event_trace=()))
    kinds = sorted({r["kind"] for r in trace.of_type("listener") if r["realm"] == "page"})
    events: list[EventDescriptor] = []
    for kind in kinds:
        values: set = set()
        for fname in PROBED_FIELDS:
            log: list = []
            probe = EventDescriptor.of(kind, **{fname: ProbeNumber(PROBE_VALUE)})
            _trace_of(files, replace(env, event_trace=(probe,)), log)
            values |= {(fname, _number(v)) for v in log if isinstance(v, float) and v == v}
        if values:
            events += [EventDescriptor.of(kind, **{f: v}) for f, v in values]
        else:
            events.append(EventDescriptor(kind))
    return EventAlphabet(tuple(sorted(set(events), key=_sort_key)))


def enumerate_sequences(alphabet: EventAlphabet, depth: int) -> Iterator[tuple[EventDescriptor, ...]]:
    """All sequences of length 0..depth, shortest first, then lexicographic."""
    events = sorted(alphabet.events, key=_sort_key)
    for length in range(depth + 1):
        yield from itertools.product(events, repeat=length)
