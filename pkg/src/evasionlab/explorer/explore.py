"""Trigger exploration: enumerate event sequences, or force event-derived guards."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

from ..emulator.config import EnvConfig, EventDescriptor
from ..emulator.errors import BudgetExhausted
from ..emulator.runtime import run_page
from ..emulator.trace import ExecutionTrace, SinkEvent
from ..js import nodes as n
from ..js.parser import parse_source
from ..js.query import query
from ..js.source import FileSet
from .alphabet import EventAlphabet, discover_alphabet, enumerate_sequences

SinkPredicate = Callable[[SinkEvent], bool]


def has_marker(sink: SinkEvent) -> bool:
    return bool(sink.marker_hits)


@dataclass(frozen=True)
class ExplorationBudget:
    max_sequences: int = 10_000
    max_depth: int = 3
    step_budget: int = 5_000_000

    def __post_init__(self) -> None:
        if self.max_sequences < 1 or self.max_depth < 0 or self.step_budget < 1:
            raise ValueError("exploration budget values must be positive")


@dataclass
class ExplorationReport:
    mode: str  # enumerate | guard_force
    sequences_tried: int = 0
    triggering_trace: tuple[EventDescriptor, ...] | None = None
    sink_events: list[SinkEvent] = field(default_factory=list)
    # (span json, original branch, forced branch)
    guards_forced: list[tuple[dict, bool, bool]] = field(default_factory=list)
    budget_exhausted_runs: int = 0
    alphabet: EventAlphabet = field(default_factory=EventAlphabet)

    @property
    def found(self) -> bool:
        return any(s.marker_hits for s in self.sink_events)

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "sequences_tried": self.sequences_tried,
            "triggering_trace": None if self.triggering_trace is None
            else [e.to_json() for e in self.triggering_trace],
            "sink_events": [
                {"realm": s.realm, "ordinal": s.ordinal, "api": s.api, "code_len": len(s.code),
                 "marker_hits": list(s.marker_hits)}
                for s in self.sink_events
            ],
            "guards_forced": [{"span": sp, "original": o, "forced": f} for sp, o, f in self.guards_forced],
            "budget_exhausted_runs": self.budget_exhausted_runs,
            "alphabet": self.alphabet.to_json(),
        }


def _run(files: FileSet, env: EnvConfig, **kw) -> tuple[ExecutionTrace, bool]:
    try:
        return run_page(files, env, **kw), False
    except BudgetExhausted as exc:
        return exc.trace, True


def explore(files: FileSet, budget: ExplorationBudget = ExplorationBudget(), env: EnvConfig = EnvConfig(),
            predicate: SinkPredicate = has_marker, alphabet: EventAlphabet | None = None) -> ExplorationReport:
    """Replay sequences breadth-first until a sink satisfies ``predicate``."""
    run_env = replace(env, step_budget=budget.step_budget)
    alphabet = alphabet if alphabet is not None else discover_alphabet(files, run_env)
    report = ExplorationReport("enumerate", alphabet=alphabet)
    for seq in enumerate_sequences(alphabet, budget.max_depth):
        if report.sequences_tried >= budget.max_sequences:
            break
        report.sequences_tried += 1
        trace, exhausted = _run(files, replace(run_env, event_trace=seq))
        report.budget_exhausted_runs += exhausted
        hits = [s for s in trace.sinks if predicate(s)]
        if hits:
            report.triggering_trace = tuple(seq)
            report.sink_events = hits
            break
    return report


# -- guard forcing -------------------------------------------------------------


def _function_table(programs: list[n.Program]) -> dict[str, n.FunctionDecl]:
    table = {}
    for prog in programs:
        for fn in query(prog, lambda x: isinstance(x, n.FunctionDecl)):
            table.setdefault(fn.name, fn)
    return table


def _is_registration(call: n.Call) -> bool:
    callee = call.callee
    return (isinstance(callee, n.Member) and not callee.computed
            and callee.property == "addEventListener" and len(call.args) >= 2)


def _is_dom_target(node: n.Node) -> bool:
    return isinstance(node, n.Identifier) and node.name in ("document", "window")


def handler_roots(programs: list[n.Program], table: dict[str, n.FunctionDecl]) -> list[n.Node]:
    """Functions registered as DOM event listeners (addEventListener or onX on document/window)."""
    roots: list[n.Node] = []

    def resolve(expr: n.Node) -> None:
        if isinstance(expr, n.FunctionExpr):
            roots.append(expr)
        elif isinstance(expr, n.Identifier) and expr.name in table:
            roots.append(table[expr.name])

    for prog in programs:
        for call in query(prog, lambda x: isinstance(x, n.Call)):
            if _is_registration(call) and _is_dom_target(call.callee.object):
                resolve(call.args[1])
        for asg in query(prog, lambda x: isinstance(x, n.Assign)):
            t = asg.target
            if (isinstance(t, n.Member) and not t.computed and isinstance(t.property, str)
                    and t.property.startswith("on") and _is_dom_target(t.object)):
                resolve(asg.value)
    return roots


def _locals(fn: n.Node) -> set[str]:
    names = set(getattr(fn, "params", []))
    for decl in query(n.Program(list(fn.body)), lambda x: isinstance(x, n.Declarator)):
        names.add(decl.name)
    return names


def handler_written_globals(programs: list[n.Program]) -> set[str]:
    """Non-local variables assigned by event handlers or functions they call."""
    table = _function_table(programs)
    pending = handler_roots(programs, table)
    seen: set[int] = set()
    written: set[str] = set()
    while pending:
        fn = pending.pop()
        if id(fn) in seen:
            continue
        seen.add(id(fn))
        local = _locals(fn)
        body = n.Program(list(fn.body))
        for node in query(body, lambda x: isinstance(x, (n.Assign, n.Update))):
            target = node.target if isinstance(node, n.Assign) else node.argument
            if isinstance(target, n.Identifier) and target.name not in local:
                written.add(target.name)
        for call in query(body, lambda x: isinstance(x, n.Call) and isinstance(x.callee, n.Identifier)):
            callee = table.get(call.callee.name)
            if callee is not None:
                pending.append(callee)
    return written


def forcible_guards(files: FileSet) -> set[tuple[str, int, int]]:
    """Spans of ``if`` statements whose test reads a handler-written variable."""
    programs = [parse_source(f.body, f.id) for f in files.scripts()]
    written = handler_written_globals(programs)
    out = set()
    for prog in programs:
        for stmt in query(prog, lambda x: isinstance(x, n.If)):
            names = {i.name for i in query(stmt.test, lambda x: isinstance(x, n.Identifier))}
            if names & written and stmt.span is not None:
                out.add((stmt.span.source_id, stmt.span.start_offset, stmt.span.end_offset))
    return out


def sweep_trace(alphabet: EventAlphabet, rounds: int = 2) -> tuple[EventDescriptor, ...]:
    return tuple(alphabet.events) * rounds


def force_guards(files: FileSet, env: EnvConfig = EnvConfig(), predicate: SinkPredicate = has_marker) -> ExplorationReport:
    """Run once with event-derived guards forced into their taken branch.

    The events are ``env.event_trace`` when given, otherwise every
    discovered event, twice over, so handlers run both before and after
    state they depend on has been set.
    """
    guards = forcible_guards(files)
    alphabet = discover_alphabet(files, env) if not env.event_trace else EventAlphabet()
    events = env.event_trace or sweep_trace(alphabet)

    def oracle(node: n.If, realm: str) -> bool:
        sp = node.span
        return sp is not None and (sp.source_id, sp.start_offset, sp.end_offset) in guards

    trace, exhausted = _run(files, replace(env, event_trace=events), guard_oracle=oracle)
    forced: dict[tuple, tuple[dict, bool, bool]] = {}
    for r in trace.of_type("guard_forced"):
        key = (r["source"], r["start"], r["end"])
        forced.setdefault(key, ({"source": r["source"], "start": r["start"], "end": r["end"]},
                                r["original"], r["forced"]))
    hits = [s for s in trace.sinks if predicate(s)]
    return ExplorationReport(
        "guard_force",
        sequences_tried=1,
        triggering_trace=tuple(events) if hits else None,
        sink_events=list(trace.sinks),
        guards_forced=list(forced.values()),
        budget_exhausted_runs=int(exhausted),
        alphabet=alphabet,
    )
