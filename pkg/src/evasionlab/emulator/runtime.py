"""Emulated browser: realms, messaging, events, sinks and the run loop."""

from __future__ import annotations

import json
import re
import sys
import zlib
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from ..js import nodes as n
from ..js.parser import parse_source
from ..js.source import FileSet
from .config import EnvConfig, EventDescriptor
from .errors import BudgetExhausted, CloneError, ScriptError
from .interp import Interpreter, Scope
from .scheduler import Scheduler, Task
from .storage import IdbDatabase, LocalStore
from .taint import CROSS_WORKER, TaintLabel, new_label, taint_of
from .trace import ExecutionTrace, SinkEvent, code_hash, preview
from .values import (
    CALLABLE, UNDEFINED, HostFunction, HostObject, JSObject, ProbeNumber, add_label,
    from_python, map_strings, structured_clone, to_python,
)
from .websql import DbState

if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)


@dataclass(frozen=True)
class TaintPolicy:
    """Which taint sources the run introduces."""

    network: bool = True
    cross_worker: bool = True
    storage: bool = True


# decides whether a naturally-false ``if`` is forced into its consequent
GuardOracle = Callable[[n.If, str], bool]


@dataclass
class Realm:
    id: str
    kind: str  # page | worker
    scope: Scope
    parent: Optional[str] = None
    # Worker object in the parent realm standing for this realm
    handle: Optional[HostObject] = None
    listeners: dict[str, list] = field(default_factory=dict)
    document: Optional[HostObject] = None
    rng_seed: int = 0


@dataclass
class OriginState:
    """Storage shared by all realms of the page's origin."""

    local: LocalStore = field(default_factory=LocalStore)
    sql: dict[str, DbState] = field(default_factory=dict)
    idb: dict[str, IdbDatabase] = field(default_factory=dict)


def file_basename(path: str) -> str:
    return path.rstrip("/").rsplit("/", 1)[-1]


class Emulator:
    """One run of a FileSet under an EnvConfig.  Not reusable."""

    def __init__(self, files: FileSet, env: EnvConfig, policy: Optional[TaintPolicy] = None,
                 guard_oracle: Optional[GuardOracle] = None,
                 probe_log: Optional[list] = None):
        self.files = files
        self.env = env
        self.policy = policy or TaintPolicy()
        self.guard_oracle = guard_oracle
        self.probe_log = probe_log
        self.trace = ExecutionTrace()
        self.scheduler = Scheduler(env.schedule_seed)
        self.interp = Interpreter(self, env.effective_step_budget, env.effective_string_cap)
        self.realms: dict[str, Realm] = {}
        self.current: Optional[Realm] = None
        self.origin = OriginState()
        self.marker_re = re.compile(env.marker_pattern)
        self._programs: dict[str, n.Program] = {}
        self._ran = False

    # -- Host protocol ---------------------------------------------------

    @property
    def realm_id(self) -> str:
        return self.current.id if self.current is not None else ""

    def global_scope(self) -> Scope:
        assert self.current is not None
        return self.current.scope

    def record_sink(self, code: str, api: str) -> None:
        hits = list(dict.fromkeys(self.marker_re.findall(code)))
        label = taint_of(code)
        raw = str.__str__(code)
        ordinal = self.trace.append(
            "sink",
            realm=self.realm_id,
            api=api,
            code=preview(raw),
            code_len=len(raw),
            code_hash=code_hash(raw),
            marker_hits=hits,
            sources=sorted(label.sources) if label is not None else [],
        )
        self.trace.sinks.append(SinkEvent(self.realm_id, raw, label, ordinal, hits, api))

    def guard_decision(self, node: n.If, natural: bool) -> bool:
        if natural:
            return True
        if self.guard_oracle is not None and self.guard_oracle(node, self.realm_id):
            span = node.span
            self.trace.append(
                "guard_forced",
                realm=self.realm_id,
                source=span.source_id if span else "",
                start=span.start_offset if span else -1,
                end=span.end_offset if span else -1,
                original=False,
                forced=True,
            )
            return True
        return False

    def observe_probe(self, other: Any) -> None:
        if self.probe_log is not None and not isinstance(other, ProbeNumber):
            self.probe_log.append(other)

    # -- tracing helpers -------------------------------------------------

    def host_call(self, api: str, args: list = ()) -> int:
        from .trace import summarize_args

        return self.trace.append("host_call", realm=self.realm_id, api=api, args=summarize_args(args))

    def record_error(self, err: ScriptError) -> None:
        span = err.span
        record = {
            "realm": err.realm or self.realm_id,
            "kind": err.kind,
            "message": err.message,
            "source": span.source_id if span else "",
            "start": span.start_offset if span else -1,
        }
        self.trace.append("error", **record)
        self.trace.errors.append(record)

    # -- realms ----------------------------------------------------------

    def program_for(self, file_id: str) -> n.Program:
        prog = self._programs.get(file_id)
        if prog is None:
            prog = parse_source(self.files[file_id].body, source_id=file_id)
            self._programs[file_id] = prog
        return prog

    def resolve_script(self, url: str) -> Optional[str]:
        if url in self.files:
            return url
        base = file_basename(url)
        for f in self.files:
            if f.role == "worker" and file_basename(f.id) == base:
                return f.id
        return None

    def new_realm(self, rid: str, kind: str, parent: Optional[str] = None) -> Realm:
        from . import hosts

        base, k = rid, 1
        while rid in self.realms:
            k += 1
            rid = f"{base}#{k}"
        realm = Realm(rid, kind, Scope(), parent, rng_seed=zlib.crc32(rid.encode()))
        self.realms[rid] = realm
        hosts.install(self, realm)
        return realm

    def in_realm(self, realm: Realm, fn: Callable[[], Any]) -> Any:
        prev = self.current
        self.current = realm
        try:
            return fn()
        finally:
            self.current = prev

    def enqueue(self, realm: Realm, fn: Callable[[], None], label: str = "") -> Task:
        return self.scheduler.enqueue(realm.id, fn, label)

    def call_handler(self, fn: Any, args: list) -> Any:
        """Invoke a script callback if it is callable; ignore otherwise."""
        if isinstance(fn, CALLABLE):
            return self.interp.call(fn, UNDEFINED, args)
        return UNDEFINED

    def spawn_worker(self, url: str, handle: HostObject) -> Realm:
        file_id = self.resolve_script(url)
        if file_id is None:
            raise self.interp.error("NetworkError", f"no worker script {url!r}")
        realm = self.new_realm(file_id, "worker", parent=self.realm_id)
        realm.handle = handle

        def start() -> None:
            self.trace.append("worker_start", realm=realm.id, script=file_id, parent=realm.parent)
            self.interp.run_program(self.program_for(file_id), realm.scope)

        self.enqueue(realm, start, f"start {realm.id}")
        return realm

    # -- messaging -------------------------------------------------------

    def deliver_message(self, src: str, dst: str, value: Any) -> None:
        """Structured-clone ``value`` and queue its delivery on realm ``dst``."""
        try:
            clone = structured_clone(value)
        except CloneError as exc:
            raise self.interp.error("DataCloneError", str(exc)) from None
        size = len(json.dumps(to_python(clone), sort_keys=True))
        self.trace.append("message", **{"from": src, "to": dst, "size": size})
        target = self.realms[dst]

        def deliver() -> None:
            ordinal = self.trace.append("message_in", realm=dst, **{"from": src})
            data = clone
            if self.policy.cross_worker:
                label = new_label(CROSS_WORKER, "onmessage", ordinal)
                data = map_strings(clone, lambda s: add_label(s, label))
            evt = JSObject({"data": data, "type": "message"})
            if target.kind == "worker" and target.parent == src:
                handler = target.scope.vars.get("onmessage", UNDEFINED)
            else:
                source_realm = self.realms[src]
                handler = source_realm.handle.get("onmessage") if source_realm.handle else UNDEFINED
            self.call_handler(handler, [evt])

        self.enqueue(target, deliver, f"message {src}->{dst}")

    # -- events ----------------------------------------------------------

    def add_listener(self, realm: Realm, kind: str, fn: Any, target: str, via: str) -> None:
        realm.listeners.setdefault(kind, []).append(fn)
        self.trace.append("listener", realm=realm.id, kind=kind, target=target, via=via)

    def remove_listener(self, realm: Realm, kind: str, fn: Any) -> None:
        lst = realm.listeners.get(kind, [])
        for i, f in enumerate(lst):
            if f is fn:
                del lst[i]
                return

    def event_object(self, ev: EventDescriptor) -> JSObject:
        props: dict[str, Any] = {"type": ev.kind}
        for k, v in ev.payload:
            props[k] = v if isinstance(v, ProbeNumber) else from_python(v)
        if "which" in props and "keyCode" not in props:
            props["keyCode"] = props["which"]
        elif "keyCode" in props and "which" not in props:
            props["which"] = props["keyCode"]
        noop = HostFunction("preventDefault", lambda i, t, a: UNDEFINED)
        props["preventDefault"] = noop
        props["stopPropagation"] = noop
        return JSObject(props, "Event")

    def dispatch_event(self, realm: Realm, kind: str, event: JSObject, origin: str) -> None:
        """Run every listener registered for ``kind`` in registration order."""
        payload = {k: to_python(v) for k, v in event.props.items()
                   if k != "type" and not isinstance(v, (JSObject,))}
        self.trace.append("event", realm=realm.id, kind=kind, origin=origin, payload=payload)
        for fn in list(realm.listeners.get(kind, [])):
            self.call_handler(fn, [event])

    # -- running ---------------------------------------------------------

    def _execute(self, task: Task) -> None:
        realm = self.realms[task.realm]
        self.current = realm
        try:
            task.fn()
        except ScriptError as err:
            self.record_error(err)
            if self.env.strict:
                raise
        finally:
            self.current = None

    def run(self) -> ExecutionTrace:
        if self._ran:
            raise RuntimeError("an Emulator instance runs once")
        self._ran = True
        page_file = self.files.page
        program = self.program_for(page_file.id)
        page = self.new_realm("page", "page")

        def main() -> None:
            self.interp.run_program(program, page.scope)

        try:
            self.scheduler.enqueue(page.id, main, "page script")
            self.scheduler.run(self._execute)
            for ev in self.env.event_trace:
                self.scheduler.enqueue(page.id, self._external_event(page, ev), f"event {ev.kind}")
                self.scheduler.run(self._execute)
        except BudgetExhausted as exc:
            self.trace.termination = "budget_exhausted"
            self.trace.append("termination", reason="budget_exhausted", detail=str(exc))
            exc.trace = self.trace
            raise
        self.trace.termination = "error" if self.trace.errors else "completed"
        return self.trace

    def _external_event(self, page: Realm, ev: EventDescriptor) -> Callable[[], None]:
        def fire() -> None:
            self.dispatch_event(page, ev.kind, self.event_object(ev), "user")
        return fire


def run_page(files: FileSet, env: Optional[EnvConfig] = None, *, policy: Optional[TaintPolicy] = None,
             guard_oracle: Optional[GuardOracle] = None, probe_log: Optional[list] = None) -> ExecutionTrace:
    """Execute ``files`` to quiescence and return the execution trace.

    Uncaught script errors abort their task and are recorded; the run goes on
    and terminates with reason ``error`` (``env.strict`` raises instead).
    ``BudgetExhausted`` always propagates, carrying the partial trace.
    """
    emu = Emulator(files, env or EnvConfig(), policy, guard_oracle, probe_log)
    return emu.run()
