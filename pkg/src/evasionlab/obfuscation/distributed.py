"""Distributed preparation: worker stages ordered by a dependency DAG.

Every contributing stage fetches its own slice of chunks over a WebSocket
channel named after the stage, prepends whatever its parents produced and
posts the result back to the realm that spawned it.  The page starts the
roots, waits for each join stage's parents through a custom ``Terminated``
event, and evaluates the launch stage's output.  A coordinator stage does
no fetching; it runs a chain of nested workers of its own.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from ..js.source import FileSet, SourceFile
from .bundle import StagedBundle, Technique, check_secrecy
from .chunks import ChunkPolicy, UnsupportedConstruct, split_payload
from .delegated import secrecy_limit, staging_metadata
from .sample import AnnotatedSample, server_prelude, with_loader
from ..emulator.config import FeedMessage, FeedScript

ROLES = ("fetch", "join", "launch", "coordinator")


class CyclicDag(ValueError):
    pass


@dataclass(frozen=True)
class StageNode:
    stage_id: str
    role: str
    # realm that spawns the stage: "page" or a coordinator's stage id
    host: str = "page"
    source: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.role not in ROLES:
            raise ValueError(f"unknown stage role {self.role!r}")

    @property
    def file_id(self) -> str:
        return f"{self.stage_id}.js"


@dataclass(frozen=True)
class WorkerDag:
    nodes: tuple[StageNode, ...]
    # (producer, consumer): the consumer receives the producer's output
    edges: tuple[tuple[str, str], ...]

    def node(self, stage_id: str) -> StageNode:
        for nd in self.nodes:
            if nd.stage_id == stage_id:
                return nd
        raise KeyError(stage_id)

    def parents(self, stage_id: str) -> list[str]:
        return [a for a, b in self.edges if b == stage_id]

    def children(self, stage_id: str) -> list[str]:
        return [b for a, b in self.edges if a == stage_id]

    def hosted_by(self, host: str) -> list[StageNode]:
        return [nd for nd in self.nodes if nd.host == host]

    def topological(self) -> list[str]:
        """Stage ids in dependency order; raises CyclicDag."""
        ids = [nd.stage_id for nd in self.nodes]
        indeg = {i: len(self.parents(i)) for i in ids}
        ready = [i for i in ids if indeg[i] == 0]
        order = []
        while ready:
            cur = ready.pop(0)
            order.append(cur)
            for child in self.children(cur):
                indeg[child] -= 1
                if indeg[child] == 0:
                    ready.append(child)
        if len(order) != len(ids):
            raise CyclicDag("worker dag has a cycle: " + ", ".join(i for i in ids if i not in order))
        return order

    def launch(self) -> StageNode:
        launches = [nd for nd in self.nodes if nd.role == "launch"]
        if len(launches) != 1:
            raise ValueError(f"a dag needs exactly one launch stage, found {len(launches)}")
        return launches[0]

    def validate(self) -> None:
        ids = [nd.stage_id for nd in self.nodes]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate stage ids")
        for a, b in self.edges:
            if a not in ids or b not in ids:
                raise ValueError(f"edge {a}->{b} names an unknown stage")
            if self.node(a).host != self.node(b).host:
                raise ValueError(f"edge {a}->{b} crosses realms")
        self.topological()
        launch = self.launch()
        if launch.host != "page" or self.children(launch.stage_id):
            raise ValueError("the launch stage must be a page-hosted sink")
        for nd in self.nodes:
            if nd.host != "page" and self.node(nd.host).role != "coordinator":
                raise ValueError(f"{nd.stage_id} is hosted by a non-coordinator")
            if nd.role == "coordinator":
                self.chain(nd.stage_id)
            if nd.host == "page" and nd.role in ("join", "launch") and not self.parents(nd.stage_id):
                raise ValueError(f"{nd.role} stage {nd.stage_id} has no parents")

    def chain(self, coordinator: str) -> list[str]:
        """The nested stages of a coordinator, which must form one chain."""
        members = [nd.stage_id for nd in self.hosted_by(coordinator)]
        if not members:
            raise ValueError(f"coordinator {coordinator} hosts no stages")
        heads = [m for m in members if not self.parents(m)]
        if len(heads) != 1:
            raise ValueError(f"nested stages of {coordinator} must form a chain")
        out = [heads[0]]
        while True:
            nxt = self.children(out[-1])
            if not nxt:
                break
            if len(nxt) > 1:
                raise ValueError(f"nested stages of {coordinator} must form a chain")
            out.append(nxt[0])
        if len(out) != len(members):
            raise ValueError(f"nested stages of {coordinator} must form a chain")
        return out

    def contribution_order(self) -> list[str]:
        """Stages that fetch chunks, in the order their slices appear in the output."""
        seen: list[str] = []

        def visit(stage_id: str) -> None:
            for p in self.parents(stage_id):
                visit(p)
            nd = self.node(stage_id)
            if nd.role == "coordinator":
                seen.extend(self.chain(stage_id))
            else:
                seen.append(stage_id)

        visit(self.launch().stage_id)
        if len(set(seen)) != len(seen):
            raise ValueError("stages with shared ancestors would duplicate output")
        return seen

    def to_json(self) -> dict:
        return {
            "nodes": [{"stage_id": nd.stage_id, "role": nd.role, "host": nd.host} for nd in self.nodes],
            "edges": [list(e) for e in self.edges],
        }


def default_dag() -> WorkerDag:
    """Two fetchers feeding a join stage whose output the launch stage completes."""
    return WorkerDag(
        (StageNode("ww1", "fetch"), StageNode("ww2", "fetch"), StageNode("ww3", "join"),
         StageNode("ww4", "launch")),
        (("ww1", "ww3"), ("ww2", "ww3"), ("ww3", "ww4")),
    )


def nested_dag() -> WorkerDag:
    """The default shape with the join stage delegating to a chain of nested workers."""
    return WorkerDag(
        (StageNode("ww1", "fetch"), StageNode("ww2", "fetch"), StageNode("ww3", "coordinator"),
         StageNode("ww3a", "join", "ww3"), StageNode("ww3b", "join", "ww3"),
         StageNode("ww3c", "join", "ww3"), StageNode("ww4", "launch")),
        (("ww1", "ww3"), ("ww2", "ww3"), ("ww3a", "ww3b"), ("ww3b", "ww3c"), ("ww3", "ww4")),
    )


def _result_check(parents: list[str]) -> str:
    return " && ".join(f'!!RESULTS["{p}"]' for p in parents)


def _parts(parents: list[str]) -> str:
    return ", ".join(f'RESULTS["{p}"]' for p in parents)


def page_loader(dag: WorkerDag) -> str:
    stages = dag.hosted_by("page")
    launch = dag.launch().stage_id
    lines = [
        "var RESULTS = {};",
        "var STARTED = {};",
        "var doc = document;",
        'var TERMEVT = doc.createEvent("Event");',
        'TERMEVT.initEvent("Terminated", true, true);',
    ]
    for nd in stages:
        sid = nd.stage_id
        lines.append(f'var {sid} = new Worker("{nd.file_id}");')
        if sid == launch:
            lines += [f"{sid}.onmessage = function (evt) {{", "    eval(evt.data.out);", "};"]
        else:
            lines += [
                f"{sid}.onmessage = function (evt) {{",
                f'    RESULTS["{sid}"] = evt.data.out;',
                "    document.dispatchEvent(TERMEVT);",
                "};",
            ]
    lines.append("function onTerminated(evt) {")
    for sid in dag.topological():
        parents = dag.parents(sid)
        if dag.node(sid).host != "page" or not parents:
            continue
        lines += [
            f'    if ({_result_check(parents)} && !STARTED["{sid}"]) {{',
            f'        STARTED["{sid}"] = true;',
            f"        {sid}.postMessage({{'parts': [{_parts(parents)}]}});",
            "    }",
        ]
    lines.append("}")
    lines.append('document.addEventListener("Terminated", onTerminated, false);')
    for nd in stages:
        if not dag.parents(nd.stage_id):
            lines.append(f"{nd.stage_id}.postMessage({{}});")
    return "\n".join(lines) + "\n"


def stage_script(stage_id: str) -> str:
    return server_prelude() + f"""var INPUT = "";
var OWN = [];
onmessage = function (evt) {{
    if (!!evt.data.parts)
        INPUT = evt.data.parts.join("");
    var ws = new WebSocket("ws://" + server + ":" + port + "/{stage_id}");
    ws.onmessage = function (evt) {{
        OWN.push(evt.data.chunk);
    }};
    ws.onclose = function () {{
        postMessage({{'out': INPUT + OWN.join("")}});
    }};
}};
"""


def coordinator_script(chain: list[str]) -> str:
    lines = ['var INPUT = "";', "onmessage = function (evt) {", '    INPUT = evt.data.parts.join("");']
    for sid in chain:
        lines.append(f'    var {sid} = new Worker("{sid}.js");')
    for cur, nxt in zip(chain, chain[1:]):
        lines += [
            f"    {cur}.onmessage = function (evt) {{",
            f"        {nxt}.postMessage({{'parts': [evt.data.out]}});",
            "    };",
        ]
    lines += [
        f"    {chain[-1]}.onmessage = function (evt) {{",
        "        postMessage({'out': evt.data.out});",
        "    };",
        f"    {chain[0]}.postMessage({{'parts': [INPUT]}});",
        "};",
    ]
    return "\n".join(lines) + "\n"


def assign_chunks(dag: WorkerDag, chunks: list[tuple[int, str]]) -> dict[str, list[tuple[int, str]]]:
    order = dag.contribution_order()
    k, count = len(order), len(chunks)
    return {sid: chunks[i * count // k:(i + 1) * count // k] for i, sid in enumerate(order)}


def simulate(dag: WorkerDag, slices: dict[str, list[tuple[int, str]]]) -> str:
    """Reassemble in Python exactly as the emitted scripts do."""

    def own(sid: str) -> str:
        return "".join(t for _, t in slices.get(sid, []))

    def output(sid: str) -> str:
        text = "".join(output(p) for p in dag.parents(sid))
        if dag.node(sid).role == "coordinator":
            for member in dag.chain(sid):
                text += own(member)
            return text
        return text + own(sid)

    return output(dag.launch().stage_id)


def plan_distributed(sample: AnnotatedSample, dag: WorkerDag | None = None,
                     policy: ChunkPolicy = ChunkPolicy()) -> StagedBundle:
    dag = dag or default_dag()
    dag.validate()
    sample.validate()
    region = sample.region_text
    contributors = len(dag.contribution_order())
    if len(region) < contributors:
        raise UnsupportedConstruct("region is shorter than the number of fetching stages")
    plan = split_payload(region, policy)
    if len(plan) < contributors:
        # every fetching stage needs at least one chunk
        plan = split_payload(region, replace(policy, mode="fixed_size", chunk_size=len(region) // contributors))
    slices = assign_chunks(dag, list(plan.chunks))
    if simulate(dag, slices) != region:
        raise AssertionError("dag reassembly does not reproduce the region")

    files = [SourceFile("page.js", with_loader(sample, page_loader(dag)), "page")]
    nodes = []
    for nd in dag.nodes:
        if nd.role == "coordinator":
            src = coordinator_script(dag.chain(nd.stage_id))
        else:
            src = stage_script(nd.stage_id)
        files.append(SourceFile(nd.file_id, src, "worker"))
        nodes.append(replace(nd, source=nd.file_id))
    fileset = FileSet(files)
    messages = [FeedMessage(text, cid, sid) for sid in dag.contribution_order() for cid, text in slices[sid]]
    check_secrecy(fileset, region, secrecy_limit(plan, policy))
    return StagedBundle(
        technique=Technique.DISTRIBUTED,
        sample_id=sample.id,
        files=fileset,
        feed=FeedScript(tuple(messages), True),
        chunk_size=policy.chunk_size,
        seed=policy.seed,
        metadata={
            "dag": WorkerDag(tuple(nodes), dag.edges).to_json(),
            "slices": {sid: [cid for cid, _ in slices[sid]] for sid in dag.contribution_order()},
            **staging_metadata(sample, plan),
        },
    )
