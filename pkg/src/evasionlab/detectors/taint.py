"""The taint countermeasure: network data reaching eval, even through storage."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..emulator.config import EnvConfig
from ..emulator.runtime import TaintPolicy, run_page
from ..emulator.trace import ExecutionTrace
from ..js.source import FileSet
from .verdict import Verdict

DETECTOR_ID = "taint"


@dataclass(frozen=True)
class TaintFlow:
    sink_ordinal: int
    sources: frozenset[str]
    # trace ordinals of the origin notes, ascending, ending with the sink
    path: tuple[int, ...]
    apis: tuple[str, ...]
    marker_hits: tuple[str, ...] = ()
    realm: str = ""

    def to_json(self) -> dict:
        return {"sink": self.sink_ordinal, "sources": sorted(self.sources), "path": list(self.path),
                "apis": list(self.apis), "marker_hits": list(self.marker_hits), "realm": self.realm}


@dataclass
class TaintReport:
    flows: list[TaintFlow]
    termination: str = "completed"
    trace: ExecutionTrace | None = field(default=None, repr=False)

    @property
    def malicious(self) -> bool:
        return bool(self.flows)

    def to_json(self) -> dict:
        return {"verdict": "malicious" if self.malicious else "benign", "termination": self.termination,
                "flows": [f.to_json() for f in self.flows]}

    def verdict(self, sample_id: str = "") -> Verdict:
        evidence = tuple(
            f"eval in {f.realm} at #{f.sink_ordinal} from {'+'.join(sorted(f.sources))} via {len(f.path) - 1} steps"
            for f in self.flows
        )
        return Verdict(DETECTOR_ID, sample_id, "malicious" if self.flows else "benign", evidence,
                       float(len(self.flows)))


def flows_of(trace: ExecutionTrace) -> list[TaintFlow]:
    flows = []
    for sink in trace.sinks:
        label = sink.taint
        if label is None or not label.sources:
            continue
        notes = sorted({(o, api) for api, o in label.origins if o < sink.ordinal})
        # one entry per ordinal; an ordinal can carry several notes
        by_ord: dict[int, str] = {}
        for o, api in notes:
            by_ord.setdefault(o, api)
        path = (*by_ord, sink.ordinal)
        apis = (*by_ord.values(), sink.api)
        flows.append(TaintFlow(sink.ordinal, frozenset(label.sources), path, apis,
                               tuple(sink.marker_hits), sink.realm))
    return flows


def taint_run(files: FileSet, env: EnvConfig = EnvConfig(), policy: TaintPolicy = TaintPolicy()) -> TaintReport:
    """Run with taint sources enabled; one flow per eval of tainted code."""
    if not env.html5:
        raise ValueError("taint tracking needs the HTML5 host objects")
    trace = run_page(files, env, policy=policy)
    return TaintReport(flows_of(trace), trace.termination, trace)
