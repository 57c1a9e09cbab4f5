"""Does a bundle produce the same sink payloads as its original?"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from ..emulator.config import EnvConfig, FeedScript
from ..emulator.errors import BudgetExhausted
from ..emulator.runtime import run_page
from ..emulator.trace import ExecutionTrace, code_hash
from ..js.source import FileSet
from .bundle import StagedBundle


@dataclass
class EquivalenceReport:
    equal: bool
    original_sinks: list[str]
    bundle_sinks: list[str]
    # the bundle's sink(s) that evaluate the reassembled region itself
    staging_sinks: int = 0
    reason: str = ""
    original_trace: ExecutionTrace | None = field(default=None, repr=False)
    bundle_trace: ExecutionTrace | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {
            "equal": self.equal,
            "reason": self.reason,
            "original_sink_hashes": [code_hash(c) for c in self.original_sinks],
            "bundle_sink_hashes": [code_hash(c) for c in self.bundle_sinks],
            "staging_sinks": self.staging_sinks,
        }


def _run(files: FileSet, env: EnvConfig) -> tuple[ExecutionTrace, str]:
    try:
        trace = run_page(files, env)
    except BudgetExhausted as exc:
        return exc.trace, "budget_exhausted"
    return trace, trace.termination


def verify_equivalence(original: FileSet, bundle: StagedBundle, env: EnvConfig) -> EquivalenceReport:
    """Compare the ordered sink payloads of ``original`` and ``bundle``.

    The bundle evaluates the reassembled region once more than the original
    does; that staging sink is recognised by the region hash recorded in the
    bundle metadata and left out of the comparison.
    """
    orig_trace, orig_end = _run(original, replace(env, feed=FeedScript()))
    bundle_trace, bundle_end = _run(bundle.files, replace(env, feed=bundle.feed))
    staging = bundle.metadata.get("staging_hash")
    orig = [s.code for s in orig_trace.sinks]
    kept = [s.code for s in bundle_trace.sinks if code_hash(s.code) != staging]
    n_staging = len(bundle_trace.sinks) - len(kept)

    reason = ""
    if orig_end != "completed":
        reason = f"original terminated with {orig_end}"
    elif bundle_end != "completed":
        reason = f"bundle terminated with {bundle_end}"
    elif n_staging != 1:
        reason = f"expected one staging sink, saw {n_staging}"
    elif orig != kept:
        reason = f"sink payloads differ ({len(orig)} original, {len(kept)} bundle)"
    return EquivalenceReport(not reason, orig, kept, n_staging, reason, orig_trace, bundle_trace)
