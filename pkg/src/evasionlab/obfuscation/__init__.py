"""HTML5-staged obfuscation transforms: delegated, distributed and user-driven."""

from .bundle import (
    FragmentLeak, IoError, StagedBundle, Technique, check_secrecy, emit_bundle, load_bundle, longest_leak,
)
from .chunks import ChunkPlan, ChunkPolicy, EmptyPayload, UnsupportedConstruct, split_payload
from .delegated import Backend, plan_delegated
from .distributed import CyclicDag, StageNode, WorkerDag, default_dag, nested_dag, plan_distributed
from .equivalence import EquivalenceReport, verify_equivalence
from .sample import AnnotatedSample, sentinel_span
from .user_driven import (
    EventBinding, Guard, InvalidBinding, MissingHookSite, default_bindings, plan_user_driven,
)
from .variants import ALL_TECHNIQUES, make_variant

__all__ = [
    "ALL_TECHNIQUES", "AnnotatedSample", "Backend", "ChunkPlan", "ChunkPolicy", "CyclicDag",
    "EmptyPayload", "EquivalenceReport", "EventBinding", "FragmentLeak", "Guard", "InvalidBinding",
    "IoError", "MissingHookSite", "StageNode", "StagedBundle", "Technique", "UnsupportedConstruct",
    "WorkerDag", "check_secrecy", "default_bindings", "default_dag", "emit_bundle", "load_bundle",
    "longest_leak", "make_variant", "nested_dag", "plan_delegated", "plan_distributed",
    "plan_user_driven", "sentinel_span", "split_payload", "verify_equivalence",
]
