"""One entry point producing any of the five variants."""

from __future__ import annotations

from ..js.source import FileSet
from .bundle import StagedBundle, Technique
from .chunks import ChunkPolicy
from .delegated import Backend, plan_delegated
from .distributed import plan_distributed
from .sample import AnnotatedSample
from .user_driven import plan_user_driven

ALL_TECHNIQUES = tuple(Technique)


def make_variant(sample: AnnotatedSample, technique: Technique | str, policy: ChunkPolicy = ChunkPolicy(),
                 carrier: FileSet | None = None) -> StagedBundle:
    technique = Technique(technique)
    if technique is Technique.DELEGATED_WEBSQL:
        return plan_delegated(sample, Backend.WEBSQL, policy)
    if technique is Technique.DELEGATED_INDEXEDDB:
        return plan_delegated(sample, Backend.INDEXEDDB, policy)
    if technique is Technique.DELEGATED_BLOB:
        return plan_delegated(sample, Backend.BLOB, policy)
    if technique is Technique.DISTRIBUTED:
        return plan_distributed(sample, policy=policy)
    if carrier is None:
        raise ValueError("the user-driven variant needs a carrier page")
    return plan_user_driven(sample, carrier, policy=policy)
