"""Staged bundles: the emitted form of every obfuscation technique."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ..emulator.config import EventDescriptor, FeedScript
from ..js.parser import parse_source
from ..js.source import FileSet, SourceFile


class Technique(str, enum.Enum):
    DELEGATED_WEBSQL = "DelegatedWebSQL"
    DELEGATED_INDEXEDDB = "DelegatedIndexedDB"
    DELEGATED_BLOB = "DelegatedBlob"
    DISTRIBUTED = "Distributed"
    USER_DRIVEN = "UserDriven"

    def __str__(self) -> str:
        return self.value


class IoError(OSError):
    pass


class FragmentLeak(ValueError):
    """An emitted script still contains a long piece of the malicious region."""


FEED_FILE = "feed.json"
MANIFEST_FILE = "bundle.json"


@dataclass
class StagedBundle:
    technique: Technique
    sample_id: str
    files: FileSet
    feed: FeedScript
    chunk_size: int
    seed: int
    required_event_trace: tuple[EventDescriptor, ...] = ()
    # chunk plan summary, dag or bindings; also the staging sink's hash
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.technique = Technique(self.technique)

    def manifest(self) -> dict:
        return {
            "sample_id": self.sample_id,
            "technique": self.technique.value,
            "files": [{"id": f.id, "role": f.role, "path": f.id} for f in self.files],
            "feed_path": FEED_FILE,
            "chunk_size": self.chunk_size,
            "seed": self.seed,
            "required_event_trace": [ev.to_json() for ev in self.required_event_trace],
            "metadata": self.metadata,
        }

    def feed_ids(self) -> list[int]:
        return sorted(m.id for m in self.feed.messages if m.id is not None)


def _dump(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def emit_bundle(bundle: StagedBundle, out_dir: str | Path) -> FileSet:
    """Write scripts, the feed and ``bundle.json``; returns the written files."""
    out = Path(out_dir)
    written = []
    try:
        out.mkdir(parents=True, exist_ok=True)
        for f in bundle.files:
            parse_source(f.body, f.id)
            (out / f.id).write_text(f.body, encoding="utf-8")
            written.append(f)
        feed_text = _dump(bundle.feed.to_json())
        (out / FEED_FILE).write_text(feed_text, encoding="utf-8")
        (out / MANIFEST_FILE).write_text(_dump(bundle.manifest()), encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write bundle to {out}: {exc}") from exc
    return FileSet([*written, SourceFile(FEED_FILE, feed_text, "feed")])


def load_bundle(path: str | Path) -> StagedBundle:
    """Read a directory written by ``emit_bundle``."""
    root = Path(path)
    try:
        data = json.loads((root / MANIFEST_FILE).read_text(encoding="utf-8"))
        files = FileSet.from_dir(root, [(f["id"], f["role"], f["path"]) for f in data["files"]])
        feed = FeedScript.load(root / data["feed_path"])
    except OSError as exc:
        raise IoError(f"cannot read bundle at {root}: {exc}") from exc
    return StagedBundle(
        technique=Technique(data["technique"]),
        sample_id=data["sample_id"],
        files=files,
        feed=feed,
        chunk_size=data["chunk_size"],
        seed=data["seed"],
        required_event_trace=tuple(EventDescriptor.from_json(e) for e in data["required_event_trace"]),
        metadata=data.get("metadata", {}),
    )


def longest_leak(files: FileSet, secret: str, limit: int) -> tuple[str, int] | None:
    """First (file id, offset) holding a substring of ``secret`` longer than ``limit``."""
    width = limit + 1
    if len(secret) < width:
        return None
    windows = {secret[i:i + width] for i in range(len(secret) - width + 1)}
    for f in files.scripts():
        body = f.body
        for i in range(len(body) - width + 1):
            if body[i:i + width] in windows:
                return f.id, i
    return None


def check_secrecy(files: FileSet, secret: str, limit: int) -> None:
    leak = longest_leak(files, secret, limit)
    if leak is not None:
        raise FragmentLeak(f"{leak[0]} at offset {leak[1]} holds more than {limit} code units of the region")
