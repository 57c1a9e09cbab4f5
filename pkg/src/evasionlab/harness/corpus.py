"""The corpus manifest: samples with annotated regions, controls and carriers."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ..emulator.config import EventDescriptor, FeedScript
from ..js.parser import ParseError, parse_source
from ..js.source import ROLES, FileSet, SourceFile, SourceSpan
from ..js.tokens import LexError
from ..obfuscation.chunks import UnsupportedConstruct, check_region
from ..obfuscation.sample import AnnotatedSample, sentinel_span

CORPUS_DIR = Path(__file__).resolve().parent.parent / "corpus"
DEFAULT_MANIFEST = CORPUS_DIR / "manifest.json"


class ManifestError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class CorpusEntry:
    """A benign page: a control or a carrier."""

    id: str
    files: FileSet
    feed: FeedScript = field(default_factory=FeedScript)
    description: str = ""


@dataclass(frozen=True)
class CorpusManifest:
    samples: tuple[AnnotatedSample, ...]
    controls: tuple[CorpusEntry, ...]
    carriers: tuple[CorpusEntry, ...] = ()
    root: Path = CORPUS_DIR

    def sample(self, sample_id: str) -> AnnotatedSample:
        for s in self.samples:
            if s.id == sample_id:
                return s
        raise KeyError(sample_id)

    def carrier(self, carrier_id: str | None = None) -> CorpusEntry:
        if not self.carriers:
            raise KeyError("manifest lists no carrier")
        if carrier_id is None:
            return self.carriers[0]
        for c in self.carriers:
            if c.id == carrier_id:
                return c
        raise KeyError(carrier_id)


def _req(obj: dict, key: str, where: str) -> Any:
    if not isinstance(obj, dict) or key not in obj:
        raise ManifestError(f"{where}.{key}", "missing field")
    return obj[key]


def _files(entry: dict, root: Path, where: str) -> FileSet:
    specs = _req(entry, "files", where)
    if not isinstance(specs, list) or not specs:
        raise ManifestError(f"{where}.files", "must be a non-empty list")
    out = []
    for i, spec in enumerate(specs):
        fw = f"{where}.files[{i}]"
        fid, role, rel = _req(spec, "id", fw), _req(spec, "role", fw), _req(spec, "path", fw)
        if role not in ROLES:
            raise ManifestError(f"{fw}.role", f"unknown role {role!r}")
        path = root / rel
        if not path.is_file():
            raise ManifestError(f"{fw}.path", f"missing file {rel}")
        body = path.read_text(encoding="utf-8")
        if role != "feed":
            try:
                parse_source(body, fid)
            except (ParseError, LexError) as exc:
                raise ManifestError(f"{fw}.path", f"does not parse: {exc}") from exc
        out.append(SourceFile(fid, body, role))
    try:
        files = FileSet(out)
        files.page
    except ValueError as exc:
        raise ManifestError(f"{where}.files", str(exc)) from exc
    return files


def _feed(entry: dict, root: Path, where: str) -> FeedScript:
    rel = entry.get("feed")
    if rel is None:
        return FeedScript()
    try:
        return FeedScript.load(root / rel)
    except (OSError, ValueError, KeyError) as exc:
        raise ManifestError(f"{where}.feed", f"unreadable feed {rel}: {exc}") from exc


def _sample(entry: dict, root: Path, where: str) -> AnnotatedSample:
    sid = _req(entry, "id", where)
    files = _files(entry, root, where)
    region = _req(entry, "region", where)
    rfile = _req(region, "file", f"{where}.region")
    if rfile not in files:
        raise ManifestError(f"{where}.region.file", f"unknown file {rfile!r}")
    body = files[rfile].body
    start, end = _req(region, "start", f"{where}.region"), _req(region, "end", f"{where}.region")
    if not (isinstance(start, int) and isinstance(end, int) and 0 <= start < end <= len(body)):
        raise ManifestError(f"{where}.region", f"span {start}..{end} invalid for {rfile}")
    marker = _req(entry, "marker", where)
    if not marker:
        raise ManifestError(f"{where}.marker", "empty marker")
    try:
        trace = tuple(EventDescriptor.from_json(e) for e in entry.get("required_event_trace", []))
    except (KeyError, ValueError) as exc:
        raise ManifestError(f"{where}.required_event_trace", str(exc)) from exc
    sample = AnnotatedSample(sid, files, rfile, SourceSpan(start, end, rfile), marker, trace,
                             entry.get("description", ""))
    try:
        check_region(sample.region_text)
    except UnsupportedConstruct as exc:
        raise ManifestError(f"{where}.region", str(exc)) from exc
    return sample


def _unique(ids: list[str], where: str) -> None:
    seen = set()
    for i, x in enumerate(ids):
        if x in seen:
            raise ManifestError(f"{where}[{i}].id", f"duplicate id {x!r}")
        seen.add(x)


def load_manifest(path: str | Path = DEFAULT_MANIFEST) -> CorpusManifest:
    """Read and validate a manifest; file paths resolve against its directory."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ManifestError(str(path), f"cannot read manifest: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ManifestError(str(path), f"invalid JSON: {exc}") from exc
    root = path.parent
    samples_raw = _req(data, "samples", "manifest")
    controls_raw = data.get("controls", [])
    carriers_raw = data.get("carriers", [])
    _unique([s.get("id") for s in samples_raw] + [c.get("id") for c in controls_raw]
            + [c.get("id") for c in carriers_raw], "manifest.entries")
    samples = tuple(_sample(s, root, f"samples[{i}]") for i, s in enumerate(samples_raw))
    markers = [s.marker for s in samples]
    for i, m in enumerate(markers):
        if markers.index(m) != i:
            raise ManifestError(f"samples[{i}].marker", f"marker {m!r} reused")
    controls = tuple(
        CorpusEntry(_req(c, "id", f"controls[{i}]"), _files(c, root, f"controls[{i}]"),
                    _feed(c, root, f"controls[{i}]"), c.get("description", ""))
        for i, c in enumerate(controls_raw)
    )
    carriers = tuple(
        CorpusEntry(_req(c, "id", f"carriers[{i}]"), _files(c, root, f"carriers[{i}]"),
                    description=c.get("description", ""))
        for i, c in enumerate(carriers_raw)
    )
    return CorpusManifest(samples, controls, carriers, root)


def region_from_sentinels(root: Path, rel_path: str, file_id: str) -> dict:
    body = (root / rel_path).read_text(encoding="utf-8")
    span = sentinel_span(body, file_id)
    return {"file": file_id, "start": span.start_offset, "end": span.end_offset}
