"""Source files, spans and file sets shared by every stage of the pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

ROLES = ("page", "worker", "feed")


@dataclass(frozen=True)
class SourceSpan:
    start_offset: int
    end_offset: int
    source_id: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if not 0 <= self.start_offset <= self.end_offset:
            raise ValueError(f"invalid span {self.start_offset}..{self.end_offset}")

    def text(self, source: str) -> str:
        return source[self.start_offset : self.end_offset]

    def to_json(self) -> dict:
        return {"source": self.source_id, "start": self.start_offset, "end": self.end_offset}


@dataclass(frozen=True)
class SourceFile:
    id: str
    body: str
    role: str = "page"

    def __post_init__(self) -> None:
        if self.role not in ROLES:
            raise ValueError(f"unknown role {self.role!r}")


class FileSet:
    """An ordered collection of source files with unique ids.

    The page file is the entry point for the emulator; worker files are
    looked up by id when a script does ``new Worker("ww1.js")``.
    """

    def __init__(self, files: Iterable[SourceFile] = ()) -> None:
        self._files: dict[str, SourceFile] = {}
        for f in files:
            if f.id in self._files:
                raise ValueError(f"duplicate file id {f.id!r}")
            self._files[f.id] = f

    def __iter__(self) -> Iterator[SourceFile]:
        return iter(self._files.values())

    def __len__(self) -> int:
        return len(self._files)

    def __contains__(self, file_id: str) -> bool:
        return file_id in self._files

    def __getitem__(self, file_id: str) -> SourceFile:
        return self._files[file_id]

    def get(self, file_id: str) -> SourceFile | None:
        return self._files.get(file_id)

    @property
    def page(self) -> SourceFile:
        pages = [f for f in self._files.values() if f.role == "page"]
        if len(pages) != 1:
            raise ValueError(f"expected exactly one page file, found {len(pages)}")
        return pages[0]

    def scripts(self) -> list[SourceFile]:
        return [f for f in self._files.values() if f.role != "feed"]

    @classmethod
    def from_dir(cls, root: Path, entries: Iterable[tuple[str, str, str]]) -> FileSet:
        """Build from ``(id, role, relative path)`` entries under ``root``."""
        return cls(
            SourceFile(fid, (root / rel).read_text(encoding="utf-8"), role)
            for fid, role, rel in entries
        )

    def __repr__(self) -> str:
        return f"FileSet({[f.id for f in self._files.values()]!r})"
