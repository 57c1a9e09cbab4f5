"""Local Storage, IndexedDB object stores and Blob state."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterator, Optional

from .taint import merge, tag
from .values import to_string


@dataclass
class LocalStore:
    items: dict[str, str] = field(default_factory=dict)

    def set(self, key: str, value: str) -> None:
        self.items[key] = value

    def get(self, key: str) -> Optional[str]:
        return self.items.get(key)

    def remove(self, key: str) -> None:
        self.items.pop(key, None)

    def key(self, index: int) -> Optional[str]:
        keys = list(self.items)
        return keys[index] if 0 <= index < len(keys) else None


def key_order(key: Any) -> tuple:
    """IndexedDB key ordering: numbers before strings, each ascending."""
    if isinstance(key, float):
        return (0, key, "")
    return (1, 0.0, to_string(key))


@dataclass
class StoreState:
    name: str
    key_path: Optional[str] = None
    records: dict = field(default_factory=dict)  # ordering key -> (key, value)
    auto_key: int = 0

    def add(self, value: Any, key: Any = None) -> Any:
        if key is None:
            self.auto_key += 1
            key = float(self.auto_key)
        k = key_order(key)
        if k in self.records:
            raise KeyError(f"duplicate key {key!r}")
        self.records[k] = (key, value)
        return key

    def put(self, value: Any, key: Any) -> Any:
        self.records[key_order(key)] = (key, value)
        return key


def idb_iterate(store: StoreState) -> Iterator[tuple[Any, Any]]:
    """Yield (key, value) in ascending key order over a snapshot of the store."""
    for k in sorted(store.records):
        yield store.records[k]


@dataclass
class IdbDatabase:
    name: str
    version: int = 0
    stores: dict[str, StoreState] = field(default_factory=dict)


def blob_concat(parts: list) -> str:
    """Concatenate blob parts in append order, merging their taint labels."""
    texts = [to_string(p) for p in parts]
    return tag("".join(texts), merge(texts))
