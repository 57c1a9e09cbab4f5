import functools

import pytest

from evasionlab.emulator import EnvConfig
from evasionlab.harness import load_manifest
from evasionlab.js import FileSet, SourceFile
from evasionlab.obfuscation import ALL_TECHNIQUES, ChunkPolicy, make_variant


def page(source: str, *workers: tuple[str, str]) -> FileSet:
    """A FileSet with one page script and optional (id, body) worker scripts."""
    return FileSet([SourceFile("page.js", source, "page"), *(SourceFile(i, b, "worker") for i, b in workers)])


@functools.lru_cache(maxsize=None)
def _manifest():
    return load_manifest()


@functools.lru_cache(maxsize=None)
def _bundle(sample_id: str, technique: str, chunk_size: int = 16, seed: int = 0):
    m = _manifest()
    return make_variant(m.sample(sample_id), technique, ChunkPolicy("fixed_size", chunk_size, seed),
                        m.carrier().files)


@pytest.fixture(scope="session")
def manifest():
    return _manifest()


@pytest.fixture(scope="session")
def carrier(manifest):
    return manifest.carrier().files


@pytest.fixture(scope="session")
def bundle_of():
    return _bundle


@pytest.fixture(scope="session")
def all_bundles(manifest):
    return {(s.id, t.value): _bundle(s.id, t.value) for s in manifest.samples for t in ALL_TECHNIQUES}


def bundle_env(bundle, **kw) -> EnvConfig:
    return EnvConfig(feed=bundle.feed, event_trace=bundle.required_event_trace, **kw)
