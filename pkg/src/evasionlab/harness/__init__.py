"""Corpus manifest, experiment matrix, reports and the command line."""

from .corpus import CorpusEntry, CorpusManifest, ManifestError, load_manifest
from .matrix import DETECTORS, Row, RunConfig, RunResults, run_detectors, run_matrix, trigger_scan
from .report import render_report

__all__ = [
    "CorpusEntry", "CorpusManifest", "DETECTORS", "ManifestError", "Row", "RunConfig", "RunResults",
    "load_manifest", "render_report", "run_detectors", "run_matrix", "trigger_scan",
]
