"""Signature, semi-static, honeyclient and taint detectors."""

from .features import FeatureVector, SemistaticConfig, classify_semistatic, extract_features
from .honeyclient import honeyclient_scan
from .signatures import Signature, build_signature_db, load_db, save_db, scan_signatures
from .taint import TaintFlow, TaintReport, flows_of, taint_run
from .verdict import DetectionOutcome, Verdict, aggregate_verdict

__all__ = [
    "DetectionOutcome", "FeatureVector", "SemistaticConfig", "Signature", "TaintFlow", "TaintReport",
    "Verdict", "aggregate_verdict", "build_signature_db", "classify_semistatic", "extract_features",
    "flows_of", "honeyclient_scan", "load_db", "save_db", "scan_signatures", "taint_run",
]
