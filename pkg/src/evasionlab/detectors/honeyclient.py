"""A low-interaction honeyclient: run the page, then classify what it evaluated.

The static script text and every dynamically evaluated string are scored with
the semi-static classifier.  With ``html5=False`` the emulated client lacks
the HTML5 host objects, as older honeyclients did; loaders built on them
fail with a ReferenceError and never surface the staged code.
"""

from __future__ import annotations

from dataclasses import replace

from ..emulator.config import EnvConfig
from ..emulator.errors import BudgetExhausted
from ..emulator.runtime import run_page
from ..js.parser import ParseError, parse_source
from ..js.source import FileSet
from ..js.tokens import LexError
from .features import FeatureVector, SemistaticConfig, classify_semistatic, extract_features, score
from .verdict import Verdict


def _merge(a: FeatureVector, b: FeatureVector) -> FeatureVector:
    return FeatureVector(
        a.eval_count + b.eval_count,
        a.unescape_count + b.unescape_count,
        a.decode_count + b.decode_count,
        a.doc_write_count + b.doc_write_count,
        max(a.max_string_literal_len, b.max_string_literal_len),
        max(a.max_static_loop_bound, b.max_static_loop_bound),
        a.long_string_flag or b.long_string_flag,
    )


def honeyclient_scan(files: FileSet, env: EnvConfig = EnvConfig(), *, html5: bool = False,
                     cfg: SemistaticConfig = SemistaticConfig(), sample_id: str = "") -> Verdict:
    detector = "honeyclient_html5" if html5 else "honeyclient"
    fv = extract_features(files, cfg.long_string_threshold)
    notes = []
    try:
        trace = run_page(files, replace(env, html5=html5))
        sinks = trace.sinks
        if trace.errors:
            notes.append(f"script error: {trace.errors[0]['kind']}")
    except BudgetExhausted as exc:
        sinks = exc.trace.sinks
        notes.append("step budget exhausted")
    for sink in sinks:
        try:
            program = parse_source(sink.code)
        except (ParseError, LexError):
            continue
        fv = _merge(fv, extract_features(program, cfg.long_string_threshold))
    verdict = classify_semistatic(fv, cfg, sample_id)
    _, evidence = score(fv, cfg)
    evidence = [f"{len(sinks)} dynamic evaluations", *evidence, *notes] if verdict.malicious else evidence + notes
    return Verdict(detector, sample_id, verdict.label, tuple(evidence), verdict.score)
