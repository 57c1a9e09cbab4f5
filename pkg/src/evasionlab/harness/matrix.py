"""The experiment matrix: every detector on every original and variant."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..detectors import (
    SemistaticConfig, Verdict, aggregate_verdict, build_signature_db, classify_semistatic,
    extract_features, honeyclient_scan, scan_signatures, taint_run,
)
from ..emulator.config import EnvConfig, FeedScript
from ..explorer import ExplorationBudget, explore
from ..js.source import FileSet
from ..obfuscation import ALL_TECHNIQUES, ChunkPolicy, Technique, make_variant, verify_equivalence
from .corpus import CorpusManifest

DETECTORS = ("signature", "semistatic", "honeyclient", "honeyclient_html5", "taint", "trigger")
ORIGINAL = "original"


@dataclass(frozen=True)
class RunConfig:
    techniques: tuple[str, ...] = tuple(t.value for t in ALL_TECHNIQUES)
    detectors: tuple[str, ...] = DETECTORS
    thresholds_path: str | None = None
    schedule_seed: int = 0
    scale: float = 1.0
    chunk_size: int = 16
    # reports carry this verbatim so equal configs give identical bytes
    generated_at: str = ""

    def __post_init__(self) -> None:
        if not self.detectors:
            raise ValueError("detector set must be non-empty")
        unknown = set(self.detectors) - set(DETECTORS)
        if unknown:
            raise ValueError(f"unknown detectors {sorted(unknown)}")
        for t in self.techniques:
            Technique(t)

    def semistatic(self) -> SemistaticConfig:
        return SemistaticConfig.load(self.thresholds_path) if self.thresholds_path else SemistaticConfig()

    def to_json(self) -> dict:
        return {"techniques": list(self.techniques), "detectors": list(self.detectors),
                "thresholds_path": self.thresholds_path, "schedule_seed": self.schedule_seed,
                "scale": self.scale, "chunk_size": self.chunk_size}


@dataclass(frozen=True)
class Row:
    sample: str
    variant: str
    detector: str
    label: str
    ratio: str
    evidence_count: int
    status: str = "ok"  # ok | equivalence_failed | generation_failed

    def to_json(self) -> dict:
        return {"sample": self.sample, "variant": self.variant, "detector": self.detector, "label": self.label,
                "ratio": self.ratio, "evidence_count": self.evidence_count, "status": self.status}


@dataclass
class RunResults:
    rows: list[Row]
    config: RunConfig
    failures: dict[str, str] = field(default_factory=dict)

    def summary(self) -> dict:
        out = {}
        for det in self.config.detectors:
            mine = [r for r in self.rows if r.detector == det and r.status != "generation_failed"]
            orig = [r for r in mine if r.variant == ORIGINAL]
            var = [r for r in mine if r.variant != ORIGINAL]
            out[det] = {
                "originals": f"{sum(r.label == 'malicious' for r in orig)}/{len(orig)}",
                "variants": f"{sum(r.label == 'malicious' for r in var)}/{len(var)}",
            }
        return out

    def to_json(self) -> dict:
        return {"generated_at": self.config.generated_at, "config": self.config.to_json(),
                "rows": [r.to_json() for r in self.rows], "summary": self.summary(),
                "failures": dict(sorted(self.failures.items()))}

    @classmethod
    def from_json(cls, data: dict) -> "RunResults":
        cfg = data["config"]
        config = RunConfig(tuple(cfg["techniques"]), tuple(cfg["detectors"]), cfg.get("thresholds_path"),
                           cfg["schedule_seed"], cfg["scale"], cfg["chunk_size"], data.get("generated_at", ""))
        return cls([Row(**r) for r in data["rows"]], config, data.get("failures", {}))

    @classmethod
    def load(cls, path: str | Path) -> "RunResults":
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def run_detectors(files: FileSet, feed: FeedScript, sample_id: str, config: RunConfig, db) -> list[Verdict]:
    """Detectors see the page as a visitor would: the feed is served, no user events occur."""
    env = EnvConfig(schedule_seed=config.schedule_seed, scale=config.scale, feed=feed)
    cfg = config.semistatic()
    out = []
    for det in config.detectors:
        if det == "signature":
            out.append(scan_signatures(files, db, sample_id))
        elif det == "semistatic":
            out.append(classify_semistatic(extract_features(files, cfg.long_string_threshold), cfg, sample_id))
        elif det == "honeyclient":
            out.append(honeyclient_scan(files, env, html5=False, cfg=cfg, sample_id=sample_id))
        elif det == "honeyclient_html5":
            out.append(honeyclient_scan(files, env, html5=True, cfg=cfg, sample_id=sample_id))
        elif det == "taint":
            out.append(taint_run(files, env).verdict(sample_id))
        else:
            out.append(trigger_scan(files, env, sample_id))
    return out


TRIGGER_BUDGET = ExplorationBudget(max_sequences=200, max_depth=2)


def trigger_scan(files: FileSet, env: EnvConfig, sample_id: str = "") -> Verdict:
    """Explore event sequences until network-derived code reaches eval."""
    report = explore(files, TRIGGER_BUDGET, env, predicate=lambda s: s.taint is not None and bool(s.taint.sources))
    if report.triggering_trace is None:
        return Verdict("trigger", sample_id, "benign", (f"{report.sequences_tried} sequences, no tainted eval",), 0.0)
    events = ", ".join(str(e) for e in report.triggering_trace) or "no events"
    return Verdict("trigger", sample_id, "malicious",
                   (f"tainted eval after [{events}] ({report.sequences_tried} sequences)",),
                   float(report.sequences_tried))


def _rows(sample: str, variant: str, verdicts: list[Verdict], status: str) -> list[Row]:
    ratio = aggregate_verdict(verdicts).ratio_text
    return [Row(sample, variant, v.detector, v.label, ratio, len(v.evidence), status) for v in verdicts]


def run_matrix(manifest: CorpusManifest, config: RunConfig = RunConfig()) -> RunResults:
    db = build_signature_db([(s.id, s.files) for s in manifest.samples])
    carrier = manifest.carrier().files if manifest.carriers else None
    policy = ChunkPolicy("fixed_size", config.chunk_size, config.schedule_seed)
    rows: list[Row] = []
    failures: dict[str, str] = {}
    for sample in manifest.samples:
        rows += _rows(sample.id, ORIGINAL, run_detectors(sample.files, FeedScript(), sample.id, config, db), "ok")
        for tech in config.techniques:
            key = f"{sample.id}/{tech}"
            try:
                bundle = make_variant(sample, tech, policy, carrier)
            except Exception as exc:  # one broken variant must not stop the matrix
                failures[key] = f"generation failed: {exc}"
                rows += [Row(sample.id, tech, d, "benign", "0/0", 0, "generation_failed") for d in config.detectors]
                continue
            env = EnvConfig(schedule_seed=config.schedule_seed, scale=config.scale,
                            event_trace=bundle.required_event_trace)
            eq = verify_equivalence(sample.files, bundle, env)
            status = "ok" if eq.equal else "equivalence_failed"
            if not eq.equal:
                failures[key] = eq.reason
            rows += _rows(sample.id, tech, run_detectors(bundle.files, bundle.feed, sample.id, config, db), status)
    rows.sort(key=lambda r: (r.sample, r.variant != ORIGINAL, r.variant, r.detector))
    return RunResults(rows, config, failures)
