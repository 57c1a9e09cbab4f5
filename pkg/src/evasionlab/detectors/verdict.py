"""Verdicts and their aggregation into detection ratios."""

from __future__ import annotations

from dataclasses import dataclass, field

LABELS = ("benign", "suspicious", "malicious")


@dataclass(frozen=True)
class Verdict:
    detector: str
    sample: str
    label: str
    evidence: tuple[str, ...] = ()
    score: float = 0.0

    def __post_init__(self) -> None:
        if self.label not in LABELS:
            raise ValueError(f"unknown label {self.label!r}")
        if self.label == "malicious" and not self.evidence:
            raise ValueError("a malicious verdict needs evidence")
        if not isinstance(self.evidence, tuple):
            object.__setattr__(self, "evidence", tuple(self.evidence))

    @property
    def malicious(self) -> bool:
        return self.label == "malicious"

    def to_json(self) -> dict:
        return {"detector": self.detector, "sample": self.sample, "label": self.label,
                "evidence": list(self.evidence), "score": self.score}


@dataclass(frozen=True)
class DetectionOutcome:
    labels: dict[str, str] = field(default_factory=dict)
    flagged: int = 0
    total: int = 0

    @property
    def ratio(self) -> float | None:
        return self.flagged / self.total if self.total else None

    @property
    def ratio_text(self) -> str:
        return f"{self.flagged}/{self.total}"

    @property
    def label(self) -> str:
        if not self.total:
            return "undetermined"
        return "malicious" if self.flagged else "benign"


def aggregate_verdict(verdicts: list[Verdict]) -> DetectionOutcome:
    labels = {v.detector: v.label for v in verdicts}
    return DetectionOutcome(labels, sum(v.malicious for v in verdicts), len(verdicts))
