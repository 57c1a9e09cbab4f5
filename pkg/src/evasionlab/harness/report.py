"""Rendering run results as JSON, CSV or markdown tables."""

from __future__ import annotations

import csv
import io
import json

from .matrix import ORIGINAL, RunResults

FORMATS = ("json", "csv", "markdown")
CSV_FIELDS = ("sample", "variant", "detector", "label", "ratio", "evidence_count", "status")


def classification(label: str) -> str:
    return "malign" if label == "malicious" else "benign"


def _table(header: list[str], body: list[list[str]]) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(row) + " |" for row in body]
    return "\n".join(lines)


def _grouped(results: RunResults, originals: bool) -> dict[tuple[str, str], dict]:
    groups: dict[tuple[str, str], dict] = {}
    for r in results.rows:
        if (r.variant == ORIGINAL) != originals:
            continue
        g = groups.setdefault((r.sample, r.variant), {"labels": {}, "ratio": r.ratio, "status": r.status})
        g["labels"][r.detector] = r.label
    return groups


def render_markdown(results: RunResults) -> str:
    dets = list(results.config.detectors)
    out = [f"# Detection report", "", f"generated_at: {results.config.generated_at or 'unspecified'}", ""]
    out += ["## Phase 1: original samples", ""]
    body = [[s, *[g["labels"].get(d, "-") for d in dets], g["ratio"],
             classification(g["labels"].get("taint", "benign"))]
            for (s, _), g in sorted(_grouped(results, True).items())]
    out += [_table(["Sample", *dets, "Detection ratio", "Taint classification"], body), ""]
    out += ["## Phase 2: obfuscated variants", ""]
    body = [[s, v, *[g["labels"].get(d, "-") for d in dets], g["ratio"],
             classification(g["labels"].get("taint", "benign")), g["status"]]
            for (s, v), g in sorted(_grouped(results, False).items())]
    out += [_table(["Sample", "Variant", *dets, "Detection ratio", "Taint classification", "Status"], body), ""]
    out += ["## Summary (malicious / runs)", ""]
    summary = results.summary()
    out += [_table(["Detector", "Originals", "Variants"],
                   [[d, summary[d]["originals"], summary[d]["variants"]] for d in dets]), ""]
    return "\n".join(out)


def render_report(results: RunResults, fmt: str = "markdown") -> str:
    if fmt == "json":
        return json.dumps(results.to_json(), indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, CSV_FIELDS, lineterminator="\n")
        writer.writeheader()
        for r in results.rows:
            writer.writerow(r.to_json())
        return buf.getvalue()
    if fmt == "markdown":
        return render_markdown(results)
    raise ValueError(f"unknown format {fmt!r}")
