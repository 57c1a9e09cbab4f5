"""Run every detector on every original and staged variant and write the reports.

Usage: python scripts/run_matrix.py [--out results] [--seed 0] [--generated-at TEXT]
"""

import argparse
import time
from pathlib import Path

from evasionlab.harness import RunConfig, load_manifest, render_report, run_matrix


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--chunk-size", type=int, default=16)
    ap.add_argument("--generated-at", default="")
    args = ap.parse_args()

    config = RunConfig(schedule_seed=args.seed, chunk_size=args.chunk_size, generated_at=args.generated_at)
    start = time.perf_counter()
    results = run_matrix(load_manifest(), config)
    elapsed = time.perf_counter() - start

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for fmt, name in (("json", "results.json"), ("csv", "results.csv"), ("markdown", "report.md")):
        (out / name).write_text(render_report(results, fmt), encoding="utf-8")

    print(f"{len(results.rows)} rows in {elapsed:.1f}s -> {out}/")
    for det, s in results.summary().items():
        print(f"  {det:<18} originals {s['originals']:>5}   variants {s['variants']:>6}")
    for key, reason in sorted(results.failures.items()):
        print(f"  failure {key}: {reason}")


if __name__ == "__main__":
    main()
