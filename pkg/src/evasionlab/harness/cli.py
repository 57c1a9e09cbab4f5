"""Command line: obfuscate, run, detect, explore, matrix, report, ast.

Exit codes: 0 success, 1 usage, 2 manifest error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path
from typing import Sequence

from ..detectors import aggregate_verdict, build_signature_db
from ..emulator.config import EnvConfig, EventDescriptor, FeedScript
from ..emulator.errors import BudgetExhausted
from ..emulator.runtime import run_page
from ..explorer import ExplorationBudget, explore, force_guards
from ..js import nodes as n
from ..js.parser import parse_source
from ..js.source import FileSet, SourceFile
from ..obfuscation import ChunkPolicy, emit_bundle, load_bundle, make_variant
from .corpus import DEFAULT_MANIFEST, ManifestError, load_manifest
from .matrix import DETECTORS, RunConfig, RunResults, run_detectors, run_matrix
from .report import FORMATS, render_report

EXIT_OK, EXIT_USAGE, EXIT_MANIFEST, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _detector_list(text: str) -> tuple[str, ...]:
    dets = tuple(d.strip() for d in text.split(",") if d.strip())
    unknown = [d for d in dets if d not in DETECTORS]
    if not dets or unknown:
        raise argparse.ArgumentTypeError(f"choose from {', '.join(DETECTORS)}")
    return dets


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scale", type=float, default=1.0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="evasionlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("obfuscate", help="turn a corpus sample into a staged bundle")
    p.add_argument("sample")
    p.add_argument("--technique", required=True)
    p.add_argument("--manifest", default=str(DEFAULT_MANIFEST))
    p.add_argument("--out", required=True)
    p.add_argument("--chunk-size", type=int, default=16)
    _common(p)

    p = sub.add_parser("run", help="run a bundle directory or a single page script")
    p.add_argument("target")
    p.add_argument("--events", help="JSON list of event records")
    p.add_argument("--budget", type=int, help="interpreter step budget")
    p.add_argument("--out", help="write the trace as JSON lines")
    _common(p)

    p = sub.add_parser("detect", help="run detectors on a bundle directory or page script")
    p.add_argument("target")
    p.add_argument("--manifest", default=str(DEFAULT_MANIFEST), help="originals for the signature db")
    p.add_argument("--detectors", type=_detector_list, default=DETECTORS)
    p.add_argument("--thresholds")
    _common(p)

    p = sub.add_parser("explore", help="search for the events that trigger a bundle")
    p.add_argument("target")
    p.add_argument("--budget", type=int, default=10_000, help="maximum sequences")
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--force-guards", action="store_true")
    p.add_argument("--out")
    _common(p)

    p = sub.add_parser("matrix", help="run every detector on every original and variant")
    p.add_argument("--manifest", default=str(DEFAULT_MANIFEST))
    p.add_argument("--out", help="directory for results.json and the rendered report")
    p.add_argument("--detectors", type=_detector_list, default=DETECTORS)
    p.add_argument("--format", choices=FORMATS, default="markdown")
    p.add_argument("--thresholds")
    p.add_argument("--generated-at", default="")
    _common(p)

    p = sub.add_parser("report", help="render saved matrix results")
    p.add_argument("results")
    p.add_argument("--format", choices=FORMATS, default="markdown")
    p.add_argument("--out")

    p = sub.add_parser("ast", help="print the syntax tree of a script")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    return parser


def _load_target(target: str) -> tuple[FileSet, FeedScript, tuple]:
    path = Path(target)
    if path.is_dir():
        bundle = load_bundle(path)
        return bundle.files, bundle.feed, bundle.required_event_trace
    if path.is_file():
        return FileSet([SourceFile(path.name, path.read_text(encoding="utf-8"), "page")]), FeedScript(), ()
    raise UsageError(f"no such bundle directory or script: {target}")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _env(args, feed: FeedScript, events: tuple = ()) -> EnvConfig:
    return EnvConfig(schedule_seed=args.seed, scale=args.scale, feed=feed, event_trace=events)


def cmd_obfuscate(args) -> int:
    manifest = load_manifest(args.manifest)
    try:
        sample = manifest.sample(args.sample)
    except KeyError:
        raise UsageError(f"unknown sample {args.sample!r}") from None
    carrier = manifest.carrier().files if manifest.carriers else None
    bundle = make_variant(sample, args.technique, ChunkPolicy("fixed_size", args.chunk_size, args.seed), carrier)
    written = emit_bundle(bundle, args.out)
    print(json.dumps({"out": args.out, "files": [f.id for f in written]}))
    return EXIT_OK


def cmd_run(args) -> int:
    files, feed, events = _load_target(args.target)
    if args.events:
        events = tuple(EventDescriptor.from_json(e) for e in json.loads(Path(args.events).read_text("utf-8")))
    env = _env(args, feed, events)
    if args.budget:
        env = replace(env, step_budget=args.budget)
    try:
        trace = run_page(files, env)
        code = EXIT_OK
    except BudgetExhausted as exc:
        trace, code = exc.trace, EXIT_OK
    if args.out:
        Path(args.out).write_text(trace.to_jsonl(), encoding="utf-8")
    print(json.dumps(trace.summary()))
    return code


def cmd_detect(args) -> int:
    files, feed, _ = _load_target(args.target)
    manifest = load_manifest(args.manifest)
    db = build_signature_db([(s.id, s.files) for s in manifest.samples])
    config = RunConfig(detectors=args.detectors, thresholds_path=args.thresholds,
                       schedule_seed=args.seed, scale=args.scale)
    verdicts = run_detectors(files, feed, Path(args.target).name, config, db)
    outcome = aggregate_verdict(verdicts)
    print(json.dumps({"verdicts": [v.to_json() for v in verdicts], "ratio": outcome.ratio_text,
                      "label": outcome.label}, indent=2))
    return EXIT_OK


def cmd_explore(args) -> int:
    files, feed, _ = _load_target(args.target)
    env = _env(args, feed)
    if args.force_guards:
        report = force_guards(files, env)
    else:
        report = explore(files, ExplorationBudget(max_sequences=args.budget, max_depth=args.depth), env)
    _emit(json.dumps(report.to_json(), indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_matrix(args) -> int:
    manifest = load_manifest(args.manifest)
    config = RunConfig(detectors=args.detectors, thresholds_path=args.thresholds, schedule_seed=args.seed,
                       scale=args.scale, generated_at=args.generated_at)
    results = run_matrix(manifest, config)
    rendered = render_report(results, args.format)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "results.json").write_text(render_report(results, "json"), encoding="utf-8")
        suffix = {"json": "json", "csv": "csv", "markdown": "md"}[args.format]
        (out / f"report.{suffix}").write_text(rendered, encoding="utf-8")
    else:
        sys.stdout.write(rendered)
    return EXIT_OK


def cmd_report(args) -> int:
    _emit(render_report(RunResults.load(args.results), args.format), args.out)
    return EXIT_OK


def cmd_ast(args) -> int:
    path = Path(args.file)
    program = parse_source(path.read_text(encoding="utf-8"), path.name)
    if args.json:
        print(json.dumps(n.to_dict(program), indent=2))
    else:
        print(n.dump(program))
    return EXIT_OK


COMMANDS = {
    "obfuscate": cmd_obfuscate, "run": cmd_run, "detect": cmd_detect, "explore": cmd_explore,
    "matrix": cmd_matrix, "report": cmd_report, "ast": cmd_ast,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.verb](args)
    except UsageError as exc:
        print(f"evasionlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ManifestError as exc:
        print(f"evasionlab: manifest error: {exc}", file=sys.stderr)
        return EXIT_MANIFEST
    except Exception as exc:
        print(f"evasionlab: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
