"""Search for the triggering interaction of each user-driven variant.

Compares three views of a user-driven bundle: a plain run with no events,
breadth-first event-sequence exploration, and guard forcing.
"""

import argparse
import time

from evasionlab.emulator import EnvConfig, run_page
from evasionlab.explorer import ExplorationBudget, explore, force_guards
from evasionlab.harness import load_manifest
from evasionlab.obfuscation import ChunkPolicy, Technique, make_variant


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-sequences", type=int, default=10_000)
    ap.add_argument("--depth", type=int, default=3)
    args = ap.parse_args()
    budget = ExplorationBudget(max_sequences=args.max_sequences, max_depth=args.depth)

    manifest = load_manifest()
    carrier = manifest.carrier().files
    for sample in manifest.samples:
        b = make_variant(sample, Technique.USER_DRIVEN, ChunkPolicy(), carrier)
        env = EnvConfig(feed=b.feed)
        plain = len(run_page(b.files, env).sinks)
        t0 = time.perf_counter()
        r = explore(b.files, budget, env)
        t1 = time.perf_counter()
        g = force_guards(b.files, env)
        t2 = time.perf_counter()
        trace = " ".join(str(e) for e in r.triggering_trace) if r.found else "not found"
        print(f"{sample.id}: plain sinks {plain}; alphabet {len(r.alphabet)} events; "
              f"explore {r.sequences_tried} sequences ({t1 - t0:.2f}s) -> {trace}; "
              f"forcing {'reached' if g.found else 'missed'} the sink with "
              f"{len(g.guards_forced)} forced guard(s) ({t2 - t1:.2f}s)")


if __name__ == "__main__":
    main()
