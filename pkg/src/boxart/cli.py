"""Command line entry point: ``boxart <command> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .errors import BoxArtError
from .grid import CharGrid
from .harness import (ChatClient, ClientConfig, MockClient, baseline_grade, read_jsonl, regrade,
                      run_trials, summarize, to_csv, to_markdown, write_jsonl)
from .harness.client import ClientError
from .harness.records import dumps
from .humanart import build_part_trials, load_corpus
from .kinds import TaskKind
from .structure import parse_boxes
from .trials import build_trials, make_settings

PART_KIND = "part-recognition"


def _emit(text: str, out):
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _jsonl(rows) -> str:
    return "".join(dumps(r) + "\n" for r in rows)


def cmd_gen(args) -> int:
    if args.kind == PART_KIND:
        if not args.corpus:
            raise SystemExit("gen: --corpus is required for part-recognition trials")
        trials = build_part_trials(load_corpus(args.corpus), args.n, args.seed)
    else:
        kind = TaskKind(args.kind)
        settings = make_settings(
            kind, size=args.size, names_shown=None if args.names is None else args.names == "on",
            noise_level=args.noise_level, padding_kept=args.padding != "ragged",
            enlarged=args.enlarged, seed=args.seed)
        trials = build_trials(settings, args.n, args.seed)
    _emit(_jsonl(t.to_record(tid) for tid, t in trials), args.out)
    return 0


def _client(args):
    if args.mock:
        script = json.loads(Path(args.mock).read_text(encoding="utf-8"))
        return MockClient.per_prompt(script) if isinstance(script, dict) else MockClient(script)
    config = ClientConfig.load(args.config) if args.config else ClientConfig()
    return ChatClient(config)


def cmd_run(args) -> int:
    if not args.out:
        raise SystemExit("run: --out <directory> is required")
    trials = list(read_jsonl(args.trials))
    client = _client(args)
    parallel = args.parallel
    if parallel is None:
        parallel = client.config.max_parallel_requests if isinstance(client, ChatClient) else 1
    try:
        stats = run_trials(trials, client, args.out, max_parallel=parallel)
    finally:
        client.close()
    print(f"answered {stats['answered']}, skipped {stats['skipped']}, errors {stats['errors']}",
          file=sys.stderr)
    return 0 if stats["errors"] == 0 else 1


def cmd_grade(args) -> int:
    grades = regrade(read_jsonl(args.trials), read_jsonl(args.responses))
    _emit(_jsonl(g.to_json() for g in grades), args.out)
    return 0


def cmd_baseline(args) -> int:
    trials = [t for t in read_jsonl(args.trials) if "choices" in t]
    _emit(_jsonl(baseline_grade(t).to_json() for t in trials), args.out)
    return 0


def cmd_report(args) -> int:
    grades = [g for path in args.grades for g in read_jsonl(path)]
    rows = summarize(grades)
    _emit(to_markdown(rows) if args.markdown else to_csv(rows), args.out)
    return 0


def cmd_parse(args) -> int:
    path = Path(args.path)
    if path.is_dir():
        records = load_corpus(path)
        _emit(_jsonl({"id": r.id, "class": r.object_class, "parts": sorted(r.parts)} for r in records),
              args.out)
        return 0
    report = parse_boxes(CharGrid.from_text(path.read_text(encoding="utf-8").rstrip("\n")))
    _emit(json.dumps(report.to_json(), indent=1) + "\n", args.out)
    return 0 if report.is_clean else 1


def build_parser() -> argparse.ArgumentParser:
    # Global flags are accepted before or after the command; the per-command
    # copy suppresses defaults so it never clobbers a value given up front.
    def flags(defaults: bool) -> argparse.ArgumentParser:
        d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
        f = argparse.ArgumentParser(add_help=False)
        f.add_argument("--seed", type=int, default=d(0))
        f.add_argument("--config", default=d(None), help="client config JSON file")
        f.add_argument("--out", default=d(None), help="output file (directory for run); stdout when omitted")
        f.add_argument("-v", "--verbose", action="store_true", default=d(False))
        return f

    common = flags(False)
    p = argparse.ArgumentParser(prog="boxart", parents=[flags(True)],
                                description="ASCII box-diagram trials, runs and grading")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="build trial JSONL")
    g.add_argument("--kind", required=True, choices=[k.value for k in TaskKind] + [PART_KIND])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--size", type=float, default=1.0, choices=[0.3, 0.6, 1.0])
    g.add_argument("--names", choices=["on", "off"])
    g.add_argument("--noise-level", type=float)
    g.add_argument("--padding", choices=["kept", "ragged"], default="kept")
    g.add_argument("--enlarged", choices=["ref", "choices"])
    g.add_argument("--corpus", help="human-art corpus directory (part-recognition)")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", parents=[common], help="query a model for every trial")
    r.add_argument("--trials", required=True)
    r.add_argument("--mock", help="JSON list of responses, or object mapping prompt to responses")
    r.add_argument("--parallel", type=int)
    r.set_defaults(func=cmd_run)

    gr = sub.add_parser("grade", parents=[common], help="re-grade stored responses")
    gr.add_argument("--trials", required=True)
    gr.add_argument("--responses", required=True)
    gr.set_defaults(func=cmd_grade)

    b = sub.add_parser("baseline", parents=[common], help="edit-distance grades for recognition trials")
    b.add_argument("--trials", required=True)
    b.set_defaults(func=cmd_baseline)

    rp = sub.add_parser("report", parents=[common], help="accuracy table from grade files")
    rp.add_argument("grades", nargs="+")
    rp.add_argument("--markdown", action="store_true")
    rp.set_defaults(func=cmd_report)

    ps = sub.add_parser("parse", parents=[common], help="parse a diagram file or validate a corpus")
    ps.add_argument("path")
    ps.set_defaults(func=cmd_parse)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (BoxArtError, ClientError, ValueError, KeyError, OSError) as e:
        print(f"boxart {args.command}: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
