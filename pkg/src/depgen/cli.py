"""Command-line front end: ``depgen train | generate | eval | inspect-features``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__, store
from .corpus import CorpusError, attach_trees, load_conllu, load_scenarios, parse_scenarios
from .evaluation import evaluate
from .generator import GenerationError
from .model import FORMAT_VERSION, train_model
from .planner import PlanningError
from .realizer import generate

GENERATE_DEFAULTS = {"beam": 20, "candidates": 20, "top": 5, "select_threshold": 0.0,
                     "max_exhaustive": 8, "perm_cap": 7, "tree_weight": 0.0, "jobs": 1}


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="depgen", description=__doc__)
    parser.add_argument("--version", action="version",
                        version=f"depgen {__version__} (model format {FORMAT_VERSION})")
    parser.add_argument("--config", help="JSON file with default option values")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a model from parsed scenarios")
    p.add_argument("corpus", help="scenario JSONL file")
    p.add_argument("--trees", help="CoNLL-U file with one tree per reference, in order")
    p.add_argument("-o", "--out", required=True, help="model file (.dgm.json)")
    p.add_argument("--align-report", help="write the alignment report as JSON lines")

    p = sub.add_parser("generate", help="generate sentences for scenario MRs")
    p.add_argument("model")
    p.add_argument("input", help="scenario JSONL file (references optional)")
    p.add_argument("-o", "--out", help="output JSONL (default: stdout)")
    p.add_argument("--beam", type=_positive, help="beam width B")
    p.add_argument("--candidates", type=_positive, help="lexicalizations per tree C")
    p.add_argument("--top", type=_positive, help="sentences kept per scenario")
    p.add_argument("--select-threshold", type=float)
    p.add_argument("--max-exhaustive", type=_positive)
    p.add_argument("--perm-cap", type=_positive)
    p.add_argument("--tree-weight", type=float, help="weight of the tree score in ranking")
    p.add_argument("--trace", help="write one JSON line per beam step")
    p.add_argument("--jobs", type=_positive)
    p.set_defaults(**GENERATE_DEFAULTS)

    p = sub.add_parser("eval", help="BLEU-4 and slot error rate")
    p.add_argument("--hyp", required=True,
                   help="one sentence per line, or generate output (rank 1 is used)")
    p.add_argument("--ref", required=True,
                   help="one line per scenario, references separated by ' ||| ', "
                        "or a scenario JSONL file")
    p.add_argument("--mr", required=True, help="scenario JSONL file")
    p.add_argument("--smooth", action="store_true", help="add-one smoothing for orders 2-4")

    p = sub.add_parser("inspect-features", help="dump features with counts and probabilities")
    p.add_argument("model")
    p.add_argument("--words", action="store_true", help="dump word features instead")
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    with open(known.config, encoding="utf-8") as fh:
        cfg = json.load(fh)
    cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
    for action in parser._subparsers._group_actions:
        for sp in action.choices.values():
            sp.set_defaults(**cfg)


def cmd_train(args) -> int:
    scenarios = load_scenarios(args.corpus)
    if args.trees:
        scenarios = attach_trees(scenarios, load_conllu(args.trees))
    model, report = train_model(scenarios)
    store.save(model, args.out)
    if args.align_report:
        with open(args.align_report, "w", encoding="utf-8") as fh:
            for row in report:
                fh.write(json.dumps(row, sort_keys=True) + "\n")
    stats = {"scenarios": len(scenarios), **model.stats()}
    print(json.dumps(stats, sort_keys=True))
    return 0


_WORKER_MODEL = None


def _init_worker(path):
    global _WORKER_MODEL
    _WORKER_MODEL = store.load(path)


def _run_scenario(scenario, model, opts, trace=None):
    try:
        out = generate(scenario, model, beam=opts["beam"], candidates=opts["candidates"],
                       threshold=opts["select_threshold"], perm_cap=opts["perm_cap"],
                       max_exhaustive=opts["max_exhaustive"], tree_weight=opts["tree_weight"],
                       trace=trace)
    except (PlanningError, GenerationError) as exc:
        return scenario.id, None, str(exc)
    rows = [{"scenario": scenario.id, "rank": k, "sentence": r.sentence, "score": r.score,
             "tree_score": r.tree_score} for k, r in enumerate(out[:opts["top"]], start=1)]
    return scenario.id, rows, None


def _generate_one(job):
    scenario, opts = job
    return _run_scenario(scenario, _WORKER_MODEL, opts)


def cmd_generate(args) -> int:
    scenarios = load_scenarios(args.input)
    opts = {k: getattr(args, k) for k in GENERATE_DEFAULTS}
    if args.trace:
        # tracing writes to one file, so it always runs in-process
        model = store.load(args.model)
        results = []
        with open(args.trace, "w", encoding="utf-8") as fh:
            for sc in scenarios:
                def trace(step, sid=sc.id):
                    fh.write(json.dumps({"scenario": sid, **step}, sort_keys=True) + "\n")
                results.append(_run_scenario(sc, model, opts, trace))
    elif args.jobs > 1:
        with ProcessPoolExecutor(args.jobs, initializer=_init_worker,
                                 initargs=(args.model,)) as pool:
            results = list(pool.map(_generate_one, [(sc, opts) for sc in scenarios]))
    else:
        model = store.load(args.model)
        results = [_run_scenario(sc, model, opts) for sc in scenarios]
    failed = 0
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        for _, rows, err in results:
            if err is not None:
                failed += 1
                print(f"error: {err}", file=sys.stderr)
                continue
            for row in rows:
                out.write(json.dumps(row, sort_keys=True) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 1 if failed else 0


def _read_lines(path) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.rstrip("\n") for line in fh if line.strip()]


def _read_hypotheses(path) -> list[str]:
    lines = _read_lines(path)
    if lines and lines[0].lstrip().startswith("{"):
        best = {}
        order = []
        for line in lines:
            row = json.loads(line)
            if row["scenario"] not in best:
                order.append(row["scenario"])
            if row.get("rank", 1) == 1:
                best[row["scenario"]] = row["sentence"]
        return [best[s] for s in order]
    return lines


def _read_references(path) -> list[list[str]]:
    lines = _read_lines(path)
    if lines and lines[0].lstrip().startswith("{"):
        return [list(sc.references) for sc in parse_scenarios(lines)]
    return [[r.strip() for r in line.split(" ||| ")] for line in lines]


def cmd_eval(args, parser) -> int:
    hyps = _read_hypotheses(args.hyp)
    refs = _read_references(args.ref)
    scenarios = load_scenarios(args.mr)
    if not len(hyps) == len(refs) == len(scenarios):
        parser.error(f"line counts differ: {len(hyps)} hypotheses, {len(refs)} reference "
                     f"lines, {len(scenarios)} MRs")
    report = evaluate(hyps, refs, [sc.mr for sc in scenarios], [sc.id for sc in scenarios],
                      smooth=args.smooth)
    print(json.dumps(report.to_json(), indent=2, sort_keys=True))
    return 0


def cmd_inspect(args) -> int:
    model = store.load(args.model)
    if args.words:
        for wf, c in model.word_model.sorted_items():
            print(f"{wf.canonical}\t{c}")
        return 0
    fm = model.feature_model
    for f, c in fm.sorted_items():
        print(f"{f.canonical}\t{c}\t{fm.probability(f)!r}")
    return 0


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    _apply_config(parser, argv)
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "train":
            return cmd_train(args)
        if args.command == "generate":
            return cmd_generate(args)
        if args.command == "eval":
            return cmd_eval(args, parser)
        return cmd_inspect(args)
    except (CorpusError, PlanningError, store.ModelFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
