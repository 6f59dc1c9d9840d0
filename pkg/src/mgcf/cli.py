"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data or format error, 3 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from mgcf import __version__
from mgcf.cf import METHODS, generate_cf_batch, load_cfs, save_cfs
from mgcf.dataset import load_ucr, ucr_paths
from mgcf.errors import InvariantViolation, MGCFError, StageError
from mgcf.metrics import evaluate, load_report, save_report
from mgcf.mining import DEFAULT_FRACTIONS, MiningStats, load_motifs, mine_motifs, save_motifs
from mgcf.pipeline import (
    CLASSIFIERS,
    OUTPUT_DIR_ENV,
    RunConfig,
    build_classifier,
    compare,
    default_output_dir,
    format_rows,
    run_pipeline,
)

log = logging.getLogger("mgcf")

EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fractions(text: str) -> tuple:
    try:
        vals = tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")
    if not vals or not all(0.0 < v < 1.0 for v in vals):
        raise argparse.ArgumentTypeError("fractions must be numbers in (0, 1)")
    return vals


def _out(args, name: str) -> Path:
    return Path(args.out) if args.out else default_output_dir() / name


def _write(path: Path | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _load_split(train_path, test_path):
    train = load_ucr(train_path)
    label_map = {lab: i for i, lab in enumerate(train.raw_labels)}
    test = load_ucr(test_path, label_map=label_map, name=train.name)
    return train, test


def cmd_mine(args) -> int:
    train = load_ucr(args.train)
    stats = MiningStats()
    t0 = time.perf_counter()
    motifs = mine_motifs(
        train, args.fractions, early_abandon=not args.no_early_abandon, n_jobs=args.jobs, stats=stats
    )
    log.info(
        "mined %d candidates (%d abandoned) in %.2fs",
        stats.n_candidates,
        stats.n_abandoned,
        time.perf_counter() - t0,
    )
    out = _out(args, "motifs.json")
    out.parent.mkdir(parents=True, exist_ok=True)
    save_motifs(motifs, out)
    return 0


def cmd_explain(args) -> int:
    train, test = _load_split(args.train, args.test)
    f = build_classifier(args.classifier, train)
    motifs = None
    if args.method == "mgcf":
        if not args.motifs:
            raise MGCFError("--motifs is required for --method mgcf")
        motifs = load_motifs(args.motifs)
    batch = generate_cf_batch(list(test.series), f, motifs, train, method=args.method)
    out = _out(args, "cfs.json")
    out.parent.mkdir(parents=True, exist_ok=True)
    save_cfs(batch, out)
    log.info("wrote %d counterfactuals in %.4fs", len(batch.counterfactuals), batch.runtime_seconds)
    return 0


def cmd_evaluate(args) -> int:
    batch = load_cfs(args.cfs)
    report = evaluate(
        batch.counterfactuals,
        batch.runtime_seconds,
        method=batch.method,
        dataset=batch.dataset,
        mining_runtime_seconds=args.mining_runtime,
    )
    out = _out(args, "report.json")
    out.parent.mkdir(parents=True, exist_ok=True)
    save_report(report, out)
    return 0


def cmd_report(args) -> int:
    path = Path(args.report) if args.report else default_output_dir() / "report.json"
    rep = load_report(path)
    _write(args.out, format_rows([rep.summary()], args.format))
    return 0


def cmd_run(args) -> int:
    if args.dataset:
        train_path, test_path = ucr_paths(args.dataset, args.ucr_root)
    elif args.train and args.test:
        train_path, test_path = Path(args.train), Path(args.test)
    else:
        raise _UsageError("run needs either --dataset or both --train and --test")
    cfg = RunConfig(
        train_path=train_path,
        test_path=test_path,
        fractions=args.fractions,
        method=args.method,
        classifier=args.classifier,
        early_abandon=not args.no_early_abandon,
        output_dir=Path(args.out_dir) if args.out_dir else default_output_dir(),
        n_jobs=args.jobs,
    )
    report = run_pipeline(cfg)
    print(json.dumps(report.summary(), indent=1))
    return 0


def cmd_compare(args) -> int:
    _write(args.out, format_rows(compare(args.reports), args.format))
    return 0


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mgcf", description="Motif-guided counterfactual explanations for time series.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    out_help = f"output file (default: ${OUTPUT_DIR_ENV}/%s or ./mgcf_out/%s)"

    def mining_flags(sp):
        sp.add_argument(
            "--fractions",
            type=_fractions,
            default=DEFAULT_FRACTIONS,
            help="motif lengths as fractions of the series length (default: 0.3,0.5,0.7)",
        )
        sp.add_argument("--no-early-abandon", action="store_true", help="score every candidate exhaustively")
        sp.add_argument("--jobs", type=int, default=1, help="threads for candidate scoring")

    sp = sub.add_parser("mine", help="mine one motif per class from a training file")
    sp.add_argument("--train", required=True)
    mining_flags(sp)
    sp.add_argument("--out", help=out_help % ("motifs.json", "motifs.json"))
    sp.set_defaults(func=cmd_mine)

    sp = sub.add_parser("explain", help="generate counterfactuals for every test series")
    sp.add_argument("--train", required=True)
    sp.add_argument("--test", required=True)
    sp.add_argument("--motifs", help="motifs.json from `mine` (required for mgcf)")
    sp.add_argument("--method", choices=METHODS, default="mgcf")
    sp.add_argument("--classifier", choices=CLASSIFIERS, default="1nn")
    sp.add_argument("--out", help=out_help % ("cfs.json", "cfs.json"))
    sp.set_defaults(func=cmd_explain)

    sp = sub.add_parser("evaluate", help="compute metrics for a counterfactual file")
    sp.add_argument("--cfs", required=True)
    sp.add_argument("--mining-runtime", type=float, default=None, help="mining time to record, in seconds")
    sp.add_argument("--out", help=out_help % ("report.json", "report.json"))
    sp.set_defaults(func=cmd_evaluate)

    sp = sub.add_parser("report", help="render a report.json as CSV or JSON")
    sp.add_argument("--report", help="report file (default: <output dir>/report.json)")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--out", help="write here instead of stdout")
    sp.set_defaults(func=cmd_report)

    sp = sub.add_parser("run", help="full pipeline: mine, explain, evaluate")
    sp.add_argument("--train")
    sp.add_argument("--test")
    sp.add_argument("--dataset", help="UCR dataset name, resolved under --ucr-root")
    sp.add_argument("--ucr-root", help="directory holding <name>/<name>_TRAIN.tsv files")
    mining_flags(sp)
    sp.add_argument("--method", choices=METHODS, default="mgcf")
    sp.add_argument("--classifier", choices=CLASSIFIERS, default="1nn")
    sp.add_argument("--out-dir", help=f"output directory (default: ${OUTPUT_DIR_ENV} or ./mgcf_out)")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("compare", help="tabulate several report.json files")
    sp.add_argument("reports", nargs="+")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--out", help="write here instead of stdout")
    sp.set_defaults(func=cmd_compare)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"mgcf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StageError as exc:
        print(f"mgcf: {exc}", file=sys.stderr)
        return EXIT_INTERNAL if isinstance(exc.cause, InvariantViolation) else EXIT_DATA
    except InvariantViolation as exc:
        print(f"mgcf: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (MGCFError, OSError, ValueError) as exc:
        print(f"mgcf: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
