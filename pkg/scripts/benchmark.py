"""Run MG-CF and the nearest-unlike-neighbour baseline on the five benchmark datasets.

Writes one output directory per (dataset, method) plus a comparison table:

    python scripts/benchmark.py --out results/ [--format csv]
"""

import argparse
from pathlib import Path

from mgcf.dataset import BENCHMARK_DATASETS, ucr_paths
from mgcf.pipeline import RunConfig, compare, format_rows, run_pipeline


def main():
    ap = argparse.ArgumentParser(description="benchmark harness")
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--datasets", nargs="+", default=list(BENCHMARK_DATASETS))
    ap.add_argument("--methods", nargs="+", default=["mgcf", "nun"], choices=["mgcf", "nun"])
    ap.add_argument("--format", choices=("csv", "json"), default="csv")
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    reports = []
    for name in args.datasets:
        train, test = ucr_paths(name)
        for method in args.methods:
            out = args.out / name / method
            rep = run_pipeline(RunConfig(train, test, method=method, output_dir=out, n_jobs=args.jobs))
            print(
                f"{name:12s} {method:5s} flip={rep.flip_rate:.3f} sparsity={rep.mean_sparsity:.3f} "
                f"segments={rep.mean_segments:.2f} L1={rep.mean_proximity:.2f} "
                f"mine={rep.mining_runtime_seconds:.2f}s explain={rep.runtime_seconds:.4f}s"
            )
            reports.append(out / "report.json")

    table = args.out / f"comparison.{args.format}"
    table.write_text(format_rows(compare(reports), args.format))
    print(f"wrote {table}")


if __name__ == "__main__":
    main()
