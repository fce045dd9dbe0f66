#!/usr/bin/env python3
"""Nth-neighbor retrieval experiment over a silhouette dataset.

Point it at a directory with one subdirectory per class (or a flat directory
with `class-index` file naming, e.g. the MPEG-7 CE Shape-1 Part-B subset) and
it prints and saves the per-class accuracy table.

Usage:
    python scripts/run_retrieval_experiment.py DATASET_DIR [--out OUT_DIR]
        [--max-n 10] [--workers 8] [--invert] [--betas 3,5]
"""

from __future__ import annotations

import argparse
import os
import time
from pathlib import Path

from shapedil.bench import (
    compute_matrix,
    ingest_dataset,
    matrix_to_csv,
    nth_neighbor_scores,
    report_to_csv,
    report_to_text,
)
from shapedil.config import MetricConfig


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("root")
    parser.add_argument("--out", default="retrieval-out")
    parser.add_argument("--max-n", type=int, default=10, dest="max_n")
    parser.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    parser.add_argument("--invert", action="store_true")
    parser.add_argument("--epsilon", type=float, default=8.0)
    parser.add_argument("--area", type=int, default=4096)
    parser.add_argument("--kappa", type=float, default=0.2)
    parser.add_argument("--betas", default="1,3,5")
    parser.add_argument("--cache", default=None, help="descriptor cache directory")
    args = parser.parse_args()

    config = MetricConfig(
        epsilon=args.epsilon,
        area=args.area,
        kappa=args.kappa,
        betas=tuple(float(b) for b in args.betas.split(",")),
    )
    dataset = ingest_dataset(args.root)
    print(f"{len(dataset.entries)} shapes, {len(dataset.class_sizes)} classes")

    start = time.time()
    matrix = compute_matrix(
        dataset, config, workers=args.workers, invert=args.invert, cache_dir=args.cache
    )
    print(f"distance matrix in {time.time() - start:.1f}s")

    report = nth_neighbor_scores(matrix, dataset, args.max_n)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "matrix.csv").write_text(matrix_to_csv(matrix, config))
    (out / "report.csv").write_text(report_to_csv(report, config))
    text = report_to_text(report, config)
    (out / "report.txt").write_text(text)
    print(text)


if __name__ == "__main__":
    main()
