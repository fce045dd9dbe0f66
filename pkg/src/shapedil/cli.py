"""Command-line frontend: validate, describe, dist, bench, proptest.

Exit codes: 0 success, 1 validation/metric-property failure, 2 usage/IO error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bench as bench_mod
from .config import DEFAULT_BETAS, DEFAULT_THETAS, ConfigError, MetricConfig
from .descriptor import compute_descriptor, dense_surface, format_record
from .mask import MaskError, load_mask, validate_shape
from .metric import descriptor_distance
from .props import run_property_suites

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(",") if v.strip())


def _read_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            key, _, val = line.partition("=")
        else:
            key, _, val = line.partition(" ")
        values[key.strip()] = val.strip()
    return values


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key=value config file; flags override it")
    parser.add_argument("--epsilon", type=float, default=None, help="neighborhood radius in pixels")
    parser.add_argument("--area", type=int, default=None, help="normalized shape area in pixels")
    parser.add_argument("--kappa", type=float, default=None, help="beta weight decay coefficient")
    parser.add_argument("--thetas", default=None, help="comma-separated direction grid (radians)")
    parser.add_argument("--betas", default=None, help="comma-separated expansion coefficients")
    parser.add_argument("--invert", action="store_true", help="treat dark pixels as foreground")
    parser.add_argument("--workers", type=int, default=1, help="worker process count")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized suites")


def build_config(args: argparse.Namespace) -> MetricConfig:
    base = {
        "epsilon": 8.0,
        "area": 4096,
        "kappa": 0.2,
        "thetas": DEFAULT_THETAS,
        "betas": DEFAULT_BETAS,
    }
    if args.config:
        file_vals = _read_config_file(args.config)
        if "epsilon" in file_vals:
            base["epsilon"] = float(file_vals["epsilon"])
        if "area" in file_vals:
            base["area"] = int(file_vals["area"])
        if "kappa" in file_vals:
            base["kappa"] = float(file_vals["kappa"])
        if "thetas" in file_vals:
            base["thetas"] = _parse_floats(file_vals["thetas"])
        if "betas" in file_vals:
            base["betas"] = _parse_floats(file_vals["betas"])
    if args.epsilon is not None:
        base["epsilon"] = args.epsilon
    if args.area is not None:
        base["area"] = args.area
    if args.kappa is not None:
        base["kappa"] = args.kappa
    if args.thetas is not None:
        base["thetas"] = _parse_floats(args.thetas)
    if args.betas is not None:
        base["betas"] = _parse_floats(args.betas)
    return MetricConfig(**base)


def cmd_validate(args: argparse.Namespace) -> int:
    all_ok = True
    for path in args.paths:
        try:
            mask = load_mask(path, invert=args.invert)
        except MaskError as exc:
            print(f"{path}: ERROR {exc}")
            all_ok = False
            continue
        report = validate_shape(mask)
        if report.connected and report.hole_free:
            print(f"{path}: OK")
        elif report.connected:
            print(f"{path}: hole_count={report.hole_count} (repairable)")
        else:
            print(f"{path}: disconnected ({report.component_count} components)")
            all_ok = False
    return EXIT_OK if all_ok else EXIT_FAIL


def cmd_describe(args: argparse.Namespace) -> int:
    config = build_config(args)
    mask = load_mask(args.path, invert=args.invert)
    record = format_record(compute_descriptor(mask, config))
    if args.out:
        Path(args.out).write_text(record)
    else:
        sys.stdout.write(record)
    if args.dense:
        try:
            nt, nb = (int(v) for v in args.dense.lower().split("x"))
        except ValueError:
            raise SystemExit(EXIT_USAGE)
        rows = dense_surface(mask, config, nt, nb)
        dense_path = Path(args.out).with_suffix(".dense.csv") if args.out else Path(
            Path(args.path).stem + ".dense.csv"
        )
        lines = [f"# shapedil dense surface; {config.config_line()}", "theta,beta,P"]
        lines += [f"{t:.9g},{b:.9g},{v:.9g}" for t, b, v in rows]
        dense_path.write_text("\n".join(lines) + "\n")
        print(f"dense surface written to {dense_path}")
    return EXIT_OK


def cmd_dist(args: argparse.Namespace) -> int:
    config = build_config(args)
    d1 = compute_descriptor(load_mask(args.path_a, invert=args.invert), config)
    d2 = compute_descriptor(load_mask(args.path_b, invert=args.invert), config)
    value, alignment = descriptor_distance(d1, d2, config)
    print(f"distance {value:.9g}")
    print(f"alignment shift={alignment.shift} reflected={str(alignment.reflected).lower()}")
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    config = build_config(args)
    out_dir = Path(args.out or "bench-out")
    dataset = bench_mod.ingest_dataset(args.root)
    matrix = bench_mod.compute_matrix(
        dataset,
        config,
        workers=args.workers,
        invert=args.invert,
        cache_dir=args.cache,
    )
    report = bench_mod.nth_neighbor_scores(matrix, dataset, args.max_n)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "matrix.csv").write_text(bench_mod.matrix_to_csv(matrix, config))
    (out_dir / "report.csv").write_text(bench_mod.report_to_csv(report, config))
    text = bench_mod.report_to_text(report, config)
    (out_dir / "report.txt").write_text(text)
    print(text, end="")
    totals = " ".join(f"{v:.1f}" for v in report.totals)
    print(f"totals: {totals}")
    return EXIT_OK


def cmd_proptest(args: argparse.Namespace) -> int:
    config = build_config(args)
    dataset = bench_mod.ingest_dataset(args.root)
    violations, lines = run_property_suites(
        dataset, config, seed=args.seed, invert=args.invert
    )
    for line in lines:
        print(line)
    for v in violations:
        print(str(v))
    print("proptest: " + ("PASS" if not violations else f"FAIL ({len(violations)} violations)"))
    return EXIT_OK if not violations else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shapedil",
        description="Directional dilation-ratio shape descriptors and retrieval benchmarks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check silhouette files against the shape conditions")
    p.add_argument("paths", nargs="+")
    p.add_argument("--invert", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("describe", help="compute and print a descriptor grid")
    p.add_argument("path")
    _add_config_flags(p)
    p.add_argument("--dense", help="NxM fine grid CSV export for plotting, e.g. 64x16")
    p.add_argument("--out", help="write the record here instead of stdout")
    p.set_defaults(func=cmd_describe)

    p = sub.add_parser("dist", help="quotient-metric distance between two silhouettes")
    p.add_argument("path_a")
    p.add_argument("path_b")
    _add_config_flags(p)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("bench", help="nth-neighbor retrieval benchmark over a dataset")
    p.add_argument("root")
    _add_config_flags(p)
    p.add_argument("--max-n", type=int, default=10, dest="max_n")
    p.add_argument("--out", help="output directory (matrix.csv, report.csv, report.txt)")
    p.add_argument("--cache", help="descriptor cache directory")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("proptest", help="run the invariant suites against a corpus")
    p.add_argument("root")
    _add_config_flags(p)
    p.set_defaults(func=cmd_proptest)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (MaskError, ConfigError, bench_mod.BenchError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def console_main() -> None:
    sys.exit(main())
