"""Dataset ingestion, all-pairs distance matrices, nth-neighbor retrieval scores."""

from __future__ import annotations

import hashlib
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import MetricConfig
from .descriptor import DescriptorGrid, compute_descriptor, format_record, parse_record
from .mask import load_mask, validate_shape, fill_holes
from .metric import descriptor_distance

SUPPORTED_SUFFIXES = {".pgm", ".png"}


class BenchError(RuntimeError):
    """Dataset or matrix computation failure; no partial outputs are emitted."""


@dataclass(frozen=True)
class DatasetEntry:
    id: str
    class_label: str
    mask_path: Path


@dataclass(frozen=True)
class Dataset:
    entries: tuple[DatasetEntry, ...]

    def __post_init__(self) -> None:
        ids = [e.id for e in self.entries]
        if len(ids) != len(set(ids)):
            raise BenchError("duplicate entry ids in dataset")

    @property
    def class_sizes(self) -> dict[str, int]:
        sizes: dict[str, int] = {}
        for e in self.entries:
            sizes[e.class_label] = sizes.get(e.class_label, 0) + 1
        return sizes


@dataclass(frozen=True)
class DistanceMatrix:
    ids: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        n = len(self.ids)
        if vals.shape != (n, n):
            raise ValueError("matrix shape does not match ids")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class RetrievalReport:
    """Per-class nth-neighbor accuracies (percent) for n = 1..N, plus
    entry-weighted totals."""

    per_class: dict[str, list[float]]
    totals: list[float]
    class_sizes: dict[str, int]


def ingest_dataset(root: str | Path) -> Dataset:
    """Each immediate subdirectory is a class; a flat directory falls back to
    classing files by the name prefix before the last '-'."""
    root = Path(root)
    if not root.is_dir():
        raise BenchError(f"no such dataset directory: {root}")
    entries: list[DatasetEntry] = []
    subdirs = sorted(d for d in root.iterdir() if d.is_dir())
    if subdirs:
        for d in subdirs:
            for f in sorted(d.iterdir()):
                if f.suffix.lower() in SUPPORTED_SUFFIXES:
                    entries.append(DatasetEntry(f"{d.name}/{f.name}", d.name, f))
    else:
        for f in sorted(root.iterdir()):
            if f.suffix.lower() in SUPPORTED_SUFFIXES:
                label = f.stem.rsplit("-", 1)[0] if "-" in f.stem else f.stem
                entries.append(DatasetEntry(f.name, label, f))
    if not entries:
        raise BenchError(f"no supported raster files under {root}")
    ds = Dataset(tuple(entries))
    for label, size in sorted(ds.class_sizes.items()):
        if size < 2:
            warnings.warn(
                f"class '{label}' has a single entry; its nth-neighbor accuracy is undefined"
            )
    return ds


def _config_hash(config: MetricConfig) -> str:
    return hashlib.sha256(config.config_line().encode()).hexdigest()[:16]


def _describe_entry(args: tuple[str, MetricConfig, bool, str | None]) -> tuple[str, str]:
    """Worker: returns (entry id implicit by order, serialized descriptor record)."""
    path, config, invert, cache_dir = args
    file_bytes = Path(path).read_bytes()
    if cache_dir is not None:
        key = hashlib.sha256(file_bytes).hexdigest()[:24] + "-" + _config_hash(config)
        cache_file = Path(cache_dir) / f"{key}.desc"
        if cache_file.is_file():
            return path, cache_file.read_text()
    mask = load_mask(path, invert=invert)
    report = validate_shape(fill_holes(mask))
    if not report.connected:
        raise BenchError(
            f"{path}: disconnected foreground ({report.component_count} components)"
        )
    record = format_record(compute_descriptor(mask, config))
    if cache_dir is not None:
        Path(cache_dir).mkdir(parents=True, exist_ok=True)
        cache_file.write_text(record)
    return path, record


def compute_descriptors(
    dataset: Dataset,
    config: MetricConfig,
    workers: int = 1,
    invert: bool = False,
    cache_dir: str | Path | None = None,
) -> list[DescriptorGrid]:
    """One descriptor per entry, in dataset order; aborts on any failure."""
    jobs = [
        (str(e.mask_path), config, invert, str(cache_dir) if cache_dir else None)
        for e in dataset.entries
    ]
    failures: list[str] = []
    records: list[str | None] = [None] * len(jobs)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            try:
                for i, result in enumerate(pool.map(_describe_entry, jobs)):
                    records[i] = result[1]
            except Exception as exc:
                raise BenchError(f"descriptor computation failed: {exc}") from exc
    else:
        for i, job in enumerate(jobs):
            try:
                records[i] = _describe_entry(job)[1]
            except Exception as exc:
                failures.append(f"{dataset.entries[i].id}: {exc}")
    if failures:
        raise BenchError("descriptor computation failed:\n" + "\n".join(failures))
    return [parse_record(r) for r in records]


def compute_matrix(
    dataset: Dataset,
    config: MetricConfig,
    workers: int = 1,
    invert: bool = False,
    cache_dir: str | Path | None = None,
) -> DistanceMatrix:
    """Symmetric all-pairs matrix of quotient-metric values, zero diagonal."""
    descriptors = compute_descriptors(dataset, config, workers, invert, cache_dir)
    n = len(descriptors)
    values = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d, _ = descriptor_distance(descriptors[i], descriptors[j], config)
            values[i, j] = values[j, i] = d
    return DistanceMatrix(tuple(e.id for e in dataset.entries), values)


def nth_neighbor_scores(
    matrix: DistanceMatrix, dataset: Dataset, max_n: int
) -> RetrievalReport:
    """Per-class percentage of queries whose nth-closest other entry shares the
    query's class; distance ties break by id for determinism."""
    n_entries = len(matrix.ids)
    if max_n >= n_entries:
        raise ValueError("max_n must be smaller than the dataset size")
    labels = {e.id: e.class_label for e in dataset.entries}
    correct: dict[str, np.ndarray] = {
        label: np.zeros(max_n, dtype=int) for label in dataset.class_sizes
    }
    total_correct = np.zeros(max_n, dtype=int)
    for q in range(n_entries):
        order = sorted(
            (i for i in range(n_entries) if i != q),
            key=lambda i: (matrix.values[q, i], matrix.ids[i]),
        )
        q_label = labels[matrix.ids[q]]
        for n in range(max_n):
            if labels[matrix.ids[order[n]]] == q_label:
                correct[q_label][n] += 1
                total_correct[n] += 1
    sizes = dataset.class_sizes
    per_class = {
        label: [100.0 * c / sizes[label] for c in counts]
        for label, counts in correct.items()
    }
    totals = [100.0 * c / n_entries for c in total_correct]
    return RetrievalReport(per_class=per_class, totals=totals, class_sizes=sizes)


def matrix_to_csv(matrix: DistanceMatrix, config: MetricConfig) -> str:
    lines = [f"# shapedil distance matrix; {config.config_line()}"]
    lines.append("id," + ",".join(matrix.ids))
    for i, row_id in enumerate(matrix.ids):
        lines.append(row_id + "," + ",".join(f"{v:.9g}" for v in matrix.values[i]))
    return "\n".join(lines) + "\n"


def report_to_csv(report: RetrievalReport, config: MetricConfig) -> str:
    max_n = len(report.totals)
    lines = [f"# shapedil retrieval report; {config.config_line()}"]
    lines.append("class," + ",".join(str(n) for n in range(1, max_n + 1)))
    for label in sorted(report.per_class):
        lines.append(label + "," + ",".join(f"{v:.9g}" for v in report.per_class[label]))
    lines.append("TOTAL," + ",".join(f"{v:.9g}" for v in report.totals))
    return "\n".join(lines) + "\n"


def report_to_text(report: RetrievalReport, config: MetricConfig) -> str:
    max_n = len(report.totals)
    label_w = max(len("TOTAL"), *(len(c) for c in report.per_class)) + 2
    header = "class".ljust(label_w) + "".join(f"{n:>7d}" for n in range(1, max_n + 1))
    lines = [f"# {config.config_line()}", header, "-" * len(header)]
    for label in sorted(report.per_class):
        row = label.ljust(label_w) + "".join(f"{v:7.1f}" for v in report.per_class[label])
        lines.append(row)
    lines.append("-" * len(header))
    lines.append("TOTAL".ljust(label_w) + "".join(f"{v:7.1f}" for v in report.totals))
    return "\n".join(lines) + "\n"
