"""Declarative runners for the six evaluation protocols.

Each experiment draws seeded per-label splits, featurizes profiles under the
requested providers and modes, trains the five-classifier suite, and emits a
metrics table (plus a sample-count curve for the sweep experiment) together
with a manifest recording the seed, dataset hash, split id lists, and
excluded profiles, so every reported number is re-derivable.

The real-data protocol counts (420/180 train/test per class, 600/1200, ...)
are defaults; a ``scale`` factor shrinks them proportionally for synthetic
desk-scale runs. Reruns with the same configuration and dataset produce
byte-identical outputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field, asdict
from typing import Callable, Sequence

import numpy as np

from .classifiers import TrainConfig, ensemble_evaluate
from .featurize import FeaturizationMode, featurize_profiles
from .profiles import Dataset, Label, Profile, Section, dataset_hash
from .text import TextPipeline, default_pipeline

EXPERIMENT_IDS = ("table2", "table3", "table4", "table5", "fig4", "fig5")

DEFAULT_SWEEP = (1, 2, 5, 10, 20, 50, 100, 200, 400, 600)
DEFAULT_ABLATIONS = (
    Section.OVERVIEW,
    Section.EXPERIENCES,
    Section.EDUCATIONS,
    Section.SKILLS,
)


class SplitError(ValueError):
    """A split request exceeds the profiles available for some label."""


@dataclass(frozen=True)
class SplitSpec:
    """Per-label train/test counts drawn by one seeded permutation."""

    train: dict[Label, int]
    test: dict[Label, int]
    seed: int


def make_split(dataset: Dataset, spec: SplitSpec) -> tuple[list[Profile], list[Profile]]:
    """Seeded per-label sampling without replacement; train and test disjoint."""
    rng = np.random.default_rng(spec.seed)
    train: list[Profile] = []
    test: list[Profile] = []
    for label in Label:
        n_train = spec.train.get(label, 0)
        n_test = spec.test.get(label, 0)
        if n_train < 0 or n_test < 0:
            raise SplitError(f"negative count requested for {label.value}")
        if n_train == 0 and n_test == 0:
            continue
        pool = dataset.by_label(label)
        needed = n_train + n_test
        if needed > len(pool):
            raise SplitError(f"{label.value} shortfall {needed - len(pool)}")
        order = rng.permutation(len(pool))
        train.extend(pool[i] for i in order[:n_train])
        test.extend(pool[i] for i in order[n_train : n_train + n_test])
    return train, test


@dataclass(frozen=True)
class MetricsRow:
    experiment: str
    provider: str
    mode: str
    classifier: str
    accuracy: float
    f1: float


@dataclass
class MetricsTable:
    rows: list[MetricsRow] = field(default_factory=list)

    def to_csv_text(self) -> str:
        lines = ["experiment,provider,mode,classifier,accuracy,f1"]
        for row in self.rows:
            lines.append(
                f"{row.experiment},{row.provider},{row.mode},{row.classifier},"
                f"{row.accuracy!r},{row.f1!r}"
            )
        return "\n".join(lines) + "\n"

    def avg_rows(self) -> list[MetricsRow]:
        return [row for row in self.rows if row.classifier == "avg"]


@dataclass(frozen=True)
class CurvePoint:
    provider: str
    n: int
    accuracy: float


def curve_csv_text(points: Sequence[CurvePoint]) -> str:
    lines = ["provider,n,accuracy"]
    for point in points:
        lines.append(f"{point.provider},{point.n},{point.accuracy!r}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class NamedProvider:
    name: str
    provider: object


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int = 0
    scale: float = 1.0
    sweep: tuple[int, ...] = DEFAULT_SWEEP
    ablate: tuple[Section, ...] = DEFAULT_ABLATIONS
    train: TrainConfig | None = None
    jobs: int = 1

    def __post_init__(self):
        if not 0.0 < self.scale <= 1.0:
            raise ValueError("scale must lie in (0, 1]")
        if any(n < 1 for n in self.sweep):
            raise ValueError("sweep values must be >= 1")
        if tuple(sorted(self.sweep)) != tuple(self.sweep) or len(set(self.sweep)) != len(self.sweep):
            raise ValueError("sweep values must be strictly increasing")

    def train_config(self) -> TrainConfig:
        return self.train if self.train is not None else TrainConfig(seed=self.seed)


@dataclass
class ExperimentResult:
    experiment: str
    table: MetricsTable
    manifest: dict
    curve: list[CurvePoint] | None = None


def _scaled(count: int, scale: float, what: str) -> int:
    value = int(round(count * scale))
    if value < 1:
        raise ValueError(f"scale {scale} makes {what} ({count}) vanish; use a larger scale")
    return value


def _fake_vs_legit(label: Label) -> int:
    return 0 if label is Label.LLP else 1


class _FeatureCache:
    """Per-run feature memo keyed by (provider, family, mode, variant, id).

    Experiments reuse profile features across overlapping splits (the sweep
    in particular re-featurizes nothing), and rows always come back in the
    requested profile order.
    """

    def __init__(self, pipeline: TextPipeline, jobs: int = 1):
        self.pipeline = pipeline
        self.jobs = jobs
        self._vectors: dict[tuple, np.ndarray] = {}
        self._excluded: set[tuple] = set()

    def matrix(
        self,
        profiles: Sequence[Profile],
        provider_name: str,
        provider,
        mode: FeaturizationMode,
        family: str,
        labeler: Callable[[Label], int],
        variant: str = "-",
    ) -> tuple[np.ndarray, np.ndarray, list[str], list[str]]:
        group = (provider_name, family, mode.value, variant)
        missing = [
            p for p in profiles if (group + (p.id,)) not in self._vectors
            and (group + (p.id,)) not in self._excluded
        ]
        if missing:
            result = featurize_profiles(
                missing, provider, mode, family, self.pipeline, self.jobs
            )
            for profile_id, row in zip(result.ids, result.X):
                self._vectors[group + (profile_id,)] = row
            for profile_id in result.excluded_ids:
                self._excluded.add(group + (profile_id,))
        rows, y, ids, excluded = [], [], [], []
        for profile in profiles:
            key = group + (profile.id,)
            if key in self._excluded:
                excluded.append(profile.id)
                continue
            rows.append(self._vectors[key])
            y.append(labeler(profile.label))
            ids.append(profile.id)
        X = np.stack(rows) if rows else np.zeros((0, 0))
        return X, np.array(y, dtype=np.int64), ids, excluded


@dataclass(frozen=True)
class _Cell:
    provider_name: str
    provider: object
    mode_label: str
    family: str
    mode: FeaturizationMode
    split_key: str
    variant: str = "-"
    ablate: Section | None = None


def _run_cells(
    experiment: str,
    cells: Sequence[_Cell],
    splits: dict[str, tuple[list[Profile], list[Profile]]],
    labelers: dict[str, Callable[[Label], int]],
    config: ExperimentConfig,
    cache: _FeatureCache,
) -> tuple[MetricsTable, dict]:
    table = MetricsTable()
    cell_meta: dict[str, dict] = {}
    for cell in cells:
        train_profiles, test_profiles = splits[cell.split_key]
        if cell.ablate is not None:
            train_profiles = [p.without_section(cell.ablate) for p in train_profiles]
            test_profiles = [p.without_section(cell.ablate) for p in test_profiles]
        labeler = labelers[cell.split_key]
        X_train, y_train, _, excluded_train = cache.matrix(
            train_profiles, cell.provider_name, cell.provider, cell.mode,
            cell.family, labeler, cell.variant,
        )
        X_test, y_test, _, excluded_test = cache.matrix(
            test_profiles, cell.provider_name, cell.provider, cell.mode,
            cell.family, labeler, cell.variant,
        )
        report = ensemble_evaluate(
            X_train, y_train, X_test, y_test,
            config.train_config(),
            excluded_train=len(excluded_train),
            excluded_test=len(excluded_test),
        )
        for classifier_report in report.reports:
            table.rows.append(
                MetricsRow(
                    experiment, cell.provider_name, cell.mode_label,
                    classifier_report.algorithm,
                    classifier_report.accuracy, classifier_report.f1,
                )
            )
        table.rows.append(
            MetricsRow(
                experiment, cell.provider_name, cell.mode_label, "avg",
                report.avg_accuracy, report.avg_f1,
            )
        )
        cell_meta[f"{cell.provider_name}/{cell.mode_label}"] = {
            "n_train": report.n_train,
            "n_test": report.n_test,
            "excluded_train": sorted(excluded_train),
            "excluded_test": sorted(excluded_test),
        }
    return table, cell_meta


def _base_manifest(
    experiment: str,
    dataset: Dataset,
    providers: Sequence[NamedProvider],
    config: ExperimentConfig,
    splits: dict[str, tuple[list[Profile], list[Profile]]],
    cell_meta: dict,
) -> dict:
    return {
        "experiment": experiment,
        "seed": config.seed,
        "scale": config.scale,
        "dataset_hash": dataset_hash(dataset),
        "label_counts": {k.value: v for k, v in dataset.label_counts.items()},
        "providers": [
            {"name": np_.name, **asdict(np_.provider.describe())} for np_ in providers
        ],
        "train_config": asdict(config.train_config()),
        "splits": {
            key: {
                "train_ids": [p.id for p in train],
                "test_ids": [p.id for p in test],
            }
            for key, (train, test) in splits.items()
        },
        "cells": cell_meta,
    }


def _paired_split(dataset, config, train_counts, test_counts) -> SplitSpec:
    return SplitSpec(train=train_counts, test=test_counts, seed=config.seed)


def run_table2(
    dataset: Dataset,
    providers: Sequence[NamedProvider],
    config: ExperimentConfig | None = None,
    pipeline: TextPipeline | None = None,
) -> ExperimentResult:
    """Numeric baseline vs section-tag vs section+subsection-tag embeddings."""
    config = config or ExperimentConfig()
    pipeline = pipeline or default_pipeline()
    s = config.scale
    spec = SplitSpec(
        train={Label.LLP: _scaled(420, s, "train LLPs"), Label.FLP: _scaled(420, s, "train FLPs")},
        test={Label.LLP: _scaled(180, s, "test LLPs"), Label.FLP: _scaled(180, s, "test FLPs")},
        seed=config.seed,
    )
    splits = {"main": make_split(dataset, spec)}
    labelers = {"main": _fake_vs_legit}
    cells = [_Cell("none", None, "numeric", "numeric", FeaturizationMode.RAW, "main")]
    for named in providers:
        cells.append(_Cell(named.name, named.provider, "ste", "embedding", FeaturizationMode.STE, "main"))
        cells.append(_Cell(named.name, named.provider, "sste", "embedding", FeaturizationMode.SSTE, "main"))
    cache = _FeatureCache(pipeline, config.jobs)
    table, cell_meta = _run_cells("table2", cells, splits, labelers, config, cache)
    manifest = _base_manifest("table2", dataset, providers, config, splits, cell_meta)
    return ExperimentResult("table2", table, manifest)


def run_table3(
    dataset: Dataset,
    providers: Sequence[NamedProvider],
    config: ExperimentConfig | None = None,
    pipeline: TextPipeline | None = None,
) -> ExperimentResult:
    """Plain mean-pooled text embeddings, alone and concatenated with counts."""
    config = config or ExperimentConfig()
    pipeline = pipeline or default_pipeline()
    s = config.scale
    spec = SplitSpec(
        train={Label.LLP: _scaled(420, s, "train LLPs"), Label.FLP: _scaled(420, s, "train FLPs")},
        test={Label.LLP: _scaled(180, s, "test LLPs"), Label.FLP: _scaled(180, s, "test FLPs")},
        seed=config.seed,
    )
    splits = {"main": make_split(dataset, spec)}
    labelers = {"main": _fake_vs_legit}
    cells = []
    for named in providers:
        cells.append(_Cell(named.name, named.provider, "raw", "embedding", FeaturizationMode.RAW, "main"))
        cells.append(_Cell(named.name, named.provider, "combined", "combined", FeaturizationMode.RAW, "main"))
    cache = _FeatureCache(pipeline, config.jobs)
    table, cell_meta = _run_cells("table3", cells, splits, labelers, config, cache)
    manifest = _base_manifest("table3", dataset, providers, config, splits, cell_meta)
    return ExperimentResult("table3", table, manifest)


def run_table4(
    dataset: Dataset,
    providers: Sequence[NamedProvider],
    config: ExperimentConfig | None = None,
    pipeline: TextPipeline | None = None,
) -> ExperimentResult:
    """Train on legit vs human-fake; test on unseen legit vs LLM-generated."""
    config = config or ExperimentConfig()
    pipeline = pipeline or default_pipeline()
    s = config.scale
    spec = SplitSpec(
        train={Label.LLP: _scaled(600, s, "train LLPs"), Label.FLP: _scaled(600, s, "train FLPs")},
        test={Label.LLP: _scaled(1200, s, "test LLPs"), Label.CLP: _scaled(1200, s, "test CLPs")},
        seed=config.seed,
    )
    splits = {"main": make_split(dataset, spec)}
    labelers = {"main": _fake_vs_legit}
    cells = [
        _Cell(named.name, named.provider, "sste", "embedding", FeaturizationMode.SSTE, "main")
        for named in providers
    ]
    cache = _FeatureCache(pipeline, config.jobs)
    table, cell_meta = _run_cells("table4", cells, splits, labelers, config, cache)
    manifest = _base_manifest("table4", dataset, providers, config, splits, cell_meta)
    return ExperimentResult("table4", table, manifest)


def run_table5(
    dataset: Dataset,
    providers: Sequence[NamedProvider],
    config: ExperimentConfig | None = None,
    pipeline: TextPipeline | None = None,
) -> ExperimentResult:
    """LLM-generated profiles stand in for fakes at training time."""
    config = config or ExperimentConfig()
    pipeline = pipeline or default_pipeline()
    s = config.scale
    spec = SplitSpec(
        train={Label.LLP: _scaled(1200, s, "train LLPs"), Label.CLP: _scaled(1200, s, "train CLPs")},
        test={Label.LLP: _scaled(600, s, "test LLPs"), Label.FLP: _scaled(600, s, "test FLPs")},
        seed=config.seed,
    )
    splits = {"main": make_split(dataset, spec)}
    labelers = {"main": _fake_vs_legit}
    cells = [
        _Cell(named.name, named.provider, "sste", "embedding", FeaturizationMode.SSTE, "main")
        for named in providers
    ]
    cache = _FeatureCache(pipeline, config.jobs)
    table, cell_meta = _run_cells("table5", cells, splits, labelers, config, cache)
    manifest = _base_manifest("table5", dataset, providers, config, splits, cell_meta)
    return ExperimentResult("table5", table, manifest)


def run_fig4(
    dataset: Dataset,
    providers: Sequence[NamedProvider],
    config: ExperimentConfig | None = None,
    pipeline: TextPipeline | None = None,
) -> ExperimentResult:
    """Accuracy on legit-vs-LLM as a function of LLM samples seen in training.

    Per sweep value n: train on (600s + n) legit plus 600s human-fake plus n
    LLM-generated (both fake classes labeled fake), test on (1200s - n)
    unseen legit vs (1200s - n) unseen LLM-generated.
    """
    config = config or ExperimentConfig()
    pipeline = pipeline or default_pipeline()
    s = config.scale
    base_llp = _scaled(600, s, "train LLPs")
    base_flp = _scaled(600, s, "train FLPs")
    test_pool = _scaled(1200, s, "test pool")
    splits = {}
    labelers = {}
    cells = []
    for n in config.sweep:
        if test_pool - n < 1:
            raise ValueError(
                f"sweep value {n} leaves no test profiles (pool {test_pool}); lower the sweep or raise scale"
            )
        spec = SplitSpec(
            train={Label.LLP: base_llp + n, Label.FLP: base_flp, Label.CLP: n},
            test={Label.LLP: test_pool - n, Label.CLP: test_pool - n},
            seed=config.seed,
        )
        key = f"n={n}"
        splits[key] = make_split(dataset, spec)
        labelers[key] = _fake_vs_legit
        for named in providers:
            cells.append(
                _Cell(named.name, named.provider, f"sste:n={n}", "embedding",
                      FeaturizationMode.SSTE, key)
            )
    cache = _FeatureCache(pipeline, config.jobs)
    table, cell_meta = _run_cells("fig4", cells, splits, labelers, config, cache)
    curve = []
    for named in providers:
        for n in config.sweep:
            for row in table.rows:
                if (
                    row.provider == named.name
                    and row.mode == f"sste:n={n}"
                    and row.classifier == "avg"
                ):
                    curve.append(CurvePoint(named.name, n, row.accuracy))
    manifest = _base_manifest("fig4", dataset, providers, config, splits, cell_meta)
    manifest["sweep"] = list(config.sweep)
    return ExperimentResult("fig4", table, manifest, curve=curve)


def run_fig5(
    dataset: Dataset,
    providers: Sequence[NamedProvider],
    config: ExperimentConfig | None = None,
    pipeline: TextPipeline | None = None,
) -> ExperimentResult:
    """Leave-one-section-out ablation against a no-ablation baseline row."""
    config = config or ExperimentConfig()
    pipeline = pipeline or default_pipeline()
    s = config.scale
    spec = SplitSpec(
        train={
            Label.LLP: _scaled(500, s, "train LLPs"),
            Label.FLP: _scaled(480, s, "train FLPs"),
            Label.CLP: _scaled(20, s, "train CLPs"),
        },
        test={
            Label.LLP: _scaled(240, s, "test LLPs"),
            Label.FLP: _scaled(120, s, "test FLPs"),
            Label.CLP: _scaled(120, s, "test CLPs"),
        },
        seed=config.seed,
    )
    splits = {"main": make_split(dataset, spec)}
    labelers = {"main": _fake_vs_legit}
    cells = []
    for named in providers:
        cells.append(
            _Cell(named.name, named.provider, "sste:ablate=nothing", "embedding",
                  FeaturizationMode.SSTE, "main", variant="nothing")
        )
        for section in config.ablate:
            cells.append(
                _Cell(named.name, named.provider, f"sste:ablate={section.value}",
                      "embedding", FeaturizationMode.SSTE, "main",
                      variant=section.value, ablate=section)
            )
    cache = _FeatureCache(pipeline, config.jobs)
    table, cell_meta = _run_cells("fig5", cells, splits, labelers, config, cache)
    manifest = _base_manifest("fig5", dataset, providers, config, splits, cell_meta)
    manifest["ablate"] = [section.value for section in config.ablate]
    return ExperimentResult("fig5", table, manifest)


_RUNNERS = {
    "table2": run_table2,
    "table3": run_table3,
    "table4": run_table4,
    "table5": run_table5,
    "fig4": run_fig4,
    "fig5": run_fig5,
}


def run_experiment(
    experiment: str,
    dataset: Dataset,
    providers: Sequence[NamedProvider],
    config: ExperimentConfig | None = None,
    pipeline: TextPipeline | None = None,
) -> ExperimentResult:
    if experiment not in _RUNNERS:
        raise ValueError(f"unknown experiment {experiment!r}; expected one of {EXPERIMENT_IDS}")
    return _RUNNERS[experiment](dataset, providers, config, pipeline)
