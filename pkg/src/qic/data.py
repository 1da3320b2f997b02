"""Bundled datasets, train/test splitting, and the Monte-Carlo benchmark
harness that drives the classifier over many random separations."""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .classifier import TrainingSet, interfere_and_read, prepare_state
from .dataset import LabeledDataset
from .encoding import Pipeline, PipelineOptions
from .errors import ImpossibleBranchError

IRIS_SHA256 = "c8a2fdaf394fc79fd145487203d7d69163f0e6d0053ea46afe97fa3542d12822"
IRIS_FEATURES = ("sepal_length", "sepal_width", "petal_length", "petal_width")

_iris_cache: tuple[np.ndarray, np.ndarray] | None = None


def _load_iris_csv() -> tuple[np.ndarray, np.ndarray]:
    global _iris_cache
    if _iris_cache is None:
        text = resources.files("qic").joinpath("iris.csv").read_text()
        digest = hashlib.sha256(text.encode()).hexdigest()
        if digest != IRIS_SHA256:
            raise RuntimeError(
                f"iris.csv checksum mismatch: expected {IRIS_SHA256}, got {digest}"
            )
        body = text.strip().splitlines()[1:]
        values = np.array([[float(v) for v in line.split(",")] for line in body])
        _iris_cache = (values[:, :4], values[:, 4].astype(int))
    return _iris_cache


def iris(
    classes: tuple[int, int] = (1, 2),
    features: tuple[int, ...] = (0, 1, 2, 3),
) -> LabeledDataset:
    """Two iris species as a labeled dataset; first listed class maps to -1.

    Rows keep the canonical per-class ordering, so for classes (1, 2) the
    row index equals the index into the full 150-sample table.
    """
    first, second = classes
    if first == second:
        raise ValueError("classes must be two distinct species")
    if not {first, second} <= {1, 2, 3}:
        raise ValueError(f"classes must come from {{1, 2, 3}}, got {classes}")
    if not set(features) <= {0, 1, 2, 3}:
        raise ValueError(f"features must come from {{0, 1, 2, 3}}, got {features}")
    data, targets = _load_iris_csv()
    feats = list(features)
    rows = np.vstack([data[targets == first][:, feats], data[targets == second][:, feats]])
    labels = np.concatenate(
        [np.full(np.sum(targets == first), -1), np.full(np.sum(targets == second), +1)]
    )
    return LabeledDataset(
        rows=rows,
        labels=labels,
        name=f"iris {first}&{second}",
        class_map={first: -1, second: +1},
    )


def circles(
    n_per_class: int = 50,
    radius_ratio: float = 0.5,
    noise_std: float = 0.05,
    seed: int = 0,
) -> LabeledDataset:
    """Two concentric circles: outer radius 1 (class -1), inner radius
    radius_ratio (class +1), uniform in angle with Gaussian jitter."""
    if n_per_class < 2:
        raise ValueError(f"n_per_class must be >= 2, got {n_per_class}")
    if not 0 < radius_ratio < 1:
        raise ValueError(f"radius_ratio must be in (0, 1), got {radius_ratio}")
    if noise_std < 0:
        raise ValueError(f"noise_std must be >= 0, got {noise_std}")
    rng = np.random.default_rng(seed)
    angles = rng.uniform(0.0, 2.0 * math.pi, 2 * n_per_class)
    radii = np.concatenate(
        [np.ones(n_per_class), np.full(n_per_class, radius_ratio)]
    )
    pts = np.column_stack([radii * np.cos(angles), radii * np.sin(angles)])
    if noise_std > 0:
        pts = pts + rng.normal(0.0, noise_std, pts.shape)
    labels = np.concatenate([np.full(n_per_class, -1), np.full(n_per_class, +1)])
    return LabeledDataset(rows=pts, labels=labels, name="circles",
                          class_map={"outer": -1, "inner": +1})


def split(
    dataset: LabeledDataset, train_fraction: float, seed: int
) -> tuple[LabeledDataset, LabeledDataset]:
    """Seeded shuffle split; train gets floor(fraction*n) rows, test the rest."""
    if not 0 < train_fraction < 1:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    n = dataset.n_samples
    n_train = int(train_fraction * n)
    if n_train == 0 or n_train == n:
        raise ValueError(
            f"fraction {train_fraction} leaves an empty split for {n} rows"
        )
    perm = np.random.default_rng(seed).permutation(n)
    return dataset.subset(perm[:n_train]), dataset.subset(perm[n_train:])


@dataclass
class BenchmarkOptions:
    feature_map_copies: int = 1
    train_fraction: float = 0.8
    master_seed: int = 1234


@dataclass
class BenchmarkReport:
    dataset: str
    repetitions: int
    mean_error: float
    error_variance: float
    mean_p_acc: float
    options: BenchmarkOptions
    impossible_branch_count: int = 0


def _rep_seed(master_seed: int, repetition: int) -> np.random.SeedSequence:
    return np.random.SeedSequence((master_seed, repetition))


def run_benchmark(
    dataset: LabeledDataset,
    repetitions: int,
    options: BenchmarkOptions | None = None,
) -> BenchmarkReport:
    """Repeatedly split, preprocess (fitted on the training part only), and
    classify every test point with the exact interference readout.

    Test points whose acceptance probability vanishes are counted as
    misclassified and tallied separately.
    """
    if repetitions < 1:
        raise ValueError(f"repetitions must be >= 1, got {repetitions}")
    opts = options or BenchmarkOptions()
    pipe_opts = PipelineOptions(feature_map_copies=opts.feature_map_copies)

    errors: list[float] = []
    p_accs: list[float] = []
    impossible = 0
    for rep in range(repetitions):
        seed = _rep_seed(opts.master_seed, rep)
        train_raw, test_raw = split(dataset, opts.train_fraction, seed)
        pipe = Pipeline(pipe_opts)
        train = pipe.fit_transform(train_raw)
        test = pipe.transform(test_raw)
        training = TrainingSet(vectors=train.rows, labels=train.labels)

        wrong = 0
        rep_p_acc: list[float] = []
        for xt, yt in zip(test.rows, test.labels):
            try:
                outcome = interfere_and_read(prepare_state(training, xt))
            except ImpossibleBranchError:
                impossible += 1
                wrong += 1
                continue
            rep_p_acc.append(outcome.p_acc)
            wrong += outcome.predicted != yt
        errors.append(wrong / test.n_samples)
        if rep_p_acc:
            p_accs.append(math.fsum(rep_p_acc) / len(rep_p_acc))

    mean_error = math.fsum(errors) / len(errors)
    variance = math.fsum((e - mean_error) ** 2 for e in errors) / len(errors)
    mean_p_acc = math.fsum(p_accs) / len(p_accs) if p_accs else 0.0
    return BenchmarkReport(
        dataset=dataset.name,
        repetitions=repetitions,
        mean_error=mean_error,
        error_variance=variance,
        mean_p_acc=mean_p_acc,
        options=opts,
        impossible_branch_count=impossible,
    )


@dataclass(frozen=True)
class BenchmarkRowSpec:
    """One canonical benchmark row with its reference value and pass rule."""

    key: str
    copies: int
    expected_error: float
    tolerance: float
    check_p_acc: bool

    def passes(self, report: BenchmarkReport) -> bool:
        ok = abs(report.mean_error - self.expected_error) <= self.tolerance
        if self.check_p_acc:
            ok = ok and abs(report.mean_p_acc - 0.50) <= 0.05
        return ok


# reference errors with their acceptance windows; the plain circles row has no
# sharp reference value (the overlap after normalization collapses both rings
# onto the unit circle), so its window is wide and only ">= 0.40" is meaningful
TABLE2_ROWS: tuple[BenchmarkRowSpec, ...] = (
    BenchmarkRowSpec("iris-1-2", 1, 0.00, 0.01, True),
    BenchmarkRowSpec("iris-1-3", 1, 0.00, 0.01, True),
    BenchmarkRowSpec("iris-2-3", 1, 0.07, 0.04, True),
    BenchmarkRowSpec("iris-2-3-featmap", 2, 0.00, 0.01, True),
    BenchmarkRowSpec("circles", 1, 0.62, 0.22, False),
    BenchmarkRowSpec("circles-featmap", 2, 0.00, 0.02, False),
)


def benchmark_dataset(key: str) -> LabeledDataset:
    """Materialize the fixed dataset behind a canonical benchmark row key.

    The circles instance is generated with the generator defaults (seed 0) so
    that, like iris, the benchmark rows always refer to one fixed dataset;
    the master seed randomizes only the train/test separations.
    """
    if key.startswith("iris"):
        parts = key.split("-")
        return iris(classes=(int(parts[1]), int(parts[2])))
    if key.startswith("circles"):
        return circles()
    raise ValueError(f"unknown benchmark row {key!r}")


def run_table2(
    repetitions: int = 1000, master_seed: int = 1234
) -> list[tuple[BenchmarkRowSpec, BenchmarkReport]]:
    """Run all canonical benchmark rows and pair each with its reference spec."""
    results = []
    for spec in TABLE2_ROWS:
        ds = benchmark_dataset(spec.key)
        opts = BenchmarkOptions(
            feature_map_copies=spec.copies, master_seed=master_seed
        )
        results.append((spec, run_benchmark(ds, repetitions, opts)))
    return results
