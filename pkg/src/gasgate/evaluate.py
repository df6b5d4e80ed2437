"""Cross-validation, error-type decomposition, and the penalty-ratio sweep.

Terminology used throughout: the positive class is "explosion".  A type-I
error is a missed explosion (predicted safe, actually explosive) — the
safety-critical direction; a type-II error is a false alarm.  The sweep
scales the positive-class slack penalty by a ratio gamma >= 1 to push
errors from type I toward type II.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset, FeatureConfig, featurize, fit_normalization
from .errors import SingleClassError
from .kernels import KernelSpec
from .logistic import fit_logistic
from .svm import PenaltyConfig, fit_svm

DEFAULT_FOLDS = 5
DEFAULT_REPEATS = 10
DEFAULT_GAMMA_GRID = tuple(float(5 * k) for k in range(1, 13))


@dataclass(frozen=True)
class ConfusionCounts:
    """Outcome tallies with explosion as the positive class."""

    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    def __post_init__(self):
        for name in ("tp", "fp", "tn", "fn"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or value < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {value!r}")
            object.__setattr__(self, name, int(value))

    @classmethod
    def from_outcomes(cls, actual, predicted) -> "ConfusionCounts":
        """Tally boolean explosion outcomes against boolean predictions."""
        actual = np.asarray(actual, dtype=bool)
        predicted = np.asarray(predicted, dtype=bool)
        if actual.shape != predicted.shape:
            raise ValueError("actual and predicted shapes differ")
        return cls(
            tp=int((actual & predicted).sum()),
            fp=int((~actual & predicted).sum()),
            tn=int((~actual & ~predicted).sum()),
            fn=int((actual & ~predicted).sum()),
        )

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(
            self.tp + other.tp,
            self.fp + other.fp,
            self.tn + other.tn,
            self.fn + other.fn,
        )

    @property
    def n(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @property
    def accuracy(self) -> float:
        """Fraction correct, in [0, 1]."""
        return (self.tp + self.tn) / self.n

    @property
    def type1_rate(self) -> float:
        """Missed explosions per evaluated sample."""
        return self.fn / self.n

    @property
    def type2_rate(self) -> float:
        """False alarms per evaluated sample."""
        return self.fp / self.n

    @property
    def whole_error_rate(self) -> float:
        return (self.fn + self.fp) / self.n


@dataclass(frozen=True)
class CvReport:
    """Per-fold confusion counts for one v-fold run plus summary accuracy."""

    fold_counts: tuple[ConfusionCounts, ...]
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "fold_counts", tuple(self.fold_counts))
        if not self.fold_counts:
            raise ValueError("a CV report needs at least one fold")

    @property
    def v(self) -> int:
        return len(self.fold_counts)

    @property
    def fold_accuracies(self) -> tuple[float, ...]:
        """Held-out accuracy per fold, in percent."""
        return tuple(100.0 * c.accuracy for c in self.fold_counts)

    @property
    def mean(self) -> float:
        return float(np.mean(self.fold_accuracies))

    @property
    def std(self) -> float:
        """Sample standard deviation (divisor v - 1) of fold accuracies."""
        if self.v < 2:
            return 0.0
        return float(np.std(self.fold_accuracies, ddof=1))

    @property
    def pooled(self) -> ConfusionCounts:
        total = ConfusionCounts()
        for c in self.fold_counts:
            total = total + c
        return total


@dataclass(frozen=True)
class SweepRow:
    """Pooled cross-validated counts at one penalty ratio gamma = w1/w2."""

    gamma: float
    counts: ConfusionCounts

    def __post_init__(self):
        if self.gamma < 1.0:
            raise ValueError(f"gamma must be >= 1, got {self.gamma}")

    @property
    def type1_rate(self) -> float:
        return self.counts.type1_rate

    @property
    def type2_rate(self) -> float:
        return self.counts.type2_rate

    @property
    def whole_error_rate(self) -> float:
        return self.counts.whole_error_rate


@dataclass(frozen=True)
class SweepReport:
    rows: tuple[SweepRow, ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        if not self.rows:
            raise ValueError("a sweep report needs at least one row")

    def row(self, gamma: float) -> SweepRow:
        for r in self.rows:
            if r.gamma == gamma:
                return r
        raise KeyError(f"no sweep row at gamma={gamma}")


@dataclass(frozen=True)
class SvmLearner:
    """Fold-level SVM recipe: hyperparameters minus any fitted state."""

    kernel: KernelSpec = KernelSpec()
    penalties: PenaltyConfig = PenaltyConfig()
    tol: float = 1e-3
    max_passes: int = 1000
    seed: int = 0

    kind = "svm"

    def fit(self, features, exploded, normalization=None):
        labels = np.where(np.asarray(exploded, dtype=bool), 1.0, -1.0)
        return fit_svm(
            features,
            labels,
            kernel=self.kernel,
            penalties=self.penalties,
            tol=self.tol,
            max_passes=self.max_passes,
            seed=self.seed,
            normalization=normalization,
        )

    def predict_exploded(self, model, features) -> np.ndarray:
        return np.asarray(model.predict(features)) == 1


@dataclass(frozen=True)
class LogisticLearner:
    """Fold-level logistic-regression recipe."""

    ridge: float = 1e-6
    tol: float = 1e-8
    max_iter: int = 200

    kind = "logistic"

    def fit(self, features, exploded, normalization=None):
        labels = np.asarray(exploded, dtype=bool).astype(float)
        return fit_logistic(
            features,
            labels,
            ridge=self.ridge,
            tol=self.tol,
            max_iter=self.max_iter,
            normalization=normalization,
        )

    def predict_exploded(self, model, features) -> np.ndarray:
        return np.asarray(model.predict(features)) == 1


def kfold_indices(n: int, v: int, seed: int) -> list[np.ndarray]:
    """Shuffle 0..n-1 and cut into v folds whose sizes differ by at most 1."""
    if v < 2:
        raise ValueError(f"need at least 2 folds, got {v}")
    if v > n:
        raise ValueError(f"{v} folds exceed {n} samples")
    perm = np.random.default_rng(seed).permutation(n)
    return [np.sort(fold) for fold in np.array_split(perm, v)]


def stratified_kfold_indices(exploded, v: int, seed: int) -> list[np.ndarray]:
    """Fold assignment preserving the class balance of ``exploded``.

    Each class is shuffled and dealt round-robin, continuing the deal across
    classes so overall fold sizes still differ by at most 1.  Any class with
    at least two members is guaranteed to span at least two folds, which
    keeps every training portion two-class.
    """
    exploded = np.asarray(exploded, dtype=bool)
    n = exploded.shape[0]
    if v < 2:
        raise ValueError(f"need at least 2 folds, got {v}")
    if v > n:
        raise ValueError(f"{v} folds exceed {n} samples")
    if exploded.all() or (~exploded).all():
        raise SingleClassError("dataset contains a single class")
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(v)]
    slot = 0
    for value in (True, False):
        members = np.flatnonzero(exploded == value)
        if len(members) == 1:
            raise SingleClassError(
                "a class with one sample cannot be spread over folds; "
                "its only training portion would be single-class"
            )
        for idx in rng.permutation(members):
            folds[slot % v].append(int(idx))
            slot += 1
    return [np.sort(np.array(fold, dtype=int)) for fold in folds]


def fit_fold(
    data: Dataset,
    train_idx,
    test_idx,
    learner,
    feature_config: FeatureConfig = FeatureConfig(),
):
    """Fit on the training rows only and score the held-out rows.

    Normalization is fitted inside this call from the training rows, so
    held-out values can never leak into the feature scaling.  Returns
    ``(model, counts)``.
    """
    train = data.subset(train_idx)
    test = data.subset(test_idx)
    params = fit_normalization(train, feature_config)
    model = learner.fit(featurize(params, train), train.exploded, normalization=params)
    predicted = learner.predict_exploded(model, featurize(params, test))
    return model, ConfusionCounts.from_outcomes(test.exploded, predicted)


def cross_validate(
    data: Dataset,
    learner,
    v: int = DEFAULT_FOLDS,
    seed: int = 0,
    feature_config: FeatureConfig = FeatureConfig(),
) -> CvReport:
    """Stratified v-fold cross-validation of one learner recipe."""
    folds = stratified_kfold_indices(data.exploded, v, seed)
    everything = np.arange(len(data))
    counts = []
    for fold in folds:
        train_idx = np.setdiff1d(everything, fold)
        train_classes = data.exploded[train_idx]
        if train_classes.all() or (~train_classes).all():
            raise SingleClassError("training portion of a fold is single-class")
        _, fold_counts = fit_fold(data, train_idx, fold, learner, feature_config)
        counts.append(fold_counts)
    return CvReport(tuple(counts), seed=seed)


def repeated_cv(
    data: Dataset,
    learner,
    v: int = DEFAULT_FOLDS,
    repeats: int = DEFAULT_REPEATS,
    base_seed: int = 0,
    feature_config: FeatureConfig = FeatureConfig(),
) -> tuple[CvReport, ...]:
    """One CvReport per repeat, with fold seeds base_seed, base_seed+1, ..."""
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")
    return tuple(
        cross_validate(data, learner, v, base_seed + i, feature_config)
        for i in range(repeats)
    )


def summarize_repeats(reports) -> tuple[float, float]:
    """(mean, sample std) of the per-repeat mean accuracies, in percent."""
    means = [r.mean for r in reports]
    spread = float(np.std(means, ddof=1)) if len(means) > 1 else 0.0
    return float(np.mean(means)), spread


def penalty_sweep(
    data: Dataset,
    kernel: KernelSpec = KernelSpec(),
    base_w2: float = 1.0,
    gamma_grid=DEFAULT_GAMMA_GRID,
    v: int = DEFAULT_FOLDS,
    seed: int = 0,
    tol: float = 1e-3,
    max_passes: int = 1000,
    feature_config: FeatureConfig = FeatureConfig(),
) -> SweepReport:
    """Cross-validate the SVM at each penalty ratio in ``gamma_grid``.

    At ratio gamma the positive (explosion) class slack cost is
    gamma * base_w2 and the negative cost is base_w2.  Counts are pooled
    over the folds, so each row's rates share one denominator.
    """
    grid = [float(g) for g in gamma_grid]
    if not grid:
        raise ValueError("gamma grid is empty")
    if any(g < 1.0 for g in grid):
        raise ValueError(f"all ratios must be >= 1, got {min(grid)}")
    if base_w2 <= 0:
        raise ValueError(f"base_w2 must be positive, got {base_w2}")
    rows = []
    for gamma in grid:
        learner = SvmLearner(
            kernel=kernel,
            penalties=PenaltyConfig(positive=gamma * base_w2, negative=base_w2),
            tol=tol,
            max_passes=max_passes,
            seed=seed,
        )
        report = cross_validate(data, learner, v, seed, feature_config)
        rows.append(SweepRow(gamma, report.pooled))
    return SweepReport(tuple(rows))


def choose_ratio(report: SweepReport) -> float:
    """Smallest gamma among those minimizing type-I rate, then whole error.

    Type-I (missed explosion) dominates the ordering because that error is
    the safety-critical one; the whole error rate breaks ties, and the
    smallest gamma wins any remaining tie.  Row order never matters.
    """
    best = min(report.rows, key=lambda r: (r.type1_rate, r.whole_error_rate, r.gamma))
    return best.gamma


def cv_report_csv(report: CvReport) -> str:
    """CSV rows ``fold,tp,fp,tn,fn,accuracy`` plus mean/std footer rows."""
    lines = ["fold,tp,fp,tn,fn,accuracy"]
    for i, c in enumerate(report.fold_counts, start=1):
        lines.append(f"{i},{c.tp},{c.fp},{c.tn},{c.fn},{100.0 * c.accuracy!r}")
    lines.append(f"mean,,,,,{report.mean!r}")
    lines.append(f"std,,,,,{report.std!r}")
    return "\n".join(lines) + "\n"


def cv_report_text(report: CvReport) -> str:
    """Aligned-column rendering of a CvReport for terminals."""
    header = f"{'fold':>4}  {'tp':>4} {'fp':>4} {'tn':>4} {'fn':>4}  {'accuracy':>9}"
    lines = [header]
    for i, c in enumerate(report.fold_counts, start=1):
        lines.append(
            f"{i:>4}  {c.tp:>4} {c.fp:>4} {c.tn:>4} {c.fn:>4}  "
            f"{100.0 * c.accuracy:>8.2f}%"
        )
    lines.append(f"mean accuracy: {report.mean:.2f}%")
    lines.append(f"std (sample):  {report.std:.2f}%")
    return "\n".join(lines) + "\n"


def sweep_tsv(report: SweepReport) -> str:
    """TSV ``gamma<TAB>type1<TAB>type2<TAB>whole`` for external plotting."""
    lines = ["gamma\ttype1\ttype2\twhole"]
    for r in report.rows:
        lines.append(
            f"{r.gamma!r}\t{r.type1_rate!r}\t{r.type2_rate!r}\t{r.whole_error_rate!r}"
        )
    return "\n".join(lines) + "\n"


def sweep_csv(report: SweepReport) -> str:
    """CSV with raw counts alongside the three error rates."""
    lines = ["gamma,tp,fp,tn,fn,type1,type2,whole"]
    for r in report.rows:
        c = r.counts
        lines.append(
            f"{r.gamma!r},{c.tp},{c.fp},{c.tn},{c.fn},"
            f"{r.type1_rate!r},{r.type2_rate!r},{r.whole_error_rate!r}"
        )
    return "\n".join(lines) + "\n"


def sweep_text(report: SweepReport) -> str:
    """Aligned-column rendering of a SweepReport."""
    lines = [f"{'gamma':>6}  {'type1':>7} {'type2':>7} {'whole':>7}"]
    for r in report.rows:
        lines.append(
            f"{r.gamma:>6.1f}  {r.type1_rate:>7.2%} {r.type2_rate:>7.2%} "
            f"{r.whole_error_rate:>7.2%}"
        )
    return "\n".join(lines) + "\n"
