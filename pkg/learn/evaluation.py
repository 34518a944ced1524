"""
Evaluation harness for the three cross-validation strategies.

Features are computed per utterance before any split is made, so no statistic
can leak from test to train data. Folds are evaluated in split order and every
aggregate is reduced in that order, which keeps reports bit-identical for a
given (dataset, seed, params) whatever the thread count.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from emgcore.configs import PipelineConfig
from emgcore.errors import InvalidConfig
from emgcore.types import Word
from features import featurize_dataset
from utils import get_logger

from .forest import ForestParams, fit_forest, predict_batch
from .splits import SPLIT_HANDLERS

logger = get_logger(__name__)

N_CLASSES = len(Word)
CHANCE_LEVEL = 1.0 / N_CLASSES

# Published single-subject results (mean, std of overall accuracy), kept as report annotations.
REFERENCE_ACCURACY = {
    ("vocalized", "session"): (0.85, 0.07),
    ("vocalized", "global"): (0.87, 0.03),
    ("silent", "global"): (0.68, 0.03),
    ("vocalized", "loso"): (0.64, 0.18),
    ("silent", "loso"): (0.54, 0.07),
}


class Scheme(enum.Enum):
    SESSION_7FOLD = "session"
    GLOBAL_5FOLD = "global"
    LOSO = "loso"

    @classmethod
    def from_name(cls, name):
        name = str(name).strip().lower()
        for scheme in cls:
            if name in (scheme.value, scheme.name.lower()):
                return scheme
        raise InvalidConfig(f"[evaluate] unknown scheme '{name}', expected one of {[s.value for s in cls]}")


def _splits_for(d, scheme, seed):
    return SPLIT_HANDLERS[scheme.value](d, seed)


def _mean_std(values):
    values = [v for v in values if v is not None]
    if not values:
        return None, None
    array = np.asarray(values, dtype=np.float64)
    return float(array.mean()), float(array.std())


@dataclass(frozen=True)
class FoldResult:
    """Outcome of one split. per_label_accuracy[c] is None when label c is absent from the test set."""

    name: str
    group: str
    confusion: tuple[tuple[int, ...], ...]
    per_label_accuracy: tuple[float | None, ...]
    overall_accuracy: float
    n_train: int
    n_test: int

    @classmethod
    def from_predictions(cls, name, group, y_true, y_pred, n_train):
        confusion = np.zeros((N_CLASSES, N_CLASSES), dtype=np.int64)
        np.add.at(confusion, (y_true, y_pred), 1)
        support = confusion.sum(axis=1)
        per_label = tuple(
            float(confusion[c, c] / support[c]) if support[c] else None for c in range(N_CLASSES)
        )
        total = int(support.sum())
        overall = float(np.trace(confusion) / total) if total else 0.0
        return cls(
            name=name,
            group=group,
            confusion=tuple(tuple(int(v) for v in row) for row in confusion),
            per_label_accuracy=per_label,
            overall_accuracy=overall,
            n_train=int(n_train),
            n_test=total,
        )

    def confusion_matrix(self):
        return np.array(self.confusion, dtype=np.int64)


@dataclass(frozen=True)
class Aggregate:
    """Mean and population standard deviation across folds."""

    overall_mean: float
    overall_std: float
    per_label_mean: tuple[float | None, ...]
    per_label_std: tuple[float | None, ...]
    # spread of the per-label means across the 8 labels
    across_labels_mean: float | None = None
    across_labels_std: float | None = None

    @classmethod
    def over(cls, folds):
        overall_mean, overall_std = _mean_std([f.overall_accuracy for f in folds])
        label_stats = [_mean_std([f.per_label_accuracy[c] for f in folds]) for c in range(N_CLASSES)]
        per_label_mean = tuple(m for m, _ in label_stats)
        across_mean, across_std = _mean_std(per_label_mean)
        return cls(
            overall_mean=overall_mean if overall_mean is not None else 0.0,
            overall_std=overall_std if overall_std is not None else 0.0,
            per_label_mean=per_label_mean,
            per_label_std=tuple(s for _, s in label_stats),
            across_labels_mean=across_mean,
            across_labels_std=across_std,
        )


@dataclass(frozen=True)
class EvalReport:
    scheme: Scheme
    condition: str
    seed: int
    n_trees: int
    per_fold: tuple[FoldResult, ...]
    aggregate: Aggregate
    groups: dict = field(default_factory=dict)
    n_flagged: int = 0
    chance_level: float = CHANCE_LEVEL

    @property
    def reference(self):
        """Published (mean, std) for this condition and scheme, if any."""
        return REFERENCE_ACCURACY.get((self.condition, self.scheme.value))

    def to_dict(self):
        reference = self.reference
        return {
            "scheme": self.scheme.value,
            "condition": self.condition,
            "seed": self.seed,
            "n_trees": self.n_trees,
            "chance_level": self.chance_level,
            "n_flagged": self.n_flagged,
            "labels": [w.name for w in Word],
            "reference": None if reference is None else {"mean": reference[0], "std": reference[1]},
            "aggregate": _aggregate_to_dict(self.aggregate),
            "groups": {name: _aggregate_to_dict(agg) for name, agg in self.groups.items()},
            "per_fold": [
                {
                    "name": f.name,
                    "group": f.group,
                    "n_train": f.n_train,
                    "n_test": f.n_test,
                    "overall_accuracy": f.overall_accuracy,
                    "per_label_accuracy": list(f.per_label_accuracy),
                    "confusion": [list(row) for row in f.confusion],
                }
                for f in self.per_fold
            ],
        }

    @classmethod
    def from_dict(cls, data):
        try:
            folds = tuple(
                FoldResult(
                    name=f["name"],
                    group=f.get("group", ""),
                    confusion=tuple(tuple(int(v) for v in row) for row in f["confusion"]),
                    per_label_accuracy=tuple(f["per_label_accuracy"]),
                    overall_accuracy=float(f["overall_accuracy"]),
                    n_train=int(f["n_train"]),
                    n_test=int(f["n_test"]),
                )
                for f in data["per_fold"]
            )
            return cls(
                scheme=Scheme.from_name(data["scheme"]),
                condition=data["condition"],
                seed=int(data["seed"]),
                n_trees=int(data["n_trees"]),
                per_fold=folds,
                aggregate=_aggregate_from_dict(data["aggregate"]),
                groups={name: _aggregate_from_dict(agg) for name, agg in data.get("groups", {}).items()},
                n_flagged=int(data.get("n_flagged", 0)),
                chance_level=float(data.get("chance_level", CHANCE_LEVEL)),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidConfig(f"[evaluate] malformed report: {e}") from e


def _aggregate_to_dict(agg):
    return {
        "overall_mean": agg.overall_mean,
        "overall_std": agg.overall_std,
        "per_label_mean": list(agg.per_label_mean),
        "per_label_std": list(agg.per_label_std),
        "across_labels_mean": agg.across_labels_mean,
        "across_labels_std": agg.across_labels_std,
    }


def _aggregate_from_dict(data):
    return Aggregate(
        overall_mean=float(data["overall_mean"]),
        overall_std=float(data["overall_std"]),
        per_label_mean=tuple(data["per_label_mean"]),
        per_label_std=tuple(data["per_label_std"]),
        across_labels_mean=data.get("across_labels_mean"),
        across_labels_std=data.get("across_labels_std"),
    )


def evaluate_features(X, y, splits, params, threads=1):
    """
    Fits and scores one forest per split on a precomputed feature matrix.

    Returns:
        Tuple of FoldResult in split order
    """
    results = []
    for split in splits:
        model = fit_forest(X[split.train], y[split.train], params, threads=threads)
        predicted, _ = predict_batch(model, X[split.test])
        fold = FoldResult.from_predictions(split.name, split.group, y[split.test], predicted, split.train.size)
        logger.debug(f"Fold {fold.name}: accuracy {fold.overall_accuracy:.3f} on {fold.n_test} utterance(s)")
        results.append(fold)
    return tuple(results)


def evaluate(d, scheme, p=None, pipeline=None, seed=None, threads=1, features=None):
    """
    Runs one evaluation strategy end to end.

    Args:
        d: Dataset
        scheme: Scheme (or its name: session, global, loso)
        p: ForestParams (defaults if None)
        pipeline: PipelineConfig (defaults if None)
        seed: Fold shuffle seed for the global scheme; defaults to the forest seed
        threads: Worker threads for featurization and tree training
        features: Optional precomputed (X, y) for d, as returned by featurize_dataset

    Returns:
        EvalReport

    Raises:
        MissingBatch, TooFewPerLabel, WrongSessionCount: From the splitter
        EmptyTrainingSet, DimensionMismatch: From forest fitting
    """
    scheme = scheme if isinstance(scheme, Scheme) else Scheme.from_name(scheme)
    p = p or ForestParams()
    pipeline = pipeline or PipelineConfig()
    seed = p.seed if seed is None else int(seed)

    splits = _splits_for(d, scheme, seed)
    X, y = features if features is not None else featurize_dataset(d, pipeline, threads=threads)
    logger.info(f"Evaluating scheme '{scheme.value}': {len(splits)} fold(s), {len(d)} utterance(s), {p.n_trees} tree(s)")
    folds = evaluate_features(X, y, splits, p, threads=threads)

    groups = {}
    for group in dict.fromkeys(f.group for f in folds if f.group):
        groups[group] = Aggregate.over([f for f in folds if f.group == group])

    return EvalReport(
        scheme=scheme,
        condition=d.condition.value,
        seed=seed,
        n_trees=p.n_trees,
        per_fold=folds,
        aggregate=Aggregate.over(folds),
        groups=groups,
        n_flagged=sum(1 for u in d.utterances if u.flagged),
    )
