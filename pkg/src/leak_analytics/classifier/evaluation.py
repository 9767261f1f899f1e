"""Classification metrics and leakage-audited k-fold cross-validation."""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np
import pandas as pd
from sklearn.model_selection import KFold, StratifiedKFold

from ..config.config_manager import AnalysisConfig
from ..errors import ClassifierError
from .dataset import LabeledDataset
from .decision_tree import CLASS_NAMES, ILLEGAL, LEGAL, DecisionTreeModel
from .oversampling import oversample_indices
from .vocabulary import build_vocabulary, vectorize_many

logger = logging.getLogger(__name__)


class PerformanceMetrics:
    """Calculates per-class classification metrics from confusion counts.

    Every ratio with a zero denominator is reported as 0.0.
    """

    @staticmethod
    def _ratio(numerator: int, denominator: int) -> float:
        return numerator / denominator if denominator else 0.0

    @staticmethod
    def calculate_confusion(y_true: np.ndarray, y_pred: np.ndarray, positive: int = ILLEGAL) -> Tuple[int, int, int, int]:
        """Count outcomes with ``positive`` as the positive class.

        Args:
            y_true: True classes
            y_pred: Predicted classes
            positive: Class treated as positive

        Returns:
            Tuple[int, int, int, int]: (TP, FN, FP, TN)
        """
        y_true = np.asarray(y_true)
        y_pred = np.asarray(y_pred)
        if y_true.shape != y_pred.shape:
            raise ValueError("y_true and y_pred must have the same shape")
        tp = int(np.sum((y_true == positive) & (y_pred == positive)))
        fn = int(np.sum((y_true == positive) & (y_pred != positive)))
        fp = int(np.sum((y_true != positive) & (y_pred == positive)))
        tn = int(np.sum((y_true != positive) & (y_pred != positive)))
        return tp, fn, fp, tn

    @staticmethod
    def calculate_tp_rate(tp: int, fn: int) -> float:
        """TP / (TP + FN)."""
        return PerformanceMetrics._ratio(tp, tp + fn)

    @staticmethod
    def calculate_fp_rate(fp: int, tn: int) -> float:
        """FP / (FP + TN)."""
        return PerformanceMetrics._ratio(fp, fp + tn)

    @staticmethod
    def calculate_precision(tp: int, fp: int) -> float:
        """TP / (TP + FP)."""
        return PerformanceMetrics._ratio(tp, tp + fp)

    @staticmethod
    def calculate_f_measure(tp: int, fp: int, fn: int) -> float:
        """2TP / (2TP + FP + FN)."""
        return PerformanceMetrics._ratio(2 * tp, 2 * tp + fp + fn)

    @staticmethod
    def calculate_all_metrics(tp: int, fn: int, fp: int, tn: int) -> Dict[str, float]:
        """Calculate all metrics for one positive class.

        Args:
            tp: True positives
            fn: False negatives
            fp: False positives
            tn: True negatives

        Returns:
            Dict[str, float]: TP rate, FP rate, precision and F-measure
        """
        return {
            "tp_rate": PerformanceMetrics.calculate_tp_rate(tp, fn),
            "fp_rate": PerformanceMetrics.calculate_fp_rate(fp, tn),
            "precision": PerformanceMetrics.calculate_precision(tp, fp),
            "f_measure": PerformanceMetrics.calculate_f_measure(tp, fp, fn),
        }


@dataclass(frozen=True)
class FoldAudit:
    """Which rows fed the vocabulary and the oversampler of one fold."""

    fold: int
    train_indices: Tuple[int, ...]
    test_indices: Tuple[int, ...]
    vocabulary_indices: Tuple[int, ...]
    oversampled_indices: Tuple[int, ...]

    @property
    def leakage_free(self) -> bool:
        train = set(self.train_indices)
        test = set(self.test_indices)
        used = set(self.vocabulary_indices) | set(self.oversampled_indices)
        return used <= train and not used & test and not train & test


@dataclass
class EvalReport:
    """Aggregated confusion counts with illegal as the positive class."""

    tp: int = 0
    fn: int = 0
    fp: int = 0
    tn: int = 0
    folds: int = 0
    mode: str = "host"
    fold_audits: List[FoldAudit] = field(default_factory=list)

    def add(self, y_true: np.ndarray, y_pred: np.ndarray):
        tp, fn, fp, tn = PerformanceMetrics.calculate_confusion(y_true, y_pred, ILLEGAL)
        self.tp += tp
        self.fn += fn
        self.fp += fp
        self.tn += tn

    @property
    def total(self) -> int:
        return self.tp + self.fn + self.fp + self.tn

    @property
    def accuracy(self) -> float:
        return PerformanceMetrics._ratio(self.tp + self.tn, self.total)

    def confusion_for(self, label: int) -> Tuple[int, int, int, int]:
        """(TP, FN, FP, TN) with ``label`` as the positive class."""
        if label == ILLEGAL:
            return self.tp, self.fn, self.fp, self.tn
        return self.tn, self.fp, self.fn, self.tp

    def class_metrics(self, label: int) -> Dict[str, float]:
        return PerformanceMetrics.calculate_all_metrics(*self.confusion_for(label))

    @property
    def leakage_free(self) -> bool:
        return all(audit.leakage_free for audit in self.fold_audits)

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for label in (ILLEGAL, LEGAL):
            tp, fn, fp, tn = self.confusion_for(label)
            rows.append(
                {"class": CLASS_NAMES[label], "tp": tp, "fn": fn, "fp": fp, "tn": tn, **self.class_metrics(label)}
            )
        return pd.DataFrame(rows).set_index("class")

    def to_dict(self) -> Dict:
        return {
            "mode": self.mode,
            "folds": self.folds,
            "confusion": {"tp": self.tp, "fn": self.fn, "fp": self.fp, "tn": self.tn},
            "accuracy": self.accuracy,
            "classes": {CLASS_NAMES[label]: self.class_metrics(label) for label in (ILLEGAL, LEGAL)},
            "leakageFree": self.leakage_free,
        }


class CrossValidator:
    """Stratified k-fold splitter that degrades to shuffled k-fold."""

    def __init__(self, n_splits: int = 10, seed: Optional[int] = None):
        if seed is None:
            raise ValueError("A seed is required for cross-validation shuffling")
        self.n_splits = n_splits
        self.seed = seed

    def split(self, y: np.ndarray) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
        """Generate (train, test) index arrays.

        Falls back to plain shuffled folds, with a warning, when some class
        has fewer members than folds.
        """
        y = np.asarray(y)
        if len(y) < self.n_splits:
            raise ClassifierError(f"{len(y)} instances cannot fill {self.n_splits} folds")
        _, counts = np.unique(y, return_counts=True)
        if counts.min() < self.n_splits:
            logger.warning(
                f"Smallest class has {counts.min()} members, fewer than {self.n_splits} folds; "
                "falling back to unstratified shuffling"
            )
            splitter = KFold(n_splits=self.n_splits, shuffle=True, random_state=self.seed)
        else:
            splitter = StratifiedKFold(n_splits=self.n_splits, shuffle=True, random_state=self.seed)
        yield from splitter.split(np.zeros((len(y), 1)), y)


def cross_validate(
    dataset: LabeledDataset,
    k: int = 10,
    seed: Optional[int] = None,
    config: Optional[AnalysisConfig] = None,
) -> EvalReport:
    """Estimate classifier quality with k-fold cross-validation.

    Each fold builds its vocabulary and oversamples from its own training
    rows only; predictions on the held-out rows are pooled into one
    confusion matrix.

    Args:
        dataset: Labeled templates
        k: Number of folds
        seed: Shuffling and oversampling seed (falls back to ``config.seed``)
        config: Vocabulary and tree parameters

    Returns:
        EvalReport: Pooled confusion counts with one audit entry per fold

    Raises:
        ClassifierError: Fewer instances than folds, or a training fold with one class
        ValueError: No seed
    """
    config = config or AnalysisConfig()
    seed = seed if seed is not None else config.require_seed()
    y = dataset.y
    report = EvalReport(folds=k, mode=dataset.mode)

    for fold, (train, test) in enumerate(CrossValidator(k, seed).split(y)):
        train_templates = [dataset.templates[i] for i in train]
        vocab = build_vocabulary(train_templates, config.min_df, config.separators, config.lowercase)
        X_train = vectorize_many(train_templates, vocab)
        order = oversample_indices(y[train], seed + fold)

        tree = DecisionTreeModel(config.max_depth, config.min_leaf).fit(X_train[order], y[train][order])
        X_test = vectorize_many((dataset.templates[i] for i in test), vocab)
        report.add(y[test], tree.predict(X_test))
        report.fold_audits.append(
            FoldAudit(
                fold,
                tuple(int(i) for i in train),
                tuple(int(i) for i in test),
                tuple(int(i) for i in train),
                tuple(int(i) for i in np.unique(train[order])),
            )
        )
        logger.debug(f"Fold {fold}: {len(train)} train, {len(test)} test, {len(vocab)} tokens")

    logger.info(f"{k}-fold CV on {len(dataset)} {dataset.mode} flows: accuracy {report.accuracy:.3f}")
    return report
