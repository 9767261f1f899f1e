"""Encrypted-hostname experiment: how a model trained without decrypted hosts degrades."""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Optional

import numpy as np

from ..classifier.dataset import LabeledDataset, build_dataset
from ..classifier.evaluation import EvalReport
from ..classifier.model import TrainedModel
from ..config.config_manager import AnalysisConfig
from ..errors import ClassifierError
from ..flows.flow_record import FlowRecord

logger = logging.getLogger(__name__)

DEFAULT_REPEATS = 10


@dataclass
class DegradationReport:
    """Accuracy on held-out decrypted-host flows of two models.

    Confusion counts are pooled over every repeated split.
    """

    unencrypted_only: EvalReport
    mixed: EvalReport
    train_unencrypted: int
    train_decrypted: int
    test_size: int
    repeats: int = 1

    @property
    def accuracy_unencrypted_only(self) -> float:
        return self.unencrypted_only.accuracy

    @property
    def accuracy_mixed(self) -> float:
        return self.mixed.accuracy

    @property
    def gap_points(self) -> float:
        """Accuracy lost by the unencrypted-only model, in percentage points."""
        return 100.0 * (self.accuracy_mixed - self.accuracy_unencrypted_only)

    def to_dict(self) -> Dict:
        return {
            "accuracyUnencryptedOnly": self.accuracy_unencrypted_only,
            "accuracyMixed": self.accuracy_mixed,
            "gapPoints": self.gap_points,
            "trainUnencrypted": self.train_unencrypted,
            "trainDecrypted": self.train_decrypted,
            "testSize": self.test_size,
            "repeats": self.repeats,
        }


def _score(model: TrainedModel, test: LabeledDataset, report: EvalReport):
    predicted = np.array([1 if label == "illegal" else 0 for label in model.predict(test.templates)])
    report.add(test.y, predicted)


def run_finding1_experiment(
    flows: Iterable[FlowRecord],
    seed: int,
    test_fraction: float = 0.5,
    config: Optional[AnalysisConfig] = None,
    repeats: int = DEFAULT_REPEATS,
) -> DegradationReport:
    """Compare an unencrypted-only model with a mixed model on decrypted-host flows.

    The decrypted-host flows are split (seeded) into a test part and a part
    the mixed model may train on. Model A trains on plain-host flows only,
    model B on plain-host flows plus the decrypted training part; both are
    scored on the same test part. The split is drawn ``repeats`` times from
    one seeded generator and the predictions of all splits are pooled.

    Args:
        flows: Labeled sensitive flows of both populations
        seed: Split and oversampling seed
        test_fraction: Share of decrypted-host flows held out for testing
        config: Vocabulary and tree parameters
        repeats: Number of seeded splits to pool

    Returns:
        DegradationReport: Both evaluations and the accuracy gap

    Raises:
        ClassifierError: A population is missing or too small to split
    """
    if not 0.0 < test_fraction < 1.0:
        raise ValueError("test_fraction must be between 0 and 1")
    if repeats < 1:
        raise ValueError("repeats must be at least 1")
    config = config or AnalysisConfig()
    dataset = build_dataset(flows, "host")
    decrypted = [i for i, flag in enumerate(dataset.hostname_decrypted) if flag]
    plain = [i for i, flag in enumerate(dataset.hostname_decrypted) if not flag]
    if not plain or len(decrypted) < 2:
        raise ClassifierError("experiment needs plain-host flows and at least two decrypted-host flows")

    rng = np.random.default_rng(seed)
    n_test = min(max(1, int(round(len(decrypted) * test_fraction))), len(decrypted) - 1)
    # Model A never sees decrypted rows, so one model serves every split
    model_a = TrainedModel.train(dataset.subset(plain), config, seed)
    unencrypted_only = EvalReport(folds=repeats, mode="host")
    mixed = EvalReport(folds=repeats, mode="host")

    for _ in range(repeats):
        shuffled = [decrypted[i] for i in rng.permutation(len(decrypted))]
        test = dataset.subset(sorted(shuffled[:n_test]))
        extra_rows = sorted(shuffled[n_test:])
        model_b = TrainedModel.train(dataset.subset(plain + extra_rows), config, seed)
        _score(model_a, test, unencrypted_only)
        _score(model_b, test, mixed)

    result = DegradationReport(
        unencrypted_only, mixed, len(plain), len(decrypted) - n_test, n_test, repeats
    )
    logger.info(
        f"Decrypted-host accuracy over {repeats} splits: unencrypted-only "
        f"{result.accuracy_unencrypted_only:.3f}, mixed {result.accuracy_mixed:.3f} "
        f"(gap {result.gap_points:.1f} points)"
    )
    return result
