"""Trained classifier: vocabulary plus decision tree, stored as versioned JSON."""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from ..config.config_manager import AnalysisConfig
from ..errors import ClassifierError
from ..flows.flow_record import FlowRecord
from .dataset import LabeledDataset
from .decision_tree import CLASS_NAMES, DecisionTreeModel
from .oversampling import oversample_indices
from .vocabulary import TokenVocabulary, build_vocabulary, vectorize_many

logger = logging.getLogger(__name__)

MODEL_FORMAT = "leaksem-model"
MODEL_VERSION = 1


@dataclass
class TrainedModel:
    vocabulary: TokenVocabulary
    tree: DecisionTreeModel
    params: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def train(
        cls, dataset: LabeledDataset, config: Optional[AnalysisConfig] = None, seed: Optional[int] = None
    ) -> "TrainedModel":
        """Fit vocabulary and tree on the whole dataset, oversampling the minority class.

        Raises:
            ClassifierError: Empty or single-class dataset
            ValueError: No seed
        """
        config = config or AnalysisConfig()
        seed = seed if seed is not None else config.require_seed()
        if not len(dataset):
            raise ClassifierError("cannot train on an empty dataset")

        vocab = build_vocabulary(dataset.templates, config.min_df, config.separators, config.lowercase)
        X = vectorize_many(dataset.templates, vocab)
        order = oversample_indices(dataset.y, seed)
        tree = DecisionTreeModel(config.max_depth, config.min_leaf).fit(X[order], dataset.y[order])
        params = {
            "mode": dataset.mode,
            "seed": seed,
            "instances": len(dataset),
            "maxDepth": config.max_depth,
            "minLeaf": config.min_leaf,
        }
        logger.info(f"Trained {dataset.mode} model on {len(dataset)} flows, {len(vocab)} tokens")
        return cls(vocab, tree, params)

    def predict(self, templates: Iterable[str]) -> List[str]:
        """Predicted label ("legal" or "illegal") per URL template."""
        templates = list(templates)
        if not templates:
            return []
        X = vectorize_many(templates, self.vocabulary)
        return [CLASS_NAMES[int(label)] for label in self.tree.predict(X)]

    def classify_records(self, records: Sequence[FlowRecord]) -> List[Tuple[FlowRecord, str]]:
        return list(zip(records, self.predict(r.url_template for r in records)))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "format": MODEL_FORMAT,
            "version": MODEL_VERSION,
            "params": self.params,
            "vocabulary": self.vocabulary.to_dict(),
            "tree": self.tree.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TrainedModel":
        if data.get("format") != MODEL_FORMAT:
            raise ClassifierError("not a leaksem model file")
        if data.get("version") != MODEL_VERSION:
            raise ClassifierError(f"unsupported model version {data.get('version')}")
        try:
            return cls(
                TokenVocabulary.from_dict(data["vocabulary"]),
                DecisionTreeModel.from_dict(data["tree"]),
                dict(data.get("params", {})),
            )
        except (KeyError, TypeError) as e:
            raise ClassifierError(f"malformed model file: {e}") from e

    def save(self, path: Union[str, Path]):
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, indent=4, sort_keys=True)
            f.write("\n")

    @classmethod
    def load(cls, path: Union[str, Path]) -> "TrainedModel":
        try:
            with open(path, encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ClassifierError(f"{path}: {e}") from e
        return cls.from_dict(data)
