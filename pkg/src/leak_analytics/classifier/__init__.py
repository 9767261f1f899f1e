"""URL tokenization, bag-of-words features and the decision-tree classifier."""

from .dataset import DATASET_MODES, LabeledDataset, build_dataset
from .decision_tree import ILLEGAL, LEGAL, DecisionTreeModel, TreeNode, best_feature, gini, split_scores
from .evaluation import CrossValidator, EvalReport, FoldAudit, PerformanceMetrics, cross_validate
from .model import TrainedModel
from .oversampling import oversample_indices, oversample_minority
from .tokenizer import DEFAULT_SEPARATORS, tokenize_url
from .vocabulary import TokenVocabulary, build_vocabulary, vectorize, vectorize_many

__all__ = [
    "DATASET_MODES",
    "LabeledDataset",
    "build_dataset",
    "ILLEGAL",
    "LEGAL",
    "DecisionTreeModel",
    "TreeNode",
    "gini",
    "split_scores",
    "best_feature",
    "CrossValidator",
    "EvalReport",
    "FoldAudit",
    "PerformanceMetrics",
    "cross_validate",
    "TrainedModel",
    "oversample_indices",
    "oversample_minority",
    "DEFAULT_SEPARATORS",
    "tokenize_url",
    "TokenVocabulary",
    "build_vocabulary",
    "vectorize",
    "vectorize_many",
]
