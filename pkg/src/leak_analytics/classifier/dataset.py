"""Host-based and network-based training sets built from labeled flows."""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from ..errors import ClassifierError
from ..flows.flow_record import ILLEGAL as ILLEGAL_LABEL
from ..flows.flow_record import LEGAL as LEGAL_LABEL
from ..flows.flow_record import FlowRecord
from .decision_tree import ILLEGAL, LEGAL

logger = logging.getLogger(__name__)

DATASET_MODES = ("host", "network")


@dataclass(frozen=True)
class LabeledDataset:
    """Templates with class labels, aligned by position."""

    templates: Tuple[str, ...]
    labels: Tuple[int, ...]
    app_ids: Tuple[str, ...] = ()
    sensitive: Tuple[bool, ...] = ()
    hostname_decrypted: Tuple[bool, ...] = ()
    mode: str = "host"

    def __post_init__(self):
        n = len(self.templates)
        object.__setattr__(self, "templates", tuple(self.templates))
        object.__setattr__(self, "labels", tuple(int(label) for label in self.labels))
        object.__setattr__(self, "app_ids", tuple(self.app_ids) or ("",) * n)
        object.__setattr__(self, "sensitive", tuple(self.sensitive) or (True,) * n)
        object.__setattr__(self, "hostname_decrypted", tuple(self.hostname_decrypted) or (False,) * n)
        for name in ("labels", "app_ids", "sensitive", "hostname_decrypted"):
            if len(getattr(self, name)) != n:
                raise ClassifierError(f"{name} has {len(getattr(self, name))} entries, expected {n}")
        if any(label not in (LEGAL, ILLEGAL) for label in self.labels):
            raise ClassifierError("labels must be 0 (legal) or 1 (illegal)")
        if self.mode not in DATASET_MODES:
            raise ClassifierError(f"Unknown dataset mode: {self.mode}")

    def __len__(self) -> int:
        return len(self.templates)

    @property
    def y(self) -> np.ndarray:
        return np.asarray(self.labels, dtype=np.int64)

    def counts(self) -> Dict[str, int]:
        illegal = sum(self.labels)
        return {"illegal": illegal, "legal": len(self) - illegal}

    def subset(self, indices: Iterable[int]) -> "LabeledDataset":
        picked = list(indices)
        return LabeledDataset(
            tuple(self.templates[i] for i in picked),
            tuple(self.labels[i] for i in picked),
            tuple(self.app_ids[i] for i in picked),
            tuple(self.sensitive[i] for i in picked),
            tuple(self.hostname_decrypted[i] for i in picked),
            self.mode,
        )

    @classmethod
    def from_pairs(cls, pairs: Sequence[Tuple[str, str]], mode: str = "host") -> "LabeledDataset":
        """Build from (template, "legal"|"illegal") pairs."""
        return cls(
            tuple(template for template, _ in pairs),
            tuple(ILLEGAL if label == ILLEGAL_LABEL else LEGAL for _, label in pairs),
            mode=mode,
        )


def build_dataset(
    records: Iterable[FlowRecord],
    mode: str = "host",
    seed: Optional[int] = None,
    legal_ratio: Optional[float] = None,
) -> LabeledDataset:
    """Select and label the instances for one detection mode.

    Host mode keeps labeled sensitive flows. Network mode adds every
    non-sensitive flow to the legal class, optionally capped at
    ``legal_ratio`` times the number of sensitive flows.

    Args:
        records: Flow records, sensitive ones labeled
        mode: "host" or "network"
        seed: Required when ``legal_ratio`` subsamples
        legal_ratio: Cap on non-sensitive flows relative to sensitive ones

    Returns:
        LabeledDataset: Sensitive flows first, then non-sensitive ones, in input order

    Raises:
        ClassifierError: Unknown mode
        ValueError: Subsampling without a seed
    """
    if mode not in DATASET_MODES:
        raise ClassifierError(f"Unknown dataset mode: {mode}")

    sensitive = []
    innocent = []
    unlabeled = 0
    for record in records:
        if record.sensitive:
            if record.label in (LEGAL_LABEL, ILLEGAL_LABEL):
                sensitive.append(record)
            else:
                unlabeled += 1
        else:
            innocent.append(record)
    if unlabeled:
        logger.warning(f"Dropped {unlabeled} unlabeled sensitive flows")

    if mode == "host":
        innocent = []
    elif legal_ratio is not None:
        cap = int(legal_ratio * len(sensitive))
        if len(innocent) > cap:
            if seed is None:
                raise ValueError("A seed is required to subsample non-sensitive flows")
            rng = np.random.default_rng(seed)
            keep = sorted(rng.choice(len(innocent), size=cap, replace=False).tolist())
            innocent = [innocent[i] for i in keep]

    chosen = sensitive + innocent
    labels = [ILLEGAL if r.sensitive and r.label == ILLEGAL_LABEL else LEGAL for r in chosen]
    dataset = LabeledDataset(
        tuple(r.url_template for r in chosen),
        tuple(labels),
        tuple(r.app_id for r in chosen),
        tuple(r.sensitive for r in chosen),
        tuple(r.hostname_decrypted for r in chosen),
        mode,
    )
    logger.info(f"Built {mode} dataset: {dataset.counts()}")
    return dataset
