"""Token vocabulary with document-frequency pruning, and binary vectorization."""

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, Sequence, Tuple

import numpy as np

from ..errors import ClassifierError
from .tokenizer import DEFAULT_SEPARATORS, tokenize_url


@dataclass(frozen=True)
class TokenVocabulary:
    """Ordered feature tokens: descending document frequency, then lexicographic."""

    tokens: Tuple[str, ...]
    min_df: int = 2
    separators: str = DEFAULT_SEPARATORS
    lowercase: bool = False
    _index: Dict[str, int] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "_index", {tok: i for i, tok in enumerate(self.tokens)})
        if len(self._index) != len(self.tokens):
            raise ClassifierError("vocabulary tokens must be distinct")

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def index_of(self, token: str) -> int:
        return self._index[token]

    def tokenize(self, url_template: str):
        return tokenize_url(url_template, self.separators, self.lowercase)

    def to_dict(self) -> Dict:
        return {
            "tokens": list(self.tokens),
            "minDf": self.min_df,
            "separators": self.separators,
            "lowercase": self.lowercase,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "TokenVocabulary":
        return cls(tuple(data["tokens"]), data["minDf"], data["separators"], data["lowercase"])


def build_vocabulary(
    templates: Sequence[str],
    min_df: int = 2,
    separators: str = DEFAULT_SEPARATORS,
    lowercase: bool = False,
) -> TokenVocabulary:
    """Keep tokens that occur in at least ``min_df`` training templates.

    Raises:
        ClassifierError: No training templates
    """
    if not templates:
        raise ClassifierError("cannot build a vocabulary from zero flows")
    df = Counter()
    for template in templates:
        df.update(set(tokenize_url(template, separators, lowercase)))
    kept = sorted((tok for tok, count in df.items() if count >= min_df), key=lambda tok: (-df[tok], tok))
    return TokenVocabulary(tuple(kept), min_df, separators, lowercase)


def vectorize(url_template: str, vocab: TokenVocabulary) -> np.ndarray:
    """Binary presence vector; out-of-vocabulary tokens are ignored."""
    bits = np.zeros(len(vocab), dtype=np.uint8)
    for token in vocab.tokenize(url_template):
        if token in vocab:
            bits[vocab.index_of(token)] = 1
    return bits


def vectorize_many(templates: Iterable[str], vocab: TokenVocabulary) -> np.ndarray:
    rows = [vectorize(template, vocab) for template in templates]
    if not rows:
        return np.zeros((0, len(vocab)), dtype=np.uint8)
    return np.vstack(rows)
