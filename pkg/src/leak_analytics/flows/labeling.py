"""Ground-truth labels from pattern manifests."""

import logging
import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple, Union

from ..errors import FlowFormatError
from .flow_record import ILLEGAL, LEGAL, UNLABELED, FlowRecord

logger = logging.getLogger(__name__)

_SCHEME = re.compile(r"^[A-Za-z][A-Za-z0-9+.-]*://")


@dataclass(frozen=True)
class LabelRule:
    """``host[/path-prefix]`` pattern; ``*`` stands for one host label."""

    pattern: str
    label: str
    app_id: Optional[str] = None
    line_number: Optional[int] = None

    @property
    def host_labels(self) -> Tuple[str, ...]:
        return tuple(_split_url(self.pattern)[0].split("."))

    @property
    def path_prefix(self) -> str:
        return _split_url(self.pattern)[1]

    def matches(self, record: FlowRecord) -> bool:
        if self.app_id is not None and self.app_id != record.app_id:
            return False
        return match_pattern(self.pattern, record.url)


def _split_url(url: str) -> Tuple[str, str]:
    url = _SCHEME.sub("", url)
    cut = min((i for i in (url.find("/"), url.find("?")) if i >= 0), default=len(url))
    host = url[:cut].split(":", 1)[0].lower()
    return host, url[cut:]


def match_pattern(pattern: str, url: str) -> bool:
    """Whether ``url`` matches a host pattern with an optional path prefix."""
    pattern_host, prefix = _split_url(pattern)
    host, path = _split_url(url)
    wanted = pattern_host.split(".")
    labels = host.split(".")
    if len(wanted) != len(labels):
        return False
    if not all(w == "*" or w == label for w, label in zip(wanted, labels)):
        return False
    return path.startswith(prefix)


def parse_label_manifest(text: str) -> List[LabelRule]:
    """Parse ``pattern<TAB>label[<TAB>appId]`` lines; ``#`` starts a comment.

    Raises:
        FlowFormatError: Wrong column count or unknown label
    """
    rules = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        columns = [column.strip() for column in line.split("\t")]
        if len(columns) not in (2, 3) or not columns[0]:
            raise FlowFormatError("expected 'pattern<TAB>label[<TAB>appId]'", number)
        if columns[1] not in (LEGAL, ILLEGAL):
            raise FlowFormatError(f"label must be legal or illegal, got {columns[1]!r}", number)
        app_id = columns[2] if len(columns) == 3 and columns[2] else None
        rules.append(LabelRule(columns[0], columns[1], app_id, number))
    return rules


def read_label_manifest(path: Union[str, Path]) -> List[LabelRule]:
    return parse_label_manifest(Path(path).read_text(encoding="utf-8"))


def label_flows(records: Iterable[FlowRecord], rules: List[LabelRule]) -> List[FlowRecord]:
    """Label each record by the first matching rule; unmatched records keep their label.

    Args:
        records: Flow records
        rules: Manifest rules in file order

    Returns:
        List[FlowRecord]: Records with labels applied, in input order
    """
    labeled = []
    for record in records:
        hits = [rule for rule in rules if rule.matches(record)]
        if len(hits) > 1:
            logger.warning(
                f"{len(hits)} label patterns match {record.url!r} "
                f"({', '.join(rule.pattern for rule in hits)}); using '{hits[0].pattern}'"
            )
        labeled.append(record.with_label(hits[0].label) if hits else record)

    counts = summarize_labels(labeled)
    logger.info(
        f"Labeled flows: {counts[ILLEGAL]} illegal, {counts[LEGAL]} legal, "
        f"{counts[UNLABELED]} unlabeled"
    )
    return labeled


def summarize_labels(records: Iterable[FlowRecord]) -> Dict[str, int]:
    counts = Counter(record.label for record in records)
    return {label: counts.get(label, 0) for label in (ILLEGAL, LEGAL, UNLABELED)}
