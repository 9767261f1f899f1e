"""Benchmark corpus: AML cases with their expected flows."""

import logging
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import List, Optional, Tuple, Union

import yaml

from ..appmodel.catalog import ApiCatalog, default_catalog
from ..appmodel.nodes import Program
from ..appmodel.parser import parse_program
from ..errors import CorpusError

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.yaml"

CATEGORIES = (
    "eventOrdering",
    "logicBomb",
    "timeBomb",
    "loopBomb",
    "infeasibleTrap",
    "encryptedHost",
    "plainLeak",
    "noLeak",
)
FLOWLESS_CATEGORIES = ("noLeak", "infeasibleTrap")


@dataclass(frozen=True)
class ExpectedFlow:
    url_template: str
    carried_taint: Tuple[str, ...] = ()
    sensitive: bool = True

    def __post_init__(self):
        object.__setattr__(self, "carried_taint", tuple(sorted(set(self.carried_taint))))
        if self.sensitive != bool(self.carried_taint):
            raise CorpusError(f"Expected flow {self.url_template!r}: sensitivity contradicts taint")

    def key(self) -> Tuple[str, Tuple[str, ...], bool]:
        return (self.url_template, self.carried_taint, self.sensitive)


@dataclass(frozen=True)
class BenchCase:
    """One corpus program and the flows a correct analysis reports for it."""

    id: str
    aml_path: Path
    category: str
    expected_flows: Tuple[ExpectedFlow, ...] = ()
    expected_miss: bool = False
    mirrors: str = ""

    def __post_init__(self):
        if self.category not in CATEGORIES:
            raise CorpusError(f"Case {self.id}: unknown category {self.category!r}")
        flowless = self.category in FLOWLESS_CATEGORIES
        if flowless != (not self.expected_flows):
            raise CorpusError(
                f"Case {self.id}: category {self.category} "
                f"{'forbids' if flowless else 'requires'} expected flows"
            )

    def load_program(self, catalog: Optional[ApiCatalog] = None) -> Program:
        try:
            text = self.aml_path.read_text(encoding="utf-8")
        except OSError as e:
            raise CorpusError(f"Case {self.id}: cannot read {self.aml_path}: {e}") from e
        return parse_program(text, catalog or default_catalog())


def default_corpus_dir() -> Path:
    """Directory of the corpus shipped with the package."""
    return Path(str(resources.files("leak_analytics.benchmark") / "corpus"))


def _expected_flow(case_id: str, data) -> ExpectedFlow:
    if not isinstance(data, dict) or "urlTemplate" not in data:
        raise CorpusError(f"Case {case_id}: expected flow needs a urlTemplate")
    taint = tuple(data.get("carriedTaint", ()))
    return ExpectedFlow(str(data["urlTemplate"]), taint, bool(data.get("sensitive", bool(taint))))


def load_corpus(corpus_dir: Optional[Union[str, Path]] = None) -> List[BenchCase]:
    """Read ``manifest.yaml`` of a corpus directory.

    A directory without a manifest and without AML files is an empty corpus.

    Raises:
        CorpusError: Missing or malformed manifest, duplicate ids, missing AML files
    """
    corpus_dir = Path(corpus_dir) if corpus_dir is not None else default_corpus_dir()
    if not corpus_dir.is_dir():
        raise CorpusError(f"Corpus directory not found: {corpus_dir}")
    manifest = corpus_dir / MANIFEST_NAME
    if not manifest.exists():
        if any(corpus_dir.glob("*.aml")):
            raise CorpusError(f"{corpus_dir} has AML files but no {MANIFEST_NAME}")
        return []

    try:
        data = yaml.safe_load(manifest.read_text(encoding="utf-8")) or {}
    except yaml.YAMLError as e:
        raise CorpusError(f"{manifest}: {e}") from e

    cases: List[BenchCase] = []
    seen = set()
    for entry in data.get("cases", []) or []:
        if not isinstance(entry, dict) or "id" not in entry or "aml" not in entry:
            raise CorpusError(f"{manifest}: every case needs an id and an aml file")
        case_id = str(entry["id"])
        if case_id in seen:
            raise CorpusError(f"{manifest}: duplicate case id {case_id}")
        seen.add(case_id)
        aml_path = corpus_dir / entry["aml"]
        if not aml_path.exists():
            raise CorpusError(f"Case {case_id}: {aml_path} does not exist")
        cases.append(
            BenchCase(
                id=case_id,
                aml_path=aml_path,
                category=entry.get("category", ""),
                expected_flows=tuple(_expected_flow(case_id, f) for f in entry.get("expectedFlows", []) or []),
                expected_miss=bool(entry.get("expectedMiss", False)),
                mirrors=str(entry.get("mirrors", "")),
            )
        )
    logger.debug(f"Loaded {len(cases)} cases from {corpus_dir}")
    return cases
