"""Corpus benchmark: run the analysis on every case and score detected flows."""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import pandas as pd
from tqdm import tqdm

from ..appmodel.catalog import ApiCatalog, default_catalog
from ..config.config_manager import AnalysisConfig
from ..errors import LeakAnalysisError
from ..executor.concolic import ConcolicExecutor
from ..executor.pipeline import AnalysisResult, analyze_app
from .corpus import BenchCase, load_corpus

logger = logging.getLogger(__name__)

CASE_STATUSES = ("pass", "miss", "falsePositive", "error")

FlowKey = Tuple[str, Tuple[str, ...], bool]
ExecutorFactory = Callable[[ApiCatalog, AnalysisConfig], ConcolicExecutor]


@dataclass
class CaseResult:
    case_id: str
    category: str
    status: str
    expected_miss: bool
    expected: int
    detected_expected: int
    missed: List[str] = field(default_factory=list)
    false_positives: List[str] = field(default_factory=list)
    details: str = ""
    paths_explored: int = 0
    paths_pruned: int = 0

    def to_dict(self) -> Dict:
        return {
            "id": self.case_id,
            "category": self.category,
            "status": self.status,
            "expectedMiss": self.expected_miss,
            "expectedFlows": self.expected,
            "detectedExpected": self.detected_expected,
            "missed": list(self.missed),
            "falsePositives": list(self.false_positives),
            "details": self.details,
            "pathsExplored": self.paths_explored,
            "pathsPruned": self.paths_pruned,
        }


@dataclass
class CorpusReport:
    mode: str = "full"
    cases: List[CaseResult] = field(default_factory=list)

    @property
    def expected_flows(self) -> int:
        return sum(case.expected for case in self.cases)

    @property
    def detected_flows(self) -> int:
        return sum(case.detected_expected for case in self.cases)

    @property
    def missed_flows(self) -> int:
        return self.expected_flows - self.detected_flows

    @property
    def false_positives(self) -> int:
        return sum(len(case.false_positives) for case in self.cases)

    @property
    def accuracy(self) -> float:
        return self.detected_flows / self.expected_flows if self.expected_flows else 1.0

    @property
    def accuracy_excluding_expected_miss(self) -> float:
        kept = [case for case in self.cases if not case.expected_miss]
        expected = sum(case.expected for case in kept)
        return sum(case.detected_expected for case in kept) / expected if expected else 1.0

    @property
    def precision(self) -> float:
        reported = self.detected_flows + self.false_positives
        return self.detected_flows / reported if reported else 1.0

    def status_of(self, case_id: str) -> str:
        for case in self.cases:
            if case.case_id == case_id:
                return case.status
        raise KeyError(case_id)

    def summary(self) -> Dict:
        return {
            "cases": len(self.cases),
            "expectedFlows": self.expected_flows,
            "detectedFlows": self.detected_flows,
            "missedFlows": self.missed_flows,
            "accuracy": self.accuracy,
            "accuracyExcludingExpectedMiss": self.accuracy_excluding_expected_miss,
            "falsePositives": self.false_positives,
            "precision": self.precision,
            "errors": sum(case.status == "error" for case in self.cases),
        }

    def to_dict(self) -> Dict:
        return {"mode": self.mode, "summary": self.summary(), "cases": [c.to_dict() for c in self.cases]}

    def to_frame(self) -> pd.DataFrame:
        columns = ["id", "category", "status", "expectedMiss", "expectedFlows", "detectedExpected", "falsePositives"]
        rows = [{**case.to_dict(), "falsePositives": len(case.false_positives)} for case in self.cases]
        return pd.DataFrame(rows, columns=columns)


def _flow_label(key: FlowKey) -> str:
    template, taint, _ = key
    return f"{template} {{{','.join(taint)}}}"


def score_case(case: BenchCase, result: Optional[AnalysisResult], error: Optional[str] = None) -> CaseResult:
    """Compare an analysis result with the case's expected flows.

    A detected sensitive flow nobody expected is a false positive; detected
    non-sensitive flows that were not listed are ignored.
    """
    expected = {flow.key() for flow in case.expected_flows}
    if result is None:
        return CaseResult(
            case.id,
            case.category,
            "error",
            case.expected_miss,
            len(expected),
            0,
            missed=sorted(_flow_label(k) for k in expected),
            details=error or "analysis failed",
        )

    detected = {
        (event.url_template, tuple(sorted(event.carried_taint)), event.sensitive) for event in result.events
    }
    found = expected & detected
    missed = expected - detected
    false_positives = {key for key in detected - expected if key[2]}

    if false_positives:
        status = "falsePositive"
    elif missed:
        status = "miss"
    else:
        status = "pass"

    details = ""
    if case.expected_miss and not missed:
        details = "known limitation no longer misses"
    elif result.errors:
        details = "; ".join(result.errors)

    stats = [stats for _, stats in result.trace_stats]
    return CaseResult(
        case.id,
        case.category,
        status,
        case.expected_miss,
        len(expected),
        len(found),
        missed=sorted(_flow_label(k) for k in missed),
        false_positives=sorted(_flow_label(k) for k in false_positives),
        details=details,
        paths_explored=sum(s.paths_explored for s in stats),
        paths_pruned=sum(s.paths_pruned for s in stats),
    )


def run_case(
    case: BenchCase,
    config: AnalysisConfig,
    catalog: Optional[ApiCatalog] = None,
    executor_factory: Optional[ExecutorFactory] = None,
) -> CaseResult:
    catalog = catalog or default_catalog()
    executor = executor_factory(catalog, config) if executor_factory else None
    try:
        program = case.load_program(catalog)
        result = analyze_app(program, catalog, config, executor)
    except LeakAnalysisError as e:
        logger.warning(f"Case {case.id} failed: {e}")
        logger.debug(f"Case {case.id} traceback", exc_info=True)
        return score_case(case, None, str(e))
    return score_case(case, result)


def _run_case_worker(args) -> CaseResult:
    case, config = args
    return run_case(case, config)


class CorpusBenchmark:
    """Runs corpus cases under one configuration."""

    def __init__(
        self,
        config: Optional[AnalysisConfig] = None,
        catalog: Optional[ApiCatalog] = None,
        executor_factory: Optional[ExecutorFactory] = None,
    ):
        """Initialize benchmark.

        Args:
            config: Analysis configuration; ``mode`` and ``workers`` apply to the run
            catalog: API catalog (default catalog if omitted)
            executor_factory: Builds the executor per case (concolic if omitted)
        """
        self.config = config or AnalysisConfig()
        self.catalog = catalog
        self.executor_factory = executor_factory
        self.report: Optional[CorpusReport] = None

    def run(self, cases: Sequence[BenchCase], progress: bool = False) -> CorpusReport:
        report = CorpusReport(mode=self.config.mode)
        parallel = self.config.workers > 1 and self.catalog is None and self.executor_factory is None
        if parallel and len(cases) > 1:
            with ProcessPoolExecutor(max_workers=self.config.workers) as pool:
                results = pool.map(_run_case_worker, [(case, self.config) for case in cases])
                report.cases.extend(tqdm(results, total=len(cases), desc="corpus", disable=not progress))
        else:
            for case in tqdm(cases, desc="corpus", disable=not progress):
                report.cases.append(run_case(case, self.config, self.catalog, self.executor_factory))

        summary = report.summary()
        logger.info(
            f"Corpus ({report.mode}): {summary['detectedFlows']}/{summary['expectedFlows']} flows, "
            f"{summary['falsePositives']} false positives, {summary['errors']} errors"
        )
        self.report = report
        return report

    def generate_report(self) -> pd.DataFrame:
        """Per-case table of the last run."""
        if self.report is None:
            raise ValueError("No benchmark has been run")
        return self.report.to_frame()


def run_corpus(
    corpus_dir: Optional[Union[str, Path]] = None,
    config: Optional[AnalysisConfig] = None,
    catalog: Optional[ApiCatalog] = None,
    progress: bool = False,
) -> CorpusReport:
    """Analyse every case of a corpus directory and aggregate the scores."""
    return CorpusBenchmark(config, catalog).run(load_corpus(corpus_dir), progress)
