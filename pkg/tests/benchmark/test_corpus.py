"""Tests for corpus loading and the corpus benchmark."""

import tempfile
import unittest
from pathlib import Path

from leak_analytics.appmodel import default_catalog
from leak_analytics.benchmark import (
    CATEGORIES,
    BenchCase,
    CorpusBenchmark,
    ExpectedFlow,
    default_corpus_dir,
    load_corpus,
    run_case,
    run_corpus,
    score_case,
)
from leak_analytics.config import AnalysisConfig
from leak_analytics.errors import CorpusError
from leak_analytics.executor import analyze_app


class TestLoadCorpus(unittest.TestCase):
    """Test cases for manifest loading."""

    def setUp(self):
        """Create a scratch corpus directory."""
        self.tmp = tempfile.TemporaryDirectory()
        self.root = Path(self.tmp.name)

    def tearDown(self):
        """Remove the scratch directory."""
        self.tmp.cleanup()

    def write(self, name, text):
        (self.root / name).write_text(text, encoding="utf-8")

    def test_shipped_corpus(self):
        """Test that every shipped case loads and parses."""
        cases = load_corpus()
        self.assertEqual(len(cases), 30)
        self.assertEqual(len({case.id for case in cases}), 30)
        self.assertTrue({case.category for case in cases} <= set(CATEGORIES))
        self.assertEqual(
            sorted(case.id for case in cases if case.expected_miss), ["ImplicitFlow", "ImplicitUserDriven"]
        )
        catalog = default_catalog()
        for case in cases:
            with self.subTest(case=case.id):
                self.assertEqual(case.load_program(catalog).name, case.id)

    def test_empty_directory(self):
        """Test that an empty directory is an empty corpus."""
        self.assertEqual(load_corpus(self.root), [])

    def test_aml_without_manifest(self):
        """Test that stray AML files need a manifest."""
        self.write("A.aml", "app A { }")
        with self.assertRaises(CorpusError):
            load_corpus(self.root)

    def test_missing_directory(self):
        """Test a directory that does not exist."""
        with self.assertRaises(CorpusError):
            load_corpus(self.root / "nope")

    def test_manifest_errors(self):
        """Test duplicate ids, missing files and bad categories."""
        self.write("A.aml", "app A { }")
        self.write("manifest.yaml", "cases:\n  - {id: A, aml: A.aml, category: noLeak}\n  - {id: A, aml: A.aml, category: noLeak}\n")
        with self.assertRaisesRegex(CorpusError, "duplicate case id A"):
            load_corpus(self.root)
        self.write("manifest.yaml", "cases:\n  - {id: B, aml: B.aml, category: noLeak}\n")
        with self.assertRaisesRegex(CorpusError, "does not exist"):
            load_corpus(self.root)
        self.write("manifest.yaml", "cases:\n  - {id: A, aml: A.aml, category: weird}\n")
        with self.assertRaisesRegex(CorpusError, "unknown category"):
            load_corpus(self.root)
        self.write("manifest.yaml", "cases:\n  - {id: A, aml: A.aml, category: plainLeak}\n")
        with self.assertRaisesRegex(CorpusError, "requires expected flows"):
            load_corpus(self.root)
        self.write("manifest.yaml", "cases: [\n")
        with self.assertRaises(CorpusError):
            load_corpus(self.root)

    def test_expected_flow_consistency(self):
        """Test that sensitivity must agree with taint."""
        with self.assertRaises(CorpusError):
            ExpectedFlow("a.com", ("IMEI",), sensitive=False)
        self.assertEqual(ExpectedFlow("a.com", ("SMS", "IMEI")).carried_taint, ("IMEI", "SMS"))


class TestCorpusBenchmark(unittest.TestCase):
    """Test cases for scoring the shipped corpus."""

    @classmethod
    def setUpClass(cls):
        """Run the corpus once in each mode."""
        cls.full = run_corpus()
        cls.sink_reach = run_corpus(config=AnalysisConfig(mode="sink-reach"))

    def test_full_mode_quality(self):
        """Test that only the known limitations miss."""
        summary = self.full.summary()
        self.assertEqual(summary["cases"], 30)
        self.assertEqual(summary["errors"], 0)
        self.assertEqual(summary["falsePositives"], 0)
        self.assertEqual(summary["accuracyExcludingExpectedMiss"], 1.0)
        self.assertEqual(summary["missedFlows"], 2)
        self.assertEqual(self.full.status_of("ImplicitFlow"), "miss")
        self.assertEqual(self.full.status_of("InfeasibleTrap1"), "pass")
        self.assertEqual(self.full.status_of("LoopBomb1"), "pass")

    def test_sink_reach_mode_reports_host_only_flow(self):
        """Test that reachability alone flags the bare host send."""
        self.assertEqual(self.sink_reach.mode, "sink-reach")
        self.assertEqual(self.sink_reach.status_of("EventOrdering1"), "falsePositive")
        case = next(c for c in self.sink_reach.cases if c.case_id == "EventOrdering1")
        self.assertEqual(case.false_positives, ["gongfu188.com {IMEI}"])
        self.assertGreater(self.sink_reach.false_positives, self.full.false_positives)

    def test_report_views(self):
        """Test the dict and table forms."""
        data = self.full.to_dict()
        self.assertEqual(data["mode"], "full")
        self.assertEqual(len(data["cases"]), 30)
        frame = self.full.to_frame()
        self.assertEqual(len(frame), 30)
        self.assertIn("status", frame.columns)
        with self.assertRaises(KeyError):
            self.full.status_of("Missing")


class TestScoring(unittest.TestCase):
    """Test cases for per-case scoring."""

    def setUp(self):
        """Pick the event-ordering case."""
        self.case = next(case for case in load_corpus() if case.id == "EventOrdering1")

    def test_error_result(self):
        """Test that a failed analysis counts every flow as missed."""
        result = score_case(self.case, None, "boom")
        self.assertEqual(result.status, "error")
        self.assertEqual(len(result.missed), 2)
        self.assertEqual(result.details, "boom")

    def test_truncated_run_misses(self):
        """Test that a trace budget of one misses the leak."""
        result = run_case(self.case, AnalysisConfig(max_traces=1))
        self.assertEqual(result.status, "miss")
        self.assertEqual(result.missed, ["gongfu188.com<IMEI> {IMEI}"])

    def test_unparsable_case(self):
        """Test that an unreadable program becomes an error result."""
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "Bad.aml"
            path.write_text("app Bad {", encoding="utf-8")
            case = BenchCase("Bad", path, "noLeak")
            self.assertEqual(run_case(case, AnalysisConfig()).status, "error")

    def test_expected_miss_that_passes(self):
        """Test the note when a known limitation stops missing."""
        case = BenchCase(
            self.case.id, self.case.aml_path, self.case.category, self.case.expected_flows, expected_miss=True
        )
        program = case.load_program()
        result = score_case(case, analyze_app(program, default_catalog()))
        self.assertEqual(result.status, "pass")
        self.assertEqual(result.details, "known limitation no longer misses")

    def test_generate_report(self):
        """Test the per-case table of a benchmark object."""
        benchmark = CorpusBenchmark()
        with self.assertRaises(ValueError):
            benchmark.generate_report()
        benchmark.run([self.case])
        self.assertEqual(benchmark.generate_report().loc[0, "status"], "pass")

    def test_default_dir(self):
        """Test the shipped corpus location."""
        self.assertTrue((default_corpus_dir() / "manifest.yaml").exists())


if __name__ == "__main__":
    unittest.main()
