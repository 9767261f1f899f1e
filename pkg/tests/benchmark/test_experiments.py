"""Tests for synthetic flows and the decrypted-hostname experiment."""

import unittest

from leak_analytics.benchmark import generate_synthetic_flows, run_finding1_experiment
from leak_analytics.benchmark.synthetic import DECRYPTED_ILLEGAL_HOSTS, ILLEGAL_HOSTS
from leak_analytics.config import AnalysisConfig
from leak_analytics.errors import ClassifierError
from leak_analytics.flows.labeling import match_pattern


class TestSyntheticFlows(unittest.TestCase):
    """Test cases for generate_synthetic_flows."""

    def test_populations(self):
        """Test counts, order and labels of each population."""
        flows = generate_synthetic_flows(n_sensitive=20, seed=1, n_non_sensitive=5, n_decrypted=10)
        self.assertEqual(len(flows), 35)
        self.assertEqual(sum(f.label == "illegal" for f in flows[:20]), 10)
        self.assertTrue(all(f.hostname_decrypted for f in flows[20:30]))
        self.assertTrue(all(not f.sensitive and f.label == "unlabeled" for f in flows[30:]))
        self.assertEqual(len({f.app_id for f in flows}), 35)

    def test_templates_carry_placeholders(self):
        """Test that sensitive templates end in their data type."""
        for flow in generate_synthetic_flows(n_sensitive=10, seed=2):
            self.assertTrue(flow.url_template.endswith(f"<{flow.carried_taint[0]}>"))
            self.assertNotIn("<", flow.url)

    def test_host_pools(self):
        """Test disjoint and shared decrypted host pools."""
        separate = generate_synthetic_flows(n_sensitive=0, seed=3, n_decrypted=40)
        illegal = [f.url for f in separate if f.label == "illegal"]
        self.assertTrue(all(any(match_pattern(h, u) for h in DECRYPTED_ILLEGAL_HOSTS) for u in illegal))
        shared = generate_synthetic_flows(n_sensitive=0, seed=3, n_decrypted=40, shared_host_pool=True)
        illegal = [f.url for f in shared if f.label == "illegal"]
        self.assertTrue(all(any(match_pattern(h, u) for h in ILLEGAL_HOSTS) for u in illegal))

    def test_seeded(self):
        """Test determinism and the seed requirement."""
        self.assertEqual(generate_synthetic_flows(50, 9), generate_synthetic_flows(50, 9))
        self.assertNotEqual(generate_synthetic_flows(50, 9), generate_synthetic_flows(50, 10))
        with self.assertRaises(ValueError):
            generate_synthetic_flows(10)
        with self.assertRaises(ValueError):
            generate_synthetic_flows(10, 1, illegal_fraction=1.0)


class TestDegradationExperiment(unittest.TestCase):
    """Test cases for run_finding1_experiment."""

    def setUp(self):
        """Set up the classifier configuration."""
        self.config = AnalysisConfig(seed=7)

    def test_unseen_hosts_degrade_accuracy(self):
        """Test that a model without decrypted hosts loses at least ten points."""
        flows = generate_synthetic_flows(n_sensitive=200, seed=7, n_decrypted=200)
        report = run_finding1_experiment(flows, 7, 0.5, self.config)
        self.assertEqual(report.test_size, 100)
        self.assertEqual(report.train_decrypted, 100)
        self.assertEqual(report.train_unencrypted, 200)
        self.assertEqual(report.repeats, 10)
        self.assertEqual(report.unencrypted_only.total, 1000)
        self.assertEqual(report.mixed.total, 1000)
        self.assertGreaterEqual(report.gap_points, 10.0)
        self.assertGreaterEqual(report.accuracy_mixed, 0.9)

    def test_shared_hosts_close_the_gap(self):
        """Test that decrypted flows to known hosts are classified alike across seeds."""
        for seed in (3, 7, 12):
            with self.subTest(seed=seed):
                flows = generate_synthetic_flows(
                    n_sensitive=200, seed=seed, n_decrypted=200, shared_host_pool=True
                )
                report = run_finding1_experiment(flows, seed, 0.5, AnalysisConfig(seed=seed))
                self.assertLess(abs(report.gap_points), 2.0)

    def test_single_split(self):
        """Test that one repeat scores each held-out flow once."""
        flows = generate_synthetic_flows(n_sensitive=40, seed=5, n_decrypted=20)
        report = run_finding1_experiment(flows, 5, 0.5, self.config, repeats=1)
        self.assertEqual(report.unencrypted_only.total, 10)
        with self.assertRaises(ValueError):
            run_finding1_experiment(flows, 5, 0.5, self.config, repeats=0)

    def test_report_dict(self):
        """Test the serialised keys."""
        flows = generate_synthetic_flows(n_sensitive=40, seed=5, n_decrypted=20)
        data = run_finding1_experiment(flows, 5, 0.5, self.config).to_dict()
        self.assertEqual(
            sorted(data),
            sorted(
                [
                    "accuracyUnencryptedOnly",
                    "accuracyMixed",
                    "gapPoints",
                    "trainUnencrypted",
                    "trainDecrypted",
                    "testSize",
                    "repeats",
                ]
            ),
        )
        self.assertEqual(data["testSize"], 10)
        self.assertEqual(data["repeats"], 10)

    def test_needs_both_populations(self):
        """Test input checks."""
        with self.assertRaises(ClassifierError):
            run_finding1_experiment(generate_synthetic_flows(20, 1), 1, 0.5, self.config)
        flows = generate_synthetic_flows(20, 1, n_decrypted=4)
        with self.assertRaises(ValueError):
            run_finding1_experiment(flows, 1, 1.0, self.config)


if __name__ == "__main__":
    unittest.main()
