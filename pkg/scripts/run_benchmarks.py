"""Benchmark script: corpus detection quality, classifier quality and the encrypted-hostname experiment."""

import argparse
import logging
import os
import sys
import time
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional

# Add project root to Python path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "src")))

from leak_analytics.benchmark import generate_synthetic_flows, run_corpus, run_finding1_experiment
from leak_analytics.classifier import build_dataset, cross_validate
from leak_analytics.config import ConfigManager
from leak_analytics.reporting import write_json

logger = logging.getLogger(__name__)


def ensure_dir(directory: str) -> None:
    """Create directory if it doesn't exist."""
    Path(directory).mkdir(parents=True, exist_ok=True)


def run_corpus_benchmarks(manager: ConfigManager) -> Dict[str, Any]:
    """Score the shipped corpus in both analysis modes."""
    results = {}
    for mode in ("full", "sink-reach"):
        start_time = time.time()
        report = run_corpus(config=manager.to_analysis_config(mode=mode), progress=True)
        results[mode] = {
            "summary": report.summary(),
            "cases": [case.to_dict() for case in report.cases],
            "execution_time": time.time() - start_time,
        }
        print(f"\nCorpus ({mode}):")
        print(report.to_frame().to_string(index=False))
    return results


def run_classifier_benchmarks(manager: ConfigManager, seed: int) -> Dict[str, Any]:
    """Cross-validate the classifier on synthetic flows in host and network mode."""
    config = manager.to_analysis_config(seed=seed)
    flows = generate_synthetic_flows(n_sensitive=1000, seed=seed, n_non_sensitive=1000)
    results = {}
    for mode in ("host", "network"):
        start_time = time.time()
        dataset = build_dataset(flows, mode, seed, config.network_legal_ratio)
        report = cross_validate(dataset, config.k, seed, config)
        results[mode] = {**report.to_dict(), "execution_time": time.time() - start_time}
        print(f"\nClassifier ({mode}, {len(dataset)} flows):")
        print(report.to_frame().to_string())
    return results


def run_degradation_benchmark(manager: ConfigManager, seed: int) -> Dict[str, Any]:
    """Encrypted-hostname experiment with separate and with shared host pools."""
    config = manager.to_analysis_config(seed=seed)
    params = manager.get_benchmark_params()
    fraction = params.get("finding1_test_fraction", 0.5)
    repeats = params.get("finding1_repeats", 10)
    results = {}
    for shared in (False, True):
        flows = generate_synthetic_flows(
            n_sensitive=200, seed=seed, n_decrypted=200, shared_host_pool=shared
        )
        report = run_finding1_experiment(flows, seed, fraction, config, repeats)
        key = "shared_hosts" if shared else "separate_hosts"
        results[key] = report.to_dict()
        print(
            f"\nDecrypted hosts ({key}): unencrypted-only {report.accuracy_unencrypted_only:.2%}, "
            f"mixed {report.accuracy_mixed:.2%}, gap {report.gap_points:.1f} points"
        )
    return results


def run_benchmarks(config_path: Optional[str] = None, seed: int = 7) -> Dict[str, Any]:
    """Run every benchmark and collect the results."""
    manager = ConfigManager(config_path)
    return {
        "generated": datetime.now().isoformat(),
        "seed": seed,
        "corpus": run_corpus_benchmarks(manager),
        "classifier": run_classifier_benchmarks(manager, seed),
        "finding1": run_degradation_benchmark(manager, seed),
    }


def main():
    parser = argparse.ArgumentParser(description="Run the leak analytics benchmarks")
    parser.add_argument("--config", help="Config file")
    parser.add_argument("--seed", type=int, default=7, help="Random seed")
    parser.add_argument("--output-dir", help="Output directory")
    args = parser.parse_args()

    timestamp = datetime.now().strftime("%y%m%d-%H%M")
    output_dir = args.output_dir or f"./benchmarks/benchmark-{timestamp}"
    ensure_dir(output_dir)

    try:
        ConfigManager(args.config).configure_logging()
        results = run_benchmarks(args.config, args.seed)
    except Exception as e:
        logger.error(f"Benchmark run failed: {e}")
        sys.exit(1)

    results_file = write_json(results, Path(output_dir) / "benchmark_results.json")
    print(f"\nBenchmark results saved to: {results_file}")


if __name__ == "__main__":
    main()
