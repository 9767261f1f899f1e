"""Benchmark corpus, corpus runner and classifier experiments."""

from .corpus import (
    CATEGORIES,
    BenchCase,
    ExpectedFlow,
    default_corpus_dir,
    load_corpus,
)
from .corpus_runner import CaseResult, CorpusBenchmark, CorpusReport, run_case, run_corpus, score_case
from .finding1 import DegradationReport, run_finding1_experiment
from .synthetic import generate_synthetic_flows

__all__ = [
    "CATEGORIES",
    "BenchCase",
    "ExpectedFlow",
    "default_corpus_dir",
    "load_corpus",
    "CaseResult",
    "CorpusBenchmark",
    "CorpusReport",
    "run_case",
    "run_corpus",
    "score_case",
    "DegradationReport",
    "run_finding1_experiment",
    "generate_synthetic_flows",
]
