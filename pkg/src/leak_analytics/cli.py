"""Command-line entry point: ``leaksem <command> ...``."""

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from . import __version__
from .appmodel.catalog import ApiCatalog, default_catalog, load_api_catalog
from .appmodel.parser import parse_program
from .benchmark.corpus import default_corpus_dir
from .benchmark.corpus_runner import run_corpus
from .benchmark.finding1 import run_finding1_experiment
from .benchmark.synthetic import generate_synthetic_flows
from .classifier.dataset import build_dataset
from .classifier.evaluation import cross_validate
from .classifier.model import TrainedModel
from .config.config_manager import AnalysisConfig, ConfigManager
from .errors import LeakAnalysisError
from .executor.pipeline import analyze_app
from .flows.flow_record import FlowRecord
from .flows.flow_store import FlowStore, export_flows, read_flow_file
from .flows.labeling import label_flows, read_label_manifest, summarize_labels
from .reporting import dumps, write_json
from .static.call_graph import build_call_graph
from .static.sources import component_sources, entry_points_for_source

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_BUDGET = 2


class UsageError(Exception):
    """Bad command line."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _add_analysis_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--mode", choices=("full", "sink-reach"), help="Analysis mode")
    parser.add_argument("--max-traces", type=int, help="Execution traces per app")
    parser.add_argument("--max-trace-len", type=int, help="Callbacks per trace")
    parser.add_argument("--max-paths", type=int, dest="max_paths_per_trace", help="Paths per trace")
    parser.add_argument("--max-unknown-depth", type=int, help="Nested unknown branches that fork")
    parser.add_argument("--symbolic-array-len", type=int, help="Elements of a symbolic array")
    parser.add_argument("--strict-decrypt", action="store_true", default=None, help="Fail on decryption misses")
    parser.add_argument("--catalog", help="API catalog file (default catalog if omitted)")
    parser.add_argument("--workers", type=int, help="Worker processes")


def _add_classifier_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--seed", type=int, help="Random seed")
    parser.add_argument("--min-df", type=int, help="Minimum document frequency of a token")
    parser.add_argument("--max-depth", type=int, help="Maximum tree depth")
    parser.add_argument("--min-leaf", type=int, help="Minimum rows per leaf")
    parser.add_argument("--lowercase", action="store_true", default=None, help="Lowercase tokens")
    parser.add_argument("--separators", help="Token separator characters")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="leaksem", description="Sensitive transmission analysis for AML apps")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="Config file (key=value lines or YAML)")
    parser.add_argument("--log-level", help="Logging level (DEBUG, INFO, WARNING, ERROR)")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    analyze = sub.add_parser("analyze", help="Find sink reaches of an app or a directory of apps")
    analyze.add_argument("path", help="AML file or directory of .aml files")
    analyze.add_argument("--out", help="Flow file (JSONL); stdout if omitted")
    analyze.add_argument("--labels", help="Label manifest applied to the flows")
    analyze.add_argument("--no-dedup", action="store_true", help="Keep one record per trace")
    _add_analysis_flags(analyze)

    graph = sub.add_parser("graph", help="Show call graphs, sources and entry points")
    graph.add_argument("path", help="AML file")
    graph.add_argument("--dot", action="store_true", help="Print DOT instead of JSON")
    graph.add_argument("--catalog", help="API catalog file")

    bench = sub.add_parser("bench", help="Run the benchmark corpus")
    bench.add_argument("corpus", nargs="?", help="Corpus directory (shipped corpus if omitted)")
    bench.add_argument("--report", help="Report file (JSON)")
    bench.add_argument("--progress", action="store_true", help="Show a progress bar")
    _add_analysis_flags(bench)

    train = sub.add_parser("train", help="Train and cross-validate the flow classifier")
    train.add_argument("--flows", required=True, help="Flow file (JSONL)")
    train.add_argument("--labels", help="Label manifest applied before training")
    train.add_argument("--mode", choices=("host", "network"), default="host", help="Dataset mode")
    train.add_argument("--k", type=int, help="Cross-validation folds")
    train.add_argument("--no-cv", action="store_true", help="Skip cross-validation")
    train.add_argument("--legal-ratio", type=float, help="Network mode cap on non-sensitive flows")
    train.add_argument("--model", help="Model output file")
    train.add_argument("--report", help="Evaluation report file (JSON)")
    _add_classifier_flags(train)

    classify = sub.add_parser("classify", help="Predict flow legality with a trained model")
    classify.add_argument("--model", required=True, help="Model file")
    classify.add_argument("--flows", required=True, help="Flow file (JSONL)")
    classify.add_argument("--all", action="store_true", help="Classify non-sensitive flows too")
    classify.add_argument("--out", help="Output file (JSONL); stdout if omitted")

    report = sub.add_parser("report", help="Summarise a flow file")
    report.add_argument("flows", help="Flow file (JSONL)")
    report.add_argument("--labels", help="Label manifest applied before summarising")

    finding1 = sub.add_parser("finding1", help="Encrypted-hostname degradation experiment")
    finding1.add_argument("--flows", help="Labeled flow file; synthetic flows if omitted")
    finding1.add_argument("--shared-hosts", action="store_true", help="Synthetic decrypted hosts share the plain pool")
    finding1.add_argument("--test-fraction", type=float, help="Held-out share of decrypted-host flows")
    finding1.add_argument("--repeats", type=int, help="Seeded splits to pool")
    finding1.add_argument("--report", help="Report file (JSON)")
    _add_classifier_flags(finding1)
    return parser


def _config(args: argparse.Namespace) -> Tuple[ConfigManager, AnalysisConfig]:
    manager = ConfigManager(args.config)
    overrides = {
        name: getattr(args, name, None)
        for name in (
            "mode",
            "max_traces",
            "max_trace_len",
            "max_paths_per_trace",
            "max_unknown_depth",
            "symbolic_array_len",
            "strict_decrypt",
            "workers",
            "seed",
            "min_df",
            "max_depth",
            "min_leaf",
            "lowercase",
            "separators",
            "k",
        )
    }
    if args.command == "train":
        # train's --mode selects the dataset, not the analysis
        overrides.pop("mode")
    return manager, manager.to_analysis_config(**overrides)


def _catalog(path: Optional[str]) -> ApiCatalog:
    if path is None:
        return default_catalog()
    return load_api_catalog(Path(path).read_text(encoding="utf-8"), name=Path(path).stem)


def _app_files(path: Path) -> List[Path]:
    if path.is_dir():
        files = sorted(path.glob("*.aml"))
        if not files:
            raise ValueError(f"No .aml files in {path}")
        return files
    if not path.exists():
        raise ValueError(f"File not found: {path}")
    return [path]


def _analyze_file(job: Tuple[Path, AnalysisConfig, Optional[str]]) -> Tuple[List[FlowRecord], bool]:
    path, config, catalog_path = job
    catalog = _catalog(catalog_path)
    program = parse_program(path.read_text(encoding="utf-8"), catalog)
    result = analyze_app(program, catalog, config)
    records = [FlowRecord.from_event(program.name, event) for event in result.events]
    return records, result.budget_exceeded


def _write_or_print(records: Sequence[FlowRecord], out: Optional[str], partial: bool):
    if out:
        export_flows(records, out, partial)
        return
    print(json.dumps({"partial": partial, "schemaVersion": 1}, sort_keys=True))
    for record in records:
        print(json.dumps(record.to_json(), sort_keys=True, ensure_ascii=False))


def cmd_analyze(args: argparse.Namespace) -> int:
    _, config = _config(args)
    jobs = [(path, config, args.catalog) for path in _app_files(Path(args.path))]
    if config.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(pool.map(_analyze_file, jobs))
    else:
        outcomes = [_analyze_file(job) for job in jobs]

    store = FlowStore()
    for records, budget_exceeded in outcomes:
        store.extend(records)
        store.partial = store.partial or budget_exceeded
    records = store.snapshot() if args.no_dedup else store.deduplicated()
    if args.labels:
        records = label_flows(records, read_label_manifest(args.labels))
    _write_or_print(records, args.out, store.partial)

    logger.info(f"{len(records)} flows from {len(jobs)} apps")
    if store.partial:
        logger.warning("Analysis budget exhausted; flow file is partial")
        return EXIT_BUDGET
    return EXIT_OK


def cmd_graph(args: argparse.Namespace) -> int:
    catalog = _catalog(args.catalog)
    program = parse_program(Path(args.path).read_text(encoding="utf-8"), catalog)
    components: Dict[str, Dict] = {}
    for component in program.components:
        graph = build_call_graph(component, catalog)
        if args.dot:
            sys.stdout.write(graph.to_dot())
            continue
        sources = component_sources(component, catalog)
        components[component.name] = {
            "nodes": graph.nodes,
            "edges": [list(edge) for edge in graph.edges],
            "sources": [
                {
                    "method": site.method,
                    "api": site.api_name,
                    "dataType": site.data_type,
                    "entryPoints": list(entry_points_for_source(graph, site).entry_points),
                }
                for site in sources
            ],
        }
    if not args.dot:
        print(dumps({"app": program.name, "components": components}))
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    _, config = _config(args)
    if args.catalog:
        catalog = _catalog(args.catalog)
    else:
        catalog = None
    report = run_corpus(args.corpus or default_corpus_dir(), config, catalog, progress=args.progress)
    if args.report:
        write_json(report.to_dict(), args.report)
    print(report.to_frame().to_string(index=False))
    print(dumps(report.summary()))
    return EXIT_OK


def _load_labeled(flows: str, labels: Optional[str]) -> List[FlowRecord]:
    records, _ = read_flow_file(flows)
    if labels:
        records = label_flows(records, read_label_manifest(labels))
    return records


def cmd_train(args: argparse.Namespace) -> int:
    _, config = _config(args)
    seed = config.require_seed()
    records = _load_labeled(args.flows, args.labels)
    legal_ratio = args.legal_ratio if args.legal_ratio is not None else config.network_legal_ratio
    dataset = build_dataset(records, args.mode, seed, legal_ratio)

    output: Dict = {"mode": args.mode, "instances": len(dataset), "classes": dataset.counts()}
    if not args.no_cv:
        evaluation = cross_validate(dataset, config.k, seed, config)
        output["evaluation"] = evaluation.to_dict()
        print(evaluation.to_frame().to_string())
    model = TrainedModel.train(dataset, config, seed)
    if args.model:
        model.save(args.model)
    if args.report:
        write_json(output, args.report)
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    model = TrainedModel.load(args.model)
    records, _ = read_flow_file(args.flows)
    if not args.all:
        records = [r for r in records if r.sensitive]
    lines = [
        json.dumps(
            {"appId": r.app_id, "url": r.url, "urlTemplate": r.url_template, "predicted": label},
            sort_keys=True,
            ensure_ascii=False,
        )
        for r, label in model.classify_records(records)
    ]
    text = "\n".join(lines) + ("\n" if lines else "")
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    records, partial = read_flow_file(args.flows)
    if args.labels:
        records = label_flows(records, read_label_manifest(args.labels))
    store = FlowStore(records)
    frame = store.to_frame()
    print(frame.to_string(index=False))
    print(
        dumps(
            {
                "flows": len(records),
                "sensitive": sum(r.sensitive for r in records),
                "apps": len({r.app_id for r in records}),
                "labels": summarize_labels(records),
                "partial": partial,
            }
        )
    )
    return EXIT_OK


def cmd_finding1(args: argparse.Namespace) -> int:
    manager, config = _config(args)
    seed = config.require_seed()
    if args.flows:
        records, _ = read_flow_file(args.flows)
    else:
        records = generate_synthetic_flows(
            n_sensitive=200, seed=seed, n_decrypted=200, shared_host_pool=args.shared_hosts
        )
    params = manager.get_benchmark_params()
    fraction = args.test_fraction if args.test_fraction is not None else params.get("finding1_test_fraction", 0.5)
    repeats = args.repeats if args.repeats is not None else params.get("finding1_repeats", 10)
    result = run_finding1_experiment(records, seed, fraction, config, repeats)
    if args.report:
        write_json(result.to_dict(), args.report)
    print(dumps(result.to_dict()))
    return EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "graph": cmd_graph,
    "bench": cmd_bench,
    "train": cmd_train,
    "classify": cmd_classify,
    "report": cmd_report,
    "finding1": cmd_finding1,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command.

    Returns:
        int: 0 on success, 1 on usage or input errors, 2 when an analysis
        budget ran out and the output is partial
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_INPUT

    try:
        manager = ConfigManager(args.config)
        manager.configure_logging(args.log_level)
        return COMMANDS[args.command](args)
    except (LeakAnalysisError, ValueError, OSError) as e:
        logger.debug("Command failed", exc_info=True)
        print(f"leaksem {args.command}: {e}", file=sys.stderr)
        return EXIT_INPUT
