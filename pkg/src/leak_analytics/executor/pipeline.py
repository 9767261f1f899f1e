"""Full analysis driver: static phase, basic traces, execution and expansion."""

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Deque, Dict, List, Optional, Set, Tuple

from ..appmodel.catalog import ApiCatalog
from ..appmodel.nodes import Component, Program
from ..config.config_manager import AnalysisConfig
from ..errors import LeakAnalysisError
from ..static.call_graph import build_call_graph
from ..static.sources import component_sources, entry_points_for_source
from .concolic import ConcolicExecutor, ExplorationStats, SinkEvent
from .traces import ExecutionTrace, expand_traces, generate_basic_traces

logger = logging.getLogger(__name__)


@dataclass
class AnalysisResult:
    app: str
    events: List[SinkEvent] = field(default_factory=list)
    traces: List[ExecutionTrace] = field(default_factory=list)
    errors: List[str] = field(default_factory=list)
    budget_exceeded: bool = False
    trace_stats: List[Tuple[ExecutionTrace, ExplorationStats]] = field(default_factory=list)

    @property
    def sensitive_events(self) -> List[SinkEvent]:
        return [event for event in self.events if event.sensitive]

    def summary(self) -> Dict:
        return {
            "app": self.app,
            "traces": len(self.traces),
            "events": len(self.events),
            "sensitiveEvents": len(self.sensitive_events),
            "pathsExplored": sum(stats.paths_explored for _, stats in self.trace_stats),
            "pathsPruned": sum(stats.paths_pruned for _, stats in self.trace_stats),
            "errors": list(self.errors),
            "budgetExceeded": self.budget_exceeded,
        }


@dataclass
class _TraceBudget:
    """Traces executed so far across all components of one app."""

    executed: int = 0


def _analyze_component(
    program: Program,
    component: Component,
    catalog: ApiCatalog,
    config: AnalysisConfig,
    executor: ConcolicExecutor,
    result: AnalysisResult,
    seen_events: Set[Tuple],
    budget: _TraceBudget,
):
    graph = build_call_graph(component, catalog)
    entries = [entry_points_for_source(graph, site) for site in component_sources(component, catalog)]
    basic = generate_basic_traces(graph, entries, config)

    queue: Deque[ExecutionTrace] = deque(basic)
    seen = {trace.callbacks for trace in basic}
    while queue:
        if budget.executed >= config.max_traces:
            result.budget_exceeded = True
            logger.warning(
                f"Trace budget of {config.max_traces} exhausted in {component.name}; "
                f"{len(queue)} traces not executed"
            )
            break
        trace = queue.popleft()
        budget.executed += 1
        try:
            outcome = executor.execute_trace(program, trace)
        except LeakAnalysisError as e:
            logger.warning(f"Trace {component.name} [{trace}] failed: {e}")
            result.errors.append(f"{component.name} [{trace}]: {e}")
            continue

        result.traces.append(trace)
        result.trace_stats.append((trace, outcome.stats))
        result.errors.extend(outcome.stats.path_errors)
        result.budget_exceeded = result.budget_exceeded or outcome.stats.budget_exceeded
        for event in outcome.events:
            if event.key() not in seen_events:
                seen_events.add(event.key())
                result.events.append(event)

        if outcome.sink_reached:
            # Sink-reach mode stops at the first sink of the component
            break
        queue.extend(
            expand_traces(
                trace, outcome.newly_tainted, component, config, seen, outcome.transmitted_by
            )
        )


def analyze_app(
    program: Program,
    catalog: ApiCatalog,
    config: Optional[AnalysisConfig] = None,
    executor: Optional[ConcolicExecutor] = None,
) -> AnalysisResult:
    """Find every sink reach of an app.

    Components are analysed in declaration order; within a component traces
    run first-in first-out, basic traces first, then expansions. Events with
    the same component, sink, URL, template and taint are reported once,
    with the first trace that reached them. At most ``config.max_traces``
    traces run per app, counted across all components.

    Args:
        program: Validated program
        catalog: API catalog the program was validated against
        config: Analysis configuration (defaults if omitted)
        executor: Executor to run traces with (a ConcolicExecutor if omitted)

    Returns:
        AnalysisResult: Events, executed traces, per-trace errors and statistics
    """
    config = config or AnalysisConfig()
    executor = executor or ConcolicExecutor(catalog, config)
    result = AnalysisResult(app=program.name)
    seen_events: Set[Tuple] = set()
    budget = _TraceBudget()

    for component in program.components:
        try:
            _analyze_component(
                program, component, catalog, config, executor, result, seen_events, budget
            )
        except LeakAnalysisError as e:
            logger.warning(f"Component {component.name} of {program.name} failed: {e}")
            result.errors.append(f"{component.name}: {e}")

    logger.info(
        f"Analysed {program.name}: {len(result.traces)} traces, {len(result.events)} events "
        f"({len(result.sensitive_events)} sensitive)"
    )
    return result
