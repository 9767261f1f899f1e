"""Execution traces: basic traces from entry points and their expansion."""

import logging
from dataclasses import dataclass
from typing import AbstractSet, Iterable, List, Mapping, Optional, Set, Tuple

import networkx as nx

from ..appmodel.nodes import Component
from ..config.config_manager import AnalysisConfig
from ..errors import TraceGenerationError
from ..static.call_graph import CallGraph, method_name
from ..static.sources import EntryPointResult
from .compiler import fields_read

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExecutionTrace:
    """Ordered callbacks the executor invokes, starting at onCreate."""

    component: str
    callbacks: Tuple[str, ...]
    parent: Optional["ExecutionTrace"] = None
    added_callback: Optional[str] = None

    def __post_init__(self):
        if not self.callbacks or self.callbacks[0] != "onCreate":
            raise TraceGenerationError(f"Trace {self.callbacks} does not start with onCreate")

    @property
    def provenance(self) -> str:
        return "basic" if self.parent is None else "expanded"

    @property
    def is_expanded(self) -> bool:
        return self.parent is not None

    def extend(self, callback: str) -> "ExecutionTrace":
        return ExecutionTrace(self.component, self.callbacks + (callback,), self, callback)

    def __str__(self) -> str:
        return " -> ".join(self.callbacks)

    def __len__(self) -> int:
        return len(self.callbacks)


def _entry_subgraph(graph: CallGraph) -> nx.DiGraph:
    return graph.graph.subgraph(graph.entry_nodes)


def generate_basic_traces(
    graph: CallGraph, entries: Iterable[EntryPointResult], config: AnalysisConfig
) -> List[ExecutionTrace]:
    """Build one trace per (source, entry point) pair.

    The trace is the depth-first path from onCreate to the entry callback
    over framework-invocable nodes; duplicates are dropped and order follows
    the input.

    Raises:
        TraceGenerationError: Entry not reachable from onCreate
    """
    subgraph = _entry_subgraph(graph)
    predecessors = nx.dfs_predecessors(subgraph, source=graph.on_create)
    traces: List[ExecutionTrace] = []
    seen: Set[Tuple[str, ...]] = set()

    for result in entries:
        for entry in result.entry_points:
            if entry != graph.on_create and entry not in predecessors:
                raise TraceGenerationError(
                    f"Entry {entry} is not reachable from {graph.on_create}"
                )
            path = [entry]
            while path[-1] != graph.on_create:
                path.append(predecessors[path[-1]])
            callbacks = tuple(method_name(node) for node in reversed(path))
            if len(callbacks) > config.max_trace_len:
                logger.warning(
                    f"Skipping trace {' -> '.join(callbacks)}: longer than {config.max_trace_len}"
                )
                continue
            if callbacks not in seen:
                seen.add(callbacks)
                traces.append(ExecutionTrace(graph.component, callbacks))

    logger.debug(f"{graph.component}: {len(traces)} basic traces")
    return traces


def executable_callbacks(component: Component) -> List[str]:
    """Callbacks the framework may invoke again after onCreate."""
    return [name for name in component.entry_methods() if name != "onCreate"]


def expand_traces(
    executed: ExecutionTrace,
    newly_tainted: Iterable[str],
    component: Component,
    config: AnalysisConfig,
    seen: Optional[Set[Tuple[str, ...]]] = None,
    transmitted_by: Optional[Mapping[str, AbstractSet[str]]] = None,
) -> List[ExecutionTrace]:
    """Append each callback that reads a newly tainted field to the trace.

    A callback is not appended for a field whose tainted value it already
    handed to a sink itself; any other reader of that field still is.

    Args:
        executed: Trace that has finished executing
        newly_tainted: Locations ``Component.field`` tainted by that trace
        component: Component the trace runs in
        config: Supplies the trace length limit
        seen: Callback tuples already scheduled; updated in place
        transmitted_by: Location to the callbacks that sent its tainted value

    Returns:
        List[ExecutionTrace]: New traces in callback declaration order
    """
    prefix = f"{component.name}."
    tainted = {loc[len(prefix):] for loc in newly_tainted if loc.startswith(prefix)}
    if not tainted:
        return []
    seen = seen if seen is not None else set()
    transmitted_by = transmitted_by or {}

    expanded = []
    for callback in executable_callbacks(component):
        reasons = {
            name for name in tainted if callback not in transmitted_by.get(prefix + name, ())
        }
        if not fields_read(component, callback) & reasons:
            continue
        callbacks = executed.callbacks + (callback,)
        if callbacks in seen:
            continue
        if len(callbacks) > config.max_trace_len:
            logger.warning(
                f"Not expanding {executed} with {callback}: longer than {config.max_trace_len}"
            )
            continue
        seen.add(callbacks)
        expanded.append(executed.extend(callback))
    return expanded
