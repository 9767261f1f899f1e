"""Source localization and entry-point extraction."""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import networkx as nx

from ..appmodel.catalog import ApiCatalog
from ..appmodel.nodes import ApiCall, Component, Position, Program, walk_statements
from ..errors import CallGraphError
from .call_graph import CallGraph, node_id

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SourceSite:
    component: str
    method: str
    statement_index: int
    api_name: str
    data_type: str
    position: Optional[Position] = None

    @property
    def method_name(self) -> str:
        return self.method.split("::", 1)[1]


@dataclass(frozen=True)
class EntryPointResult:
    source: SourceSite
    entry_points: Tuple[str, ...]


def component_sources(component: Component, catalog: ApiCatalog) -> List[SourceSite]:
    """Source invocations of one component in declaration and statement order."""
    sites = []
    for method, body in component.all_methods().items():
        for index, statement in enumerate(walk_statements(body.statements)):
            if isinstance(statement, ApiCall) and catalog.is_source(statement.api):
                sites.append(
                    SourceSite(
                        component=component.name,
                        method=node_id(component.name, method),
                        statement_index=index,
                        api_name=statement.api,
                        data_type=catalog.spec(statement.api).data_type,
                        position=statement.position,
                    )
                )
    return sites


def locate_sources(program: Program, catalog: ApiCatalog) -> List[SourceSite]:
    """Every source invocation in the program, component order then statement order."""
    sites = []
    for component in program.components:
        sites.extend(component_sources(component, catalog))
    logger.debug(f"Located {len(sites)} sources in app '{program.name}'")
    return sites


def entry_points_for_source(graph: CallGraph, source: SourceSite) -> EntryPointResult:
    """Entry callbacks from which the source's method is reachable.

    Runs a breadth-first search from the source method over reversed
    ``call`` edges. Lifecycle and registration edges model framework
    dispatch, not invocation, so they are not followed.

    Raises:
        CallGraphError: Source method not in the graph
    """
    if source.component != graph.component or not graph.contains(source.method):
        raise CallGraphError(
            f"Source method {source.method} is not in the call graph of {graph.component}"
        )
    full = graph.graph
    calls = nx.subgraph_view(full, filter_edge=lambda u, v: full.edges[u, v].get("kind") == "call")
    reachable = nx.bfs_tree(calls.reverse(copy=False), source.method)
    entry_set = set(graph.entry_nodes)
    entries = tuple(node for node in reachable if node in entry_set)
    return EntryPointResult(source=source, entry_points=entries)
