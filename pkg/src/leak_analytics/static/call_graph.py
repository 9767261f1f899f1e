"""Per-component dummy-main call graphs."""

import logging
from dataclasses import dataclass
from typing import Iterable, List, Tuple

import networkx as nx

from ..appmodel.catalog import ApiCatalog
from ..appmodel.nodes import LIFECYCLE_CHAIN, Component, LocalCall, walk_statements
from ..errors import CallGraphError

logger = logging.getLogger(__name__)

DUMMY_MAIN = "dummyMain"


def node_id(component: str, method: str) -> str:
    return f"{component}::{method}"


def method_name(node: str) -> str:
    return node.split("::", 1)[1]


@dataclass(frozen=True)
class CallGraph:
    """Directed graph rooted at the component's dummy main."""

    component: str
    graph: nx.DiGraph
    entry_nodes: Tuple[str, ...]

    @property
    def dummy_main(self) -> str:
        return node_id(self.component, DUMMY_MAIN)

    @property
    def on_create(self) -> str:
        return node_id(self.component, "onCreate")

    @property
    def nodes(self) -> List[str]:
        return list(self.graph.nodes)

    @property
    def edges(self) -> List[Tuple[str, str]]:
        return list(self.graph.edges)

    def successors(self, node: str) -> List[str]:
        return list(self.graph.successors(node))

    def contains(self, node: str) -> bool:
        return self.graph.has_node(node)

    def to_dot(self) -> str:
        """Render the graph in DOT format with ``component::method`` labels."""
        lines = [f'digraph "{self.component}" {{']
        for node in self.graph.nodes:
            shape = "box" if node in self.entry_nodes else "ellipse"
            lines.append(f'  "{node}" [label="{node}", shape={shape}];')
        for caller, callee in self.graph.edges:
            lines.append(f'  "{caller}" -> "{callee}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _local_calls(statements) -> Iterable[str]:
    for statement in walk_statements(statements):
        if isinstance(statement, LocalCall):
            yield statement.method


def build_call_graph(component: Component, catalog: ApiCatalog) -> CallGraph:
    """Build the dummy-main call graph of one component.

    Lifecycle callbacks are chained in framework order after onCreate;
    listeners and the remaining callbacks are registered by onCreate.

    Args:
        component: Validated component
        catalog: API catalog (API calls are leaves and add no nodes)

    Returns:
        CallGraph: Graph whose nodes all belong to this component

    Raises:
        CallGraphError: A ``call`` names an undeclared local method
    """
    name = component.name
    graph = nx.DiGraph(component=name, catalog=catalog.name)
    dummy = node_id(name, DUMMY_MAIN)
    graph.add_node(dummy, kind="dummy")

    if "onCreate" not in component.lifecycle_callbacks:
        raise CallGraphError(f"Component '{name}' has no onCreate callback")

    chain = [cb for cb in LIFECYCLE_CHAIN if cb in component.lifecycle_callbacks]
    registered = [cb for cb in component.lifecycle_callbacks if cb not in LIFECYCLE_CHAIN]
    registered.extend(component.listeners)

    for callback in chain:
        graph.add_node(node_id(name, callback), kind="lifecycle")
    for callback in registered:
        kind = "listener" if callback in component.listeners else "lifecycle"
        graph.add_node(node_id(name, callback), kind=kind)
    for method in component.local_methods:
        graph.add_node(node_id(name, method), kind="local")

    graph.add_edge(dummy, node_id(name, "onCreate"), kind="lifecycle")
    for caller, callee in zip(chain, chain[1:]):
        graph.add_edge(node_id(name, caller), node_id(name, callee), kind="lifecycle")
    for callback in registered:
        graph.add_edge(node_id(name, "onCreate"), node_id(name, callback), kind="registration")

    for method, body in component.all_methods().items():
        for callee in _local_calls(body.statements):
            if callee not in component.local_methods:
                raise CallGraphError(
                    f"'call {callee}' in {name}::{method} references an undeclared local method"
                )
            graph.add_edge(node_id(name, method), node_id(name, callee), kind="call")

    entry_nodes = tuple(node_id(name, cb) for cb in chain + registered)
    logger.debug(
        f"Call graph for {name}: {graph.number_of_nodes()} nodes, "
        f"{graph.number_of_edges()} edges"
    )
    return CallGraph(component=name, graph=graph, entry_nodes=entry_nodes)
