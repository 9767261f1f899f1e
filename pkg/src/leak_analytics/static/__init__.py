"""Static analysis: dummy-main call graphs, sources and entry points."""

from .call_graph import DUMMY_MAIN, CallGraph, build_call_graph, method_name, node_id
from .sources import (
    EntryPointResult,
    SourceSite,
    component_sources,
    entry_points_for_source,
    locate_sources,
)

__all__ = [
    "DUMMY_MAIN",
    "CallGraph",
    "build_call_graph",
    "method_name",
    "node_id",
    "EntryPointResult",
    "SourceSite",
    "component_sources",
    "entry_points_for_source",
    "locate_sources",
]
