"""Concolic execution: values, constraints, traces, executors and the analysis driver."""

from .concolic import ConcolicExecutor, ExplorationStats, SinkEvent, TraceResult
from .constraints import (
    BoolIs,
    IntCmp,
    IsNull,
    NotNull,
    PathConstraint,
    StrEq,
    StrNeq,
    check_feasibility,
)
from .environment import eval_env_call
from .oracle import ConcreteEnumerationExecutor, OracleScopeExceeded, value_domains
from .pipeline import AnalysisResult, analyze_app
from .state import MachineState, Snapshot, SymbolicState
from .traces import ExecutionTrace, expand_traces, generate_basic_traces
from .values import (
    Concat,
    Concrete,
    Symbolic,
    ValueType,
    concat,
    propagate_taint,
    render,
    render_template,
)

__all__ = [
    "ConcolicExecutor",
    "ExplorationStats",
    "SinkEvent",
    "TraceResult",
    "BoolIs",
    "IntCmp",
    "IsNull",
    "NotNull",
    "PathConstraint",
    "StrEq",
    "StrNeq",
    "check_feasibility",
    "eval_env_call",
    "ConcreteEnumerationExecutor",
    "OracleScopeExceeded",
    "value_domains",
    "AnalysisResult",
    "analyze_app",
    "MachineState",
    "Snapshot",
    "SymbolicState",
    "ExecutionTrace",
    "expand_traces",
    "generate_basic_traces",
    "Concat",
    "Concrete",
    "Symbolic",
    "ValueType",
    "concat",
    "propagate_taint",
    "render",
    "render_template",
]
