"""Brute-force executor that replaces unknowns by enumerated concrete values.

Used to cross-check the concolic executor on small programs: every fresh
environment value becomes a choice point, and all choice vectors over
small per-type domains are run depth-first, odometer style.
"""

import itertools
import logging
from typing import Any, Dict, FrozenSet, List, Optional, Sequence

from ..appmodel.catalog import ApiCatalog
from ..appmodel.nodes import (
    Literal,
    Program,
    statement_expressions,
    walk_expr,
    walk_statements,
)
from ..config.config_manager import AnalysisConfig
from .concolic import ConcolicExecutor, ExplorationStats, TraceResult, merge_senders
from .traces import ExecutionTrace
from .values import Concrete, Taint, Value, ValueType

logger = logging.getLogger(__name__)

DEFAULT_MAX_SYMBOLS = 3


class OracleScopeExceeded(RuntimeError):
    """The program needs more unknown values than the oracle enumerates."""


def _program_literals(program: Program) -> List[Any]:
    literals = []
    for component in program.components:
        for decl in component.fields:
            if decl.initializer is not None:
                literals.append(decl.initializer.value)
        for body in component.all_methods().values():
            for statement in walk_statements(body.statements):
                for expr in statement_expressions(statement):
                    for node in walk_expr(expr):
                        if isinstance(node, Literal):
                            literals.append(node.value)
    return literals


def value_domains(program: Program) -> Dict[ValueType, List[Any]]:
    """Small per-type domains built from the constants a program mentions.

    Ints cover every constant, pairwise sums and differences, each +-1, and 0.
    Strings cover null, the empty string, one fresh string and every
    string constant. Booleans cover both values.
    """
    literals = _program_literals(program)
    ints = sorted({v for v in literals if isinstance(v, int) and not isinstance(v, bool)})
    base = set(ints)
    for a, b in itertools.product(ints, repeat=2):
        base.update((a - b, a + b))
    int_domain = sorted({0} | {v + d for v in base for d in (-1, 0, 1)})

    strings: List[Optional[str]] = [None, "", "fresh"]
    for value in literals:
        items = value if isinstance(value, tuple) else (value,)
        for item in items:
            if isinstance(item, str) and item not in strings:
                strings.append(item)

    return {
        ValueType.INT: int_domain,
        ValueType.STRING: strings,
        ValueType.BOOL: [False, True],
    }


class ConcreteEnumerationExecutor(ConcolicExecutor):
    """Runs one concrete path per assignment of the environment's unknowns."""

    def __init__(
        self,
        catalog: ApiCatalog,
        config: Optional[AnalysisConfig] = None,
        max_symbols: int = DEFAULT_MAX_SYMBOLS,
        domains: Optional[Dict[ValueType, List[Any]]] = None,
    ):
        super().__init__(catalog, config)
        self.max_symbols = max_symbols
        self.domains = domains
        self._active_domains: Dict[ValueType, List[Any]] = {}
        self._vector: List[int] = []
        self._sizes: List[int] = []

    def execute_trace(self, program: Program, trace: ExecutionTrace) -> TraceResult:
        """Enumerate every choice vector and merge the concrete runs.

        Raises:
            OracleScopeExceeded: More than ``max_symbols`` unknowns on some run
        """
        domains = self.domains or value_domains(program)
        events = []
        newly_tainted = set()
        transmitted_by: Dict[str, FrozenSet[str]] = {}
        stats = ExplorationStats()
        vector: Optional[List[int]] = []

        while vector is not None:
            result = self.run_vector(program, trace, vector, domains)
            events.extend(result.events)
            merge_senders(transmitted_by, result.newly_tainted, result.transmitted_by)
            newly_tainted |= result.newly_tainted
            stats.paths_explored += result.stats.paths_explored
            stats.aborted_paths += result.stats.aborted_paths
            stats.path_errors.extend(result.stats.path_errors)
            stats.explored_constraints.extend(result.stats.explored_constraints)
            vector = self._next_vector(self._vector, self._sizes)

        logger.debug(f"Oracle ran {stats.paths_explored} concrete paths for [{trace}]")
        return TraceResult(
            trace, events, frozenset(newly_tainted), stats, transmitted_by=transmitted_by
        )

    def run_vector(
        self,
        program: Program,
        trace: ExecutionTrace,
        vector: Sequence[int],
        domains: Optional[Dict[ValueType, List[Any]]] = None,
    ) -> TraceResult:
        """Run ``trace`` once, feeding the i-th unknown the domain value ``vector[i]``.

        Choices beyond the vector take the first domain value.
        """
        self._active_domains = domains or self.domains or value_domains(program)
        self._vector = list(vector)
        self._sizes = []
        return super().execute_trace(program, trace)

    @staticmethod
    def _next_vector(used: List[int], sizes: List[int]) -> Optional[List[int]]:
        for position in range(len(sizes) - 1, -1, -1):
            if used[position] + 1 < sizes[position]:
                return used[:position] + [used[position] + 1]
        return None

    def _fresh_value(self, value_type: ValueType, origin: str, api: str, taint: Taint) -> Value:
        position = len(self._sizes)
        if position >= self.max_symbols:
            raise OracleScopeExceeded(
                f"more than {self.max_symbols} unknown values (at {api})"
            )
        domain = self._active_domains[value_type]
        if position == len(self._vector):
            self._vector.append(0)
        self._sizes.append(len(domain))
        return Concrete(value_type, domain[self._vector[position]], frozenset(taint))
