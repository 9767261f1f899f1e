"""Path constraints and their feasibility checker.

The theory is small on purpose: integer bounds and symbol differences,
string/null (dis)equality against constants, and boolean symbols.
Integer conjunctions are decided with a difference-bound graph.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

import networkx as nx

logger = logging.getLogger(__name__)

MAX_DISEQUALITY_SPLITS = 10

_NEGATED = {"==": "!=", "!=": "==", "<": ">=", ">=": "<", ">": "<=", "<=": ">"}
_FLIPPED = {"==": "==", "!=": "!=", "<": ">", ">": "<", "<=": ">=", ">=": "<="}

ZERO = "zero"


def negate_operator(op: str) -> str:
    return _NEGATED[op]


def flip_operator(op: str) -> str:
    """Operator with the operands swapped: ``a < b`` iff ``b > a``."""
    return _FLIPPED[op]


def compare_ints(left: int, op: str, right: int) -> bool:
    return {
        "==": left == right,
        "!=": left != right,
        "<": left < right,
        ">": left > right,
        "<=": left <= right,
        ">=": left >= right,
    }[op]


def symbol_name(symbol_id: int) -> str:
    return f"${symbol_id}"


@dataclass(frozen=True)
class IntCmp:
    """``symbol op bound`` or, with ``other``, ``symbol op other + bound``."""

    symbol: int
    op: str
    bound: int
    other: Optional[int] = None

    def negate(self) -> "IntCmp":
        return IntCmp(self.symbol, negate_operator(self.op), self.bound, self.other)

    def symbols(self) -> Tuple[int, ...]:
        return (self.symbol,) if self.other is None else (self.symbol, self.other)

    def evaluate(self, assignment: Mapping[int, Any]) -> bool:
        right = self.bound if self.other is None else assignment[self.other] + self.bound
        return compare_ints(assignment[self.symbol], self.op, right)

    def describe(self) -> str:
        if self.other is None:
            return f"{symbol_name(self.symbol)} {self.op} {self.bound}"
        right = symbol_name(self.other)
        if self.bound:
            right += f" {'+' if self.bound > 0 else '-'} {abs(self.bound)}"
        return f"{symbol_name(self.symbol)} {self.op} {right}"


@dataclass(frozen=True)
class StrEq:
    symbol: int
    constant: str

    def negate(self) -> "StrNeq":
        return StrNeq(self.symbol, self.constant)

    def symbols(self) -> Tuple[int, ...]:
        return (self.symbol,)

    def evaluate(self, assignment: Mapping[int, Any]) -> bool:
        return assignment[self.symbol] == self.constant

    def describe(self) -> str:
        return f'{symbol_name(self.symbol)} == "{self.constant}"'


@dataclass(frozen=True)
class StrNeq:
    symbol: int
    constant: str

    def negate(self) -> StrEq:
        return StrEq(self.symbol, self.constant)

    def symbols(self) -> Tuple[int, ...]:
        return (self.symbol,)

    def evaluate(self, assignment: Mapping[int, Any]) -> bool:
        return assignment[self.symbol] != self.constant

    def describe(self) -> str:
        return f'{symbol_name(self.symbol)} != "{self.constant}"'


@dataclass(frozen=True)
class IsNull:
    symbol: int

    def negate(self) -> "NotNull":
        return NotNull(self.symbol)

    def symbols(self) -> Tuple[int, ...]:
        return (self.symbol,)

    def evaluate(self, assignment: Mapping[int, Any]) -> bool:
        return assignment[self.symbol] is None

    def describe(self) -> str:
        return f"{symbol_name(self.symbol)} == null"


@dataclass(frozen=True)
class NotNull:
    symbol: int

    def negate(self) -> IsNull:
        return IsNull(self.symbol)

    def symbols(self) -> Tuple[int, ...]:
        return (self.symbol,)

    def evaluate(self, assignment: Mapping[int, Any]) -> bool:
        return assignment[self.symbol] is not None

    def describe(self) -> str:
        return f"{symbol_name(self.symbol)} != null"


@dataclass(frozen=True)
class BoolIs:
    symbol: int
    value: bool

    def negate(self) -> "BoolIs":
        return BoolIs(self.symbol, not self.value)

    def symbols(self) -> Tuple[int, ...]:
        return (self.symbol,)

    def evaluate(self, assignment: Mapping[int, Any]) -> bool:
        return bool(assignment[self.symbol]) == self.value

    def describe(self) -> str:
        return symbol_name(self.symbol) if self.value else f"!{symbol_name(self.symbol)}"


Atom = Union[IntCmp, StrEq, StrNeq, IsNull, NotNull, BoolIs]


@dataclass(frozen=True)
class PathConstraint:
    """Quantifier-free conjunction of atoms; the empty conjunction is ``true``."""

    conjuncts: Tuple[Atom, ...] = ()

    def conjoin(self, atom: Atom) -> "PathConstraint":
        return PathConstraint(self.conjuncts + (atom,))

    def symbols(self) -> Tuple[int, ...]:
        seen: Dict[int, None] = {}
        for atom in self.conjuncts:
            for symbol in atom.symbols():
                seen.setdefault(symbol)
        return tuple(seen)

    def evaluate(self, assignment: Mapping[int, Any]) -> bool:
        return all(atom.evaluate(assignment) for atom in self.conjuncts)

    def describe(self) -> str:
        if not self.conjuncts:
            return "true"
        return " && ".join(atom.describe() for atom in self.conjuncts)

    def __len__(self) -> int:
        return len(self.conjuncts)


def atom_symbol_type(atom: Atom) -> str:
    """Value type an atom constrains its symbols to: int, string or bool."""
    if isinstance(atom, IntCmp):
        return "int"
    if isinstance(atom, BoolIs):
        return "bool"
    return "string"


def _bools_feasible(atoms: List[BoolIs]) -> bool:
    required: Dict[int, bool] = {}
    for atom in atoms:
        if required.setdefault(atom.symbol, atom.value) != atom.value:
            return False
    return True


def _strings_feasible(atoms: List[Atom]) -> bool:
    by_symbol: Dict[int, List[Atom]] = {}
    for atom in atoms:
        by_symbol.setdefault(atom.symbol, []).append(atom)

    for group in by_symbol.values():
        must_null = any(isinstance(a, IsNull) for a in group)
        not_null = any(isinstance(a, NotNull) for a in group)
        equal = {a.constant for a in group if isinstance(a, StrEq)}
        unequal = {a.constant for a in group if isinstance(a, StrNeq)}
        if must_null and (not_null or equal):
            return False
        if len(equal) > 1 or equal & unequal:
            return False
    return True


def _difference_edges(atom: IntCmp, op: str) -> List[Tuple[Any, Any, int]]:
    # Edge (v, u, c) encodes u - v <= c
    lhs = atom.symbol
    rhs = ZERO if atom.other is None else atom.other
    bound = atom.bound
    if op == "<=":
        return [(rhs, lhs, bound)]
    if op == "<":
        return [(rhs, lhs, bound - 1)]
    if op == ">=":
        return [(lhs, rhs, -bound)]
    if op == ">":
        return [(lhs, rhs, -bound - 1)]
    return [(rhs, lhs, bound), (lhs, rhs, -bound)]


def _ints_feasible_without_disequalities(edges: List[Tuple[Any, Any, int]]) -> bool:
    graph = nx.DiGraph()
    graph.add_node(ZERO)
    for source, target, weight in edges:
        if graph.has_edge(source, target):
            weight = min(weight, graph[source][target]["weight"])
        graph.add_edge(source, target, weight=weight)
    return not nx.negative_edge_cycle(graph, weight="weight")


def _ints_feasible(atoms: List[IntCmp]) -> bool:
    edges: List[Tuple[Any, Any, int]] = []
    disequalities: List[IntCmp] = []
    for atom in atoms:
        if atom.other == atom.symbol:
            if not compare_ints(0, atom.op, atom.bound):
                return False
            continue
        if atom.op == "!=":
            disequalities.append(atom)
        else:
            edges.extend(_difference_edges(atom, atom.op))

    if not disequalities:
        return _ints_feasible_without_disequalities(edges)
    if len(disequalities) > MAX_DISEQUALITY_SPLITS:
        logger.warning(
            f"{len(disequalities)} integer disequalities exceed the split cap "
            f"of {MAX_DISEQUALITY_SPLITS}; treating the constraint as feasible"
        )
        return True

    for choice in itertools.product(("<", ">"), repeat=len(disequalities)):
        split = list(edges)
        for atom, op in zip(disequalities, choice):
            split.extend(_difference_edges(atom, op))
        if _ints_feasible_without_disequalities(split):
            return True
    return False


def check_feasibility(pc: PathConstraint) -> bool:
    """Decide whether the conjunction has a satisfying assignment.

    Args:
        pc: Path constraint to check

    Returns:
        bool: True if feasible, False if no assignment satisfies every conjunct
    """
    ints = [a for a in pc.conjuncts if isinstance(a, IntCmp)]
    bools = [a for a in pc.conjuncts if isinstance(a, BoolIs)]
    strings = [a for a in pc.conjuncts if isinstance(a, (StrEq, StrNeq, IsNull, NotNull))]
    return _bools_feasible(bools) and _strings_feasible(strings) and _ints_feasible(ints)
