"""Machine state of the concolic interpreter and its snapshots."""

import hashlib
from dataclasses import dataclass, field, fields, is_dataclass
from enum import Enum
from typing import Any, Dict, FrozenSet, List, Optional, Tuple

from .compiler import Code
from .constraints import Atom, PathConstraint
from .values import Taint, Value, ValueType, full_taint


@dataclass(frozen=True)
class SymbolInfo:
    symbol_id: int
    type: ValueType
    origin: str
    api: Optional[str] = None


@dataclass
class SymbolicState:
    """σ: locations bound to unknown values, plus the symbol registry."""

    bindings: Dict[str, Value] = field(default_factory=dict)
    symbols: Dict[int, SymbolInfo] = field(default_factory=dict)
    next_id: int = 1

    def new_symbol(self, value_type: ValueType, origin: str, api: Optional[str] = None) -> int:
        symbol_id = self.next_id
        self.next_id += 1
        self.symbols[symbol_id] = SymbolInfo(symbol_id, value_type, origin, api)
        return symbol_id

    def bind(self, location: str, value: Optional[Value]):
        if value is None:
            self.bindings.pop(location, None)
        else:
            self.bindings[location] = value

    def copy(self) -> "SymbolicState":
        return SymbolicState(dict(self.bindings), dict(self.symbols), self.next_id)


@dataclass(frozen=True)
class LoopRecord:
    """A loop whose condition was unknown; its body runs once."""

    head: int
    exit: int
    writes: Tuple[str, ...]
    pre_taint: Tuple[Tuple[str, Taint], ...] = ()


@dataclass
class Frame:
    method: str
    code: Code
    pc: int = 0
    locals: Dict[str, Value] = field(default_factory=dict)
    loops: Tuple[LoopRecord, ...] = ()
    loop_counts: Dict[int, int] = field(default_factory=dict)

    def copy(self) -> "Frame":
        return Frame(
            self.method, self.code, self.pc, dict(self.locals), self.loops, dict(self.loop_counts)
        )


@dataclass
class MachineState:
    component: str
    callback_index: int = -1
    frames: List[Frame] = field(default_factory=list)
    heap: Dict[str, Value] = field(default_factory=dict)
    sigma: SymbolicState = field(default_factory=SymbolicState)
    path_constraint: PathConstraint = field(default_factory=PathConstraint)
    baseline_tainted: FrozenSet[str] = frozenset()
    # field -> (value handed to a sink, callback that sent it)
    transmitted: Dict[str, Tuple[Value, str]] = field(default_factory=dict)
    unknown_depth: int = 0

    def copy(self) -> "MachineState":
        return MachineState(
            component=self.component,
            callback_index=self.callback_index,
            frames=[frame.copy() for frame in self.frames],
            heap=dict(self.heap),
            sigma=self.sigma.copy(),
            path_constraint=self.path_constraint,
            baseline_tainted=self.baseline_tainted,
            transmitted=dict(self.transmitted),
            unknown_depth=self.unknown_depth,
        )

    def field_location(self, name: str) -> str:
        return f"{self.component}.{name}"

    def local_location(self, name: str) -> str:
        frame = self.frames[-1]
        return f"{self.component}::{frame.method}@{len(self.frames) - 1}.{name}"

    def taint_map(self) -> Dict[str, Taint]:
        """Tainted locations (fields and live locals) and their labels."""
        taints = {}
        for name, value in self.heap.items():
            taint = full_taint(value)
            if taint:
                taints[self.field_location(name)] = taint
        for depth, frame in enumerate(self.frames):
            for name, value in frame.locals.items():
                taint = full_taint(value)
                if taint:
                    taints[f"{self.component}::{frame.method}@{depth}.{name}"] = taint
        return taints

    def tainted_fields(self) -> FrozenSet[str]:
        return frozenset(name for name, value in self.heap.items() if full_taint(value))

    def state_hash(self) -> str:
        return hashlib.sha256(repr(_canonical(self)).encode("utf-8")).hexdigest()


def _canonical(obj: Any) -> Any:
    if isinstance(obj, Enum):
        return obj.value
    if is_dataclass(obj) and not isinstance(obj, type):
        # Compiled code is shared and immutable; its identity is the method name
        return (type(obj).__name__,) + tuple(
            _canonical(getattr(obj, f.name)) for f in fields(obj) if f.name != "code"
        )
    if isinstance(obj, dict):
        return tuple(sorted((repr(_canonical(k)), _canonical(v)) for k, v in obj.items()))
    if isinstance(obj, (set, frozenset)):
        return tuple(sorted(repr(_canonical(item)) for item in obj))
    if isinstance(obj, (list, tuple)):
        return tuple(_canonical(item) for item in obj)
    return obj


@dataclass
class Snapshot:
    """Saved executor state at an unknown branch, awaiting its sibling direction."""

    state: MachineState
    pending: Atom
    resume_pc: int
    state_hash: str

    @classmethod
    def capture(cls, state: MachineState, pending: Atom, resume_pc: int) -> "Snapshot":
        saved = state.copy()
        return cls(saved, pending, resume_pc, saved.state_hash())

    @property
    def program_counter(self) -> Tuple[Tuple[str, int], ...]:
        return tuple((frame.method, frame.pc) for frame in self.state.frames)

    @property
    def operand_state(self) -> List[Dict[str, Value]]:
        return [dict(frame.locals) for frame in self.state.frames]

    @property
    def heap_state(self) -> Dict[str, Value]:
        return dict(self.state.heap)

    @property
    def sigma(self) -> SymbolicState:
        return self.state.sigma

    @property
    def path_constraint(self) -> PathConstraint:
        return self.state.path_constraint

    @property
    def taint_map(self) -> Dict[str, Taint]:
        return self.state.taint_map()

    def restore(self) -> MachineState:
        return self.state.copy()
