"""Concolic interpreter with taint tracking and depth-first branch exploration.

Known values are computed concretely. Environment APIs may yield unknown
(symbolic) values; a branch on an unknown condition forks the run. The
then-direction runs first while a snapshot of the machine state waits on
the stack for the else-direction. Directions whose path constraint is
infeasible are pruned. Loops with an unknown condition run once, after
which every location the body may write is rebound to a fresh symbol.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

from ..appmodel.catalog import ApiCatalog
from ..appmodel.nodes import (
    BinOp,
    BoolTest,
    Component,
    CondAtom,
    Expr,
    FieldType,
    Index,
    Literal,
    LValue,
    Name,
    Position,
    Program,
)
from ..config.config_manager import AnalysisConfig
from ..errors import AmlRuntimeError, DecryptMissError
from ..static.sources import component_sources
from .compiler import (
    AssignOp,
    BranchOp,
    CallOp,
    Code,
    InvokeOp,
    JumpOp,
    LoopOp,
    ReturnOp,
    compile_component,
)
from .constraints import (
    Atom,
    BoolIs,
    IntCmp,
    IsNull,
    NotNull,
    PathConstraint,
    StrEq,
    StrNeq,
    check_feasibility,
    compare_ints,
    flip_operator,
)
from .environment import eval_env_call
from .state import Frame, LoopRecord, MachineState, Snapshot
from .traces import ExecutionTrace
from .values import (
    Concat,
    Concrete,
    Symbolic,
    Taint,
    Value,
    ValueType,
    concat,
    concrete_string,
    default_value,
    from_literal,
    full_taint,
    integer,
    propagate_taint,
    render,
    render_template,
    string,
    string_array,
    with_taint,
)

logger = logging.getLogger(__name__)

SINK_RETURN = "HttpURLConnection"
LOOP_SUMMARY = "loopSummary"

BranchResult = Union[bool, Atom]


@dataclass(frozen=True)
class SinkEvent:
    """One sink invocation reached on an explored path."""

    trace: ExecutionTrace
    component: str
    sink_api: str
    args: Tuple[Value, ...]
    carried_taint: FrozenSet[str]
    path_constraint: PathConstraint
    url: str
    url_template: str
    hostname_decrypted: bool = False
    position: Optional[Position] = None

    @property
    def sensitive(self) -> bool:
        return bool(self.carried_taint)

    def key(self) -> Tuple:
        return (
            self.component,
            self.sink_api,
            self.url,
            self.url_template,
            tuple(sorted(self.carried_taint)),
        )


@dataclass
class ExplorationStats:
    paths_explored: int = 0
    paths_pruned: int = 0
    forks: int = 0
    loops_symbolized: int = 0
    snapshot_checks: int = 0
    snapshot_mismatches: int = 0
    aborted_paths: int = 0
    depth_limited: int = 0
    budget_exceeded: bool = False
    pruned_constraints: List[PathConstraint] = field(default_factory=list)
    explored_constraints: List[PathConstraint] = field(default_factory=list)
    path_errors: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            "pathsExplored": self.paths_explored,
            "pathsPruned": self.paths_pruned,
            "forks": self.forks,
            "loopsSymbolized": self.loops_symbolized,
            "snapshotChecks": self.snapshot_checks,
            "snapshotMismatches": self.snapshot_mismatches,
            "abortedPaths": self.aborted_paths,
            "depthLimited": self.depth_limited,
            "budgetExceeded": self.budget_exceeded,
            "pathErrors": list(self.path_errors),
        }


@dataclass
class TraceResult:
    trace: ExecutionTrace
    events: List[SinkEvent]
    newly_tainted: FrozenSet[str]
    stats: ExplorationStats
    sink_reached: bool = False
    # location -> callbacks that sent its tainted value on every path tainting it
    transmitted_by: Dict[str, FrozenSet[str]] = field(default_factory=dict)


def merge_senders(
    merged: Dict[str, FrozenSet[str]],
    locations: FrozenSet[str],
    senders: Dict[str, FrozenSet[str]],
):
    """Fold one path's senders into ``merged``, keeping callbacks common to all paths."""
    for location in locations:
        path_senders = senders.get(location, frozenset())
        if location in merged:
            merged[location] = merged[location] & path_senders
        else:
            merged[location] = path_senders


class _PathEnd(Exception):
    """Raised inside a path to abandon it without recording its end state."""


class ConcolicExecutor:
    """Interprets execution traces of a program under concolic semantics.

    An instance is single-threaded; it may be reused for many traces.
    """

    def __init__(self, catalog: ApiCatalog, config: Optional[AnalysisConfig] = None):
        self.catalog = catalog
        self.config = config or AnalysisConfig()
        self._compiled: Dict[Tuple[int, str], Dict[str, Code]] = {}
        self._state: Optional[MachineState] = None
        self._component: Optional[Component] = None

    # Public API

    def execute_trace(self, program: Program, trace: ExecutionTrace) -> TraceResult:
        """Run every feasible path of ``trace``.

        Args:
            program: Validated program
            trace: Trace over one of the program's components

        Returns:
            TraceResult: Sink events over all explored paths, the newly tainted
            field locations, and exploration statistics

        Raises:
            DecryptMissError: Table miss under strict decryption
            AmlRuntimeError: Trace names a method the component lacks
        """
        component = program.component(trace.component)
        for callback in trace.callbacks:
            if callback not in component.entry_methods():
                raise AmlRuntimeError(f"{component.name} has no callback '{callback}'")
        code = self._code_for(component)
        self._component = component

        stats = ExplorationStats()
        events: List[SinkEvent] = []
        newly_tainted: set = set()
        transmitted_by: Dict[str, FrozenSet[str]] = {}
        stack: List[Snapshot] = []
        sink_reached = False
        static_types = self._static_types(component) if self.config.mode == "sink-reach" else None

        state = self._initial_state(component)
        while True:
            self._state = state
            try:
                completed = self._run_path(component, code, trace, stack, stats, events, static_types)
            except DecryptMissError:
                raise
            except AmlRuntimeError as e:
                completed = False
                stats.aborted_paths += 1
                stats.path_errors.append(f"{trace}: {e}")
                logger.warning(f"Path aborted in {trace.component} [{trace}]: {e}")
            except _PathEnd:
                completed = False

            if completed:
                stats.paths_explored += 1
                stats.explored_constraints.append(self._state.path_constraint)
                fresh, senders = self._newly_tainted(self._state)
                merge_senders(transmitted_by, fresh, senders)
                newly_tainted |= fresh

            if static_types is not None and events:
                sink_reached = True
                break
            if not stack:
                break
            if stats.paths_explored >= self.config.max_paths_per_trace:
                stats.budget_exceeded = True
                logger.warning(
                    f"Path budget of {self.config.max_paths_per_trace} exhausted on "
                    f"{trace.component} [{trace}]; {len(stack)} directions left unexplored"
                )
                break
            state = self._resume(stack.pop(), stats)

        self._state = None
        self._component = None
        logger.debug(
            f"{trace.component} [{trace}]: {stats.paths_explored} paths, "
            f"{stats.paths_pruned} pruned, {len(events)} sink events"
        )
        return TraceResult(
            trace, events, frozenset(newly_tainted), stats, sink_reached, transmitted_by
        )

    # Extension point

    def _fresh_value(self, value_type: ValueType, origin: str, api: str, taint: Taint) -> Value:
        """Unknown value returned by the environment."""
        return self._new_symbol(value_type, origin, api, taint)

    # Setup

    def _code_for(self, component: Component) -> Dict[str, Code]:
        key = (id(component), component.name)
        if key not in self._compiled:
            self._compiled[key] = compile_component(component)
        return self._compiled[key]

    def _static_types(self, component: Component) -> FrozenSet[str]:
        return frozenset(site.data_type for site in component_sources(component, self.catalog))

    def _initial_state(self, component: Component) -> MachineState:
        state = MachineState(component=component.name)
        for decl in component.fields:
            if decl.initializer is None:
                state.heap[decl.name] = default_value(decl.type)
            else:
                state.heap[decl.name] = from_literal(decl.initializer.value, decl.type)
        return state

    def _resume(self, snapshot: Snapshot, stats: ExplorationStats) -> MachineState:
        state = snapshot.restore()
        stats.snapshot_checks += 1
        if state.state_hash() != snapshot.state_hash:
            stats.snapshot_mismatches += 1
            logger.error("Restored snapshot differs from the saved state")
        state.path_constraint = state.path_constraint.conjoin(snapshot.pending)
        state.frames[-1].pc = snapshot.resume_pc
        return state

    # Path loop

    def _run_path(
        self,
        component: Component,
        code: Dict[str, Code],
        trace: ExecutionTrace,
        stack: List[Snapshot],
        stats: ExplorationStats,
        events: List[SinkEvent],
        static_types: Optional[FrozenSet[str]],
    ) -> bool:
        state = self._state
        last = len(trace.callbacks) - 1
        while True:
            if not state.frames:
                state.callback_index += 1
                if state.callback_index > last:
                    return True
                if state.callback_index == last and trace.is_expanded:
                    state.baseline_tainted = state.tainted_fields()
                callback = trace.callbacks[state.callback_index]
                state.frames.append(Frame(callback, code[callback]))
                continue

            frame = state.frames[-1]
            if frame.pc >= len(frame.code):
                state.frames.pop()
                continue

            op = frame.code[frame.pc]
            if isinstance(op, AssignOp):
                self._store(component, op.target, self._eval(component, op.value))
                frame.pc += 1
            elif isinstance(op, InvokeOp):
                self._invoke(component, trace, op, events, static_types)
                if static_types is not None and events:
                    return True
                frame.pc += 1
            elif isinstance(op, CallOp):
                if len(state.frames) >= self.config.max_call_depth:
                    raise AmlRuntimeError(
                        f"call depth {self.config.max_call_depth} exceeded at '{op.method}'"
                    )
                frame.pc += 1
                state.frames.append(Frame(op.method, code[op.method]))
            elif isinstance(op, ReturnOp):
                state.frames.pop()
            elif isinstance(op, BranchOp):
                self._branch(frame, op, stack, stats)
            elif isinstance(op, LoopOp):
                self._loop_head(component, frame, op, stats)
            elif isinstance(op, JumpOp):
                self._jump(component, frame, op)
            else:
                raise TypeError(f"Unknown instruction {op!r}")

    # Branching

    def _branch(self, frame: Frame, op: BranchOp, stack: List[Snapshot], stats: ExplorationStats):
        state = self._state
        outcome = self._eval_atom(op.atom)
        if isinstance(outcome, bool):
            frame.pc = frame.pc + 1 if outcome else op.on_false
            return

        then_pc = state.path_constraint.conjoin(outcome)
        else_pc = state.path_constraint.conjoin(outcome.negate())
        then_ok = check_feasibility(then_pc)
        else_ok = check_feasibility(else_pc)
        for feasible, pc in ((then_ok, then_pc), (else_ok, else_pc)):
            if not feasible:
                stats.paths_pruned += 1
                stats.pruned_constraints.append(pc)

        if then_ok and else_ok:
            if state.unknown_depth >= self.config.max_unknown_depth:
                stats.depth_limited += 1
                stats.budget_exceeded = True
                logger.warning(
                    f"Unknown-branch depth {self.config.max_unknown_depth} reached; "
                    f"following only the then-direction"
                )
            else:
                stats.forks += 1
                state.unknown_depth += 1
                stack.append(Snapshot.capture(state, outcome.negate(), op.on_false))
            state.path_constraint = then_pc
            frame.pc += 1
        elif then_ok:
            state.path_constraint = then_pc
            frame.pc += 1
        elif else_ok:
            state.path_constraint = else_pc
            frame.pc = op.on_false
        else:
            raise _PathEnd()

    def _loop_head(self, component: Component, frame: Frame, op: LoopOp, stats: ExplorationStats):
        outcome: BranchResult = True
        for atom in op.condition.atoms:
            result = self._eval_atom(atom)
            if result is False:
                outcome = False
                break
            if not isinstance(result, bool):
                outcome = result
                break

        if outcome is False:
            frame.loop_counts.pop(frame.pc, None)
            frame.pc = op.exit
            return

        if outcome is True:
            count = frame.loop_counts.get(frame.pc, 0) + 1
            if count > self.config.max_loop_iterations:
                raise AmlRuntimeError(
                    f"loop in {frame.method} exceeded {self.config.max_loop_iterations} iterations"
                )
            frame.loop_counts[frame.pc] = count
            frame.pc += 1
            return

        stats.loops_symbolized += 1
        pre_taint = tuple(
            (name, full_taint(value))
            for name in op.writes
            for value in [self._lookup(component, name, required=False)]
            if value is not None
        )
        frame.loops = frame.loops + (LoopRecord(frame.pc, op.exit, op.writes, pre_taint),)
        frame.pc += 1

    def _jump(self, component: Component, frame: Frame, op: JumpOp):
        if op.loop_back and frame.loops and frame.loops[-1].head == op.target:
            record = frame.loops[-1]
            frame.loops = frame.loops[:-1]
            self._summarize_loop(component, record)
            frame.pc = record.exit
        else:
            frame.pc = op.target

    def _summarize_loop(self, component: Component, record: LoopRecord):
        before = dict(record.pre_taint)
        for name in record.writes:
            current = self._lookup(component, name, required=False)
            if current is None:
                continue
            taint = before.get(name, frozenset()) | full_taint(current)
            self._assign_name(component, name, self._summary_value(current, taint))

    def _summary_value(self, current: Value, taint: Taint) -> Value:
        if current.type is ValueType.STRING_ARRAY:
            length = len(current.payload) if current.payload is not None else self.config.symbolic_array_len
            return string_array(
                self._new_symbol(ValueType.STRING, LOOP_SUMMARY, None, taint) for _ in range(length)
            )
        return self._new_symbol(current.type, LOOP_SUMMARY, None, taint)

    # Calls

    def _invoke(
        self,
        component: Component,
        trace: ExecutionTrace,
        op: InvokeOp,
        events: List[SinkEvent],
        static_types: Optional[FrozenSet[str]],
    ):
        spec = self.catalog.spec(op.api)
        args = tuple(self._eval(component, arg) for arg in op.args)

        if spec.is_source:
            result: Optional[Value] = string(spec.sample, frozenset({spec.data_type}))
        elif spec.is_sink:
            events.append(self._sink_event(component, trace, op, args, static_types))
            result = string(SINK_RETURN)
        else:
            result = eval_env_call(spec, args, self._fresh_value, self.config)

        if op.target is not None:
            self._store(component, op.target, result)

    def _sink_event(
        self,
        component: Component,
        trace: ExecutionTrace,
        op: InvokeOp,
        args: Tuple[Value, ...],
        static_types: Optional[FrozenSet[str]],
    ) -> SinkEvent:
        state = self._state
        callback = trace.callbacks[state.callback_index]
        for expr, value in zip(op.args, args):
            if isinstance(expr, Name) and expr.ident in component.field_names:
                state.transmitted[expr.ident] = (value, callback)

        carried = propagate_taint("sink", args)
        if static_types is not None:
            carried = carried | static_types
        return SinkEvent(
            trace=trace,
            component=component.name,
            sink_api=op.api,
            args=args,
            carried_taint=carried,
            path_constraint=state.path_constraint,
            url="&".join(render(arg) for arg in args),
            url_template="&".join(render_template(arg) for arg in args),
            hostname_decrypted=any(_decrypted(arg) for arg in args),
            position=op.position,
        )

    # Newly tainted fields

    @staticmethod
    def _newly_tainted(state: MachineState) -> Tuple[FrozenSet[str], Dict[str, FrozenSet[str]]]:
        """Fields tainted during the path's last callback, and who sent them.

        A field whose current value went to a sink on this path maps to the
        callback that sent it; that callback is not a reason to expand.
        """
        fresh = state.tainted_fields() - state.baseline_tainted
        senders = {}
        for name in fresh:
            sent = state.transmitted.get(name)
            if sent is not None and sent[0] is state.heap[name]:
                senders[state.field_location(name)] = frozenset({sent[1]})
        return frozenset(state.field_location(name) for name in fresh), senders

    # Storage

    def _lookup(self, component: Component, name: str, required: bool = True) -> Optional[Value]:
        state = self._state
        if name in component.field_names:
            return state.heap[name]
        frame = state.frames[-1]
        if name in frame.locals:
            return frame.locals[name]
        if required:
            raise AmlRuntimeError(f"'{name}' is read before it is assigned in {frame.method}")
        return None

    def _assign_name(self, component: Component, name: str, value: Value):
        state = self._state
        decl = component.field_decl(name)
        if decl is not None:
            value = _coerce_to_field(decl.type, value, name)
            state.heap[name] = value
            location = state.field_location(name)
        else:
            state.frames[-1].locals[name] = value
            location = state.local_location(name)
        state.sigma.bind(location, value if _holds_symbol(value) else None)

    def _store(self, component: Component, target: LValue, value: Value):
        if isinstance(target, Name):
            self._assign_name(component, target.ident, value)
            return
        array = self._lookup(component, target.base)
        index = self._eval(component, target.index)
        position = self._array_position(array, index, target.base)
        if value.type is not ValueType.STRING:
            raise AmlRuntimeError(f"cannot store a {value.type.value} in string array '{target.base}'")
        items = list(array.payload)
        items[position] = value
        self._assign_name(
            component, target.base, Concrete(ValueType.STRING_ARRAY, tuple(items), array.taint)
        )

    @staticmethod
    def _array_position(array: Value, index: Value, name: str) -> int:
        if not isinstance(array, Concrete) or array.type is not ValueType.STRING_ARRAY:
            raise AmlRuntimeError(f"'{name}' is not a string array")
        if array.payload is None:
            raise AmlRuntimeError(f"null dereference of array '{name}'")
        if not isinstance(index, Concrete) or index.type is not ValueType.INT:
            raise AmlRuntimeError(f"index into '{name}' must be a known int")
        if not 0 <= index.payload < len(array.payload):
            raise AmlRuntimeError(
                f"index {index.payload} out of bounds for '{name}' of length {len(array.payload)}"
            )
        return index.payload

    def _new_symbol(
        self, value_type: ValueType, origin: str, api: Optional[str], taint: Taint
    ) -> Symbolic:
        symbol_id = self._state.sigma.new_symbol(value_type, origin, api)
        return Symbolic(symbol_id, value_type, origin, frozenset(taint))

    # Expressions

    def _eval(self, component: Component, expr: Expr) -> Value:
        if isinstance(expr, Literal):
            return from_literal(expr.value)
        if isinstance(expr, Name):
            return self._lookup(component, expr.ident)
        if isinstance(expr, Index):
            return self._eval_index(component, expr)
        if isinstance(expr, BinOp):
            left = self._eval(component, expr.left)
            right = self._eval(component, expr.right)
            return self._binop(expr.op, left, right)
        raise TypeError(f"Unknown expression node: {expr!r}")

    def _eval_index(self, component: Component, expr: Index) -> Value:
        array = self._lookup(component, expr.base)
        index = self._eval(component, expr.index)
        if isinstance(array, Concrete) and array.payload is not None and isinstance(index, Symbolic):
            taint = propagate_taint("arrayread", (array, index))
            return self._new_symbol(ValueType.STRING, LOOP_SUMMARY, None, taint)
        position = self._array_position(array, index, expr.base)
        return with_taint(array.payload[position], array.taint | index.taint)

    def _binop(self, op: str, left: Value, right: Value) -> Value:
        if op == "+" and ValueType.STRING in (left.type, right.type):
            return concat(left, right)

        if left.type is not ValueType.INT or right.type is not ValueType.INT:
            raise AmlRuntimeError(
                f"operator '{op}' not defined for {left.type.value} and {right.type.value}"
            )
        taint = propagate_taint(op, (left, right))
        decrypted = left.decrypted or right.decrypted
        if isinstance(left, Concrete) and isinstance(right, Concrete):
            return replace(integer(_int_op(op, left.payload, right.payload)), taint=taint, decrypted=decrypted)

        if isinstance(left, Symbolic) and isinstance(right, Concrete) and op in ("+", "-"):
            delta = right.payload if op == "+" else -right.payload
            return replace(left, offset=left.offset + delta, taint=taint, decrypted=decrypted)
        if isinstance(right, Symbolic) and isinstance(left, Concrete) and op == "+":
            return replace(right, offset=right.offset + left.payload, taint=taint, decrypted=decrypted)

        origin = left.origin if isinstance(left, Symbolic) else right.origin
        fresh = self._new_symbol(ValueType.INT, origin, None, taint)
        return replace(fresh, decrypted=decrypted)

    # Conditions

    def _eval_atom(self, atom: CondAtom) -> BranchResult:
        component = self._component
        if isinstance(atom, BoolTest):
            value = self._eval(component, atom.operand)
            if value.type is not ValueType.BOOL:
                raise AmlRuntimeError(f"condition needs a bool, got {value.type.value}")
            if isinstance(value, Concrete):
                return value.payload != atom.negated
            return BoolIs(value.symbol_id, not atom.negated)

        left = self._eval(component, atom.left)
        right = self._eval(component, atom.right)
        return self._compare(left, atom.op, right)

    def _compare(self, left: Value, op: str, right: Value) -> BranchResult:
        types = {left.type, right.type}
        if types == {ValueType.INT}:
            return self._compare_ints(left, op, right)
        if op not in ("==", "!="):
            raise AmlRuntimeError(f"operator '{op}' needs ints, got {left.type.value}")
        equal = op == "=="

        if types == {ValueType.BOOL}:
            if isinstance(left, Concrete) and isinstance(right, Concrete):
                return (left.payload == right.payload) == equal
            if isinstance(left, Symbolic) and isinstance(right, Concrete):
                return BoolIs(left.symbol_id, right.payload == equal)
            if isinstance(right, Symbolic) and isinstance(left, Concrete):
                return BoolIs(right.symbol_id, left.payload == equal)
            if left == right:
                return equal
            return self._opaque_condition(left, right, equal)

        if types <= {ValueType.STRING, ValueType.STRING_ARRAY}:
            return self._compare_strings(left, right, equal)
        raise AmlRuntimeError(f"cannot compare {left.type.value} with {right.type.value}")

    def _compare_ints(self, left: Value, op: str, right: Value) -> BranchResult:
        if isinstance(left, Concrete) and isinstance(right, Concrete):
            return compare_ints(left.payload, op, right.payload)
        if isinstance(left, Symbolic) and isinstance(right, Concrete):
            return IntCmp(left.symbol_id, op, right.payload - left.offset)
        if isinstance(left, Concrete):
            return IntCmp(right.symbol_id, flip_operator(op), left.payload - right.offset)
        if left.symbol_id == right.symbol_id:
            return compare_ints(left.offset, op, right.offset)
        return IntCmp(left.symbol_id, op, right.offset - left.offset, right.symbol_id)

    def _compare_strings(self, left: Value, right: Value, equal: bool) -> BranchResult:
        left_known, left_text = _known(left)
        right_known, right_text = _known(right)
        if left_known and right_known:
            return (left_text == right_text) == equal

        if left_known and isinstance(right, Symbolic):
            left, right = right, left
            right_text = left_text
            right_known = True
        if isinstance(left, Symbolic) and right_known:
            if right_text is None:
                return IsNull(left.symbol_id) if equal else NotNull(left.symbol_id)
            return StrEq(left.symbol_id, right_text) if equal else StrNeq(left.symbol_id, right_text)
        if isinstance(left, Symbolic) and isinstance(right, Symbolic) and left.symbol_id == right.symbol_id:
            return equal
        return self._opaque_condition(left, right, equal)

    def _opaque_condition(self, left: Value, right: Value, equal: bool) -> BoolIs:
        # Outside the constraint theory: the outcome becomes a fresh boolean
        origin = next(
            (v.origin for v in _symbolic_parts(left) + _symbolic_parts(right)),
            "deviceStatus",
        )
        symbol = self._new_symbol(ValueType.BOOL, origin, None, frozenset())
        return BoolIs(symbol.symbol_id, equal)



def _known(value: Value) -> Tuple[bool, Optional[str]]:
    if isinstance(value, Concrete) and value.type is ValueType.STRING_ARRAY:
        # Arrays only compare against null
        return True, (None if value.payload is None else repr(value.payload))
    return concrete_string(value)


def _symbolic_parts(value: Value) -> List[Symbolic]:
    if isinstance(value, Symbolic):
        return [value]
    if isinstance(value, Concat):
        return [part for part in value.parts if isinstance(part, Symbolic)]
    return []


def _decrypted(value: Value) -> bool:
    if value.decrypted:
        return True
    if isinstance(value, Concat):
        return any(part.decrypted for part in value.parts)
    return False


def _holds_symbol(value: Value) -> bool:
    if isinstance(value, (Symbolic, Concat)):
        return bool(_symbolic_parts(value)) or isinstance(value, Symbolic)
    if value.type is ValueType.STRING_ARRAY and value.payload:
        return any(_holds_symbol(item) for item in value.payload)
    return False


def _coerce_to_field(field_type: FieldType, value: Value, name: str) -> Value:
    expected = ValueType.from_field_type(field_type)
    if value.type is expected:
        return value
    if (
        expected is ValueType.STRING_ARRAY
        and isinstance(value, Concrete)
        and value.type is ValueType.STRING
        and value.payload is None
    ):
        return Concrete(ValueType.STRING_ARRAY, None, value.taint, value.decrypted)
    raise AmlRuntimeError(f"cannot assign {value.type.value} to {field_type.value} field '{name}'")


def _int_op(op: str, left: int, right: int) -> int:
    if op in ("/", "%") and right == 0:
        raise AmlRuntimeError("division by zero")
    if op == "+":
        return left + right
    if op == "-":
        return left - right
    if op == "*":
        return left * right
    # Java truncates toward zero
    quotient = abs(left) // abs(right)
    if (left < 0) != (right < 0):
        quotient = -quotient
    if op == "/":
        return quotient
    return left - quotient * right
