"""Compile AML method bodies to flat instruction lists.

A flat list lets a snapshot be a program counter per frame. ``&&``
conditions of ``if`` compile to one branch per atom, so every path
constraint stays a conjunction.
"""

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Set, Tuple, Union

from ..appmodel.nodes import (
    ApiCall,
    Assign,
    Component,
    CondAtom,
    Condition,
    Expr,
    If,
    LocalCall,
    LValue,
    Position,
    Return,
    Statement,
    While,
    assigned_name,
    names_read,
    walk_statements,
)


@dataclass(frozen=True)
class AssignOp:
    target: LValue
    value: Expr
    position: Optional[Position] = None


@dataclass(frozen=True)
class InvokeOp:
    api: str
    args: Tuple[Expr, ...]
    target: Optional[LValue] = None
    position: Optional[Position] = None


@dataclass(frozen=True)
class CallOp:
    method: str
    position: Optional[Position] = None


@dataclass(frozen=True)
class BranchOp:
    """Fall through when the atom holds, otherwise jump to ``on_false``."""

    atom: CondAtom
    on_false: int
    position: Optional[Position] = None


@dataclass(frozen=True)
class LoopOp:
    """Loop head; ``writes`` are the names the body may assign."""

    condition: Condition
    exit: int
    writes: Tuple[str, ...]
    position: Optional[Position] = None


@dataclass(frozen=True)
class JumpOp:
    target: int
    loop_back: bool = False


@dataclass(frozen=True)
class ReturnOp:
    position: Optional[Position] = None


Op = Union[AssignOp, InvokeOp, CallOp, BranchOp, LoopOp, JumpOp, ReturnOp]
Code = Tuple[Op, ...]


def _callees(statements: Tuple[Statement, ...]) -> List[str]:
    return [s.method for s in walk_statements(statements) if isinstance(s, LocalCall)]


def _reachable_methods(component: Component, statements: Tuple[Statement, ...]) -> List[str]:
    seen: Set[str] = set()
    pending = _callees(statements)
    order = []
    while pending:
        name = pending.pop(0)
        if name in seen or name not in component.local_methods:
            continue
        seen.add(name)
        order.append(name)
        pending.extend(_callees(component.local_methods[name].statements))
    return order


def names_written(component: Component, statements: Tuple[Statement, ...]) -> Tuple[str, ...]:
    """Names assigned by ``statements``, plus fields assigned by local callees."""
    written: Dict[str, None] = {}
    for statement in walk_statements(statements):
        name = assigned_name(statement)
        if name is not None:
            written.setdefault(name)
    fields = set(component.field_names)
    for method in _reachable_methods(component, statements):
        for statement in walk_statements(component.local_methods[method].statements):
            name = assigned_name(statement)
            if name in fields:
                written.setdefault(name)
    return tuple(written)


def fields_read(component: Component, method: str) -> FrozenSet[str]:
    """Fields a method reads syntactically, following local calls."""
    body = component.method(method)
    if body is None:
        return frozenset()
    fields = set(component.field_names)
    reads: Set[str] = set()
    bodies = [body.statements] + [
        component.local_methods[name].statements
        for name in _reachable_methods(component, body.statements)
    ]
    for statements in bodies:
        for statement in walk_statements(statements):
            reads.update(name for name in names_read(statement) if name in fields)
    return frozenset(reads)


class MethodCompiler:
    def __init__(self, component: Component):
        self.component = component
        self.code: List[Optional[Op]] = []

    def emit(self, op: Optional[Op]) -> int:
        self.code.append(op)
        return len(self.code) - 1

    def compile_block(self, statements: Tuple[Statement, ...]):
        for statement in statements:
            self.compile_statement(statement)

    def compile_statement(self, statement: Statement):
        if isinstance(statement, Assign):
            self.emit(AssignOp(statement.target, statement.value, statement.position))
        elif isinstance(statement, ApiCall):
            self.emit(InvokeOp(statement.api, statement.args, statement.target, statement.position))
        elif isinstance(statement, LocalCall):
            self.emit(CallOp(statement.method, statement.position))
        elif isinstance(statement, Return):
            self.emit(ReturnOp(statement.position))
        elif isinstance(statement, If):
            self._compile_if(statement)
        elif isinstance(statement, While):
            self._compile_while(statement)
        else:
            raise TypeError(f"Unknown statement node: {statement!r}")

    def _compile_if(self, statement: If):
        branches = [self.emit(None) for _ in statement.condition.atoms]
        self.compile_block(statement.then_block)
        jump = self.emit(None) if statement.else_block else None
        else_start = len(self.code)
        self.compile_block(statement.else_block)
        end = len(self.code)
        for index, atom in zip(branches, statement.condition.atoms):
            self.code[index] = BranchOp(atom, else_start, statement.position)
        if jump is not None:
            self.code[jump] = JumpOp(end)

    def _compile_while(self, statement: While):
        head = self.emit(None)
        self.compile_block(statement.body)
        self.emit(JumpOp(head, loop_back=True))
        writes = names_written(self.component, statement.body)
        self.code[head] = LoopOp(statement.condition, len(self.code), writes, statement.position)


def compile_method(component: Component, method: str) -> Code:
    """Compile one method of ``component`` into a flat instruction tuple."""
    compiler = MethodCompiler(component)
    compiler.compile_block(component.all_methods()[method].statements)
    return tuple(compiler.code)


def compile_component(component: Component) -> Dict[str, Code]:
    return {name: compile_method(component, name) for name in component.all_methods()}
