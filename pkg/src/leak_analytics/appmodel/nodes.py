"""Syntax tree of the app-model language (AML).

Nodes are frozen dataclasses; source positions are excluded from equality so
that a pretty-printed and re-parsed program compares equal to the original.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterator, Optional, Tuple, Union


LIFECYCLE_CALLBACKS = (
    "onCreate",
    "onStart",
    "onResume",
    "onPause",
    "onStop",
    "onRestart",
    "onDestroy",
    "onLowMemory",
    "onTrimMemory",
    "onConfigurationChanged",
    "onStartCommand",
    "onBind",
)

# Callbacks the framework invokes in this order; the rest hang off onCreate
LIFECYCLE_CHAIN = ("onCreate", "onStart", "onResume", "onPause", "onStop", "onDestroy")

COMPARISON_OPERATORS = ("==", "!=", "<", ">", "<=", ">=")
ARITHMETIC_OPERATORS = ("+", "-", "*", "/", "%")


class ComponentKind(Enum):
    ACTIVITY = "Activity"
    SERVICE = "Service"


class FieldType(Enum):
    STRING = "string"
    INT = "int"
    BOOL = "bool"
    STRING_ARRAY = "string[]"


@dataclass(frozen=True)
class Position:
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


def _pos() -> Any:
    return field(default=None, compare=False, repr=False)


# Expressions


@dataclass(frozen=True)
class Literal:
    """String, int, bool, null (None) or array (tuple of literal values)."""

    value: Any
    position: Optional[Position] = _pos()


@dataclass(frozen=True)
class Name:
    ident: str
    position: Optional[Position] = _pos()


@dataclass(frozen=True)
class Index:
    base: str
    index: "Expr"
    position: Optional[Position] = _pos()


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    position: Optional[Position] = _pos()


Expr = Union[Literal, Name, Index, BinOp]
LValue = Union[Name, Index]


# Conditions


@dataclass(frozen=True)
class Compare:
    left: Expr
    op: str
    right: Expr
    position: Optional[Position] = _pos()


@dataclass(frozen=True)
class BoolTest:
    operand: Expr
    negated: bool = False
    position: Optional[Position] = _pos()


CondAtom = Union[Compare, BoolTest]


@dataclass(frozen=True)
class Condition:
    """Conjunction of atoms joined by ``&&``."""

    atoms: Tuple[CondAtom, ...]


# Statements


@dataclass(frozen=True)
class Assign:
    target: LValue
    value: Expr
    position: Optional[Position] = _pos()


@dataclass(frozen=True)
class ApiCall:
    api: str
    args: Tuple[Expr, ...] = ()
    target: Optional[LValue] = None
    position: Optional[Position] = _pos()


@dataclass(frozen=True)
class LocalCall:
    method: str
    position: Optional[Position] = _pos()


@dataclass(frozen=True)
class If:
    condition: Condition
    then_block: Tuple["Statement", ...]
    else_block: Tuple["Statement", ...] = ()
    position: Optional[Position] = _pos()


@dataclass(frozen=True)
class While:
    condition: Condition
    body: Tuple["Statement", ...]
    position: Optional[Position] = _pos()


@dataclass(frozen=True)
class Return:
    position: Optional[Position] = _pos()


Statement = Union[Assign, ApiCall, LocalCall, If, While, Return]


@dataclass(frozen=True)
class FieldDecl:
    name: str
    type: FieldType
    initializer: Optional[Literal] = None
    position: Optional[Position] = _pos()


@dataclass(frozen=True)
class MethodBody:
    name: str
    statements: Tuple[Statement, ...]
    position: Optional[Position] = _pos()


@dataclass(frozen=True)
class Component:
    name: str
    kind: ComponentKind
    fields: Tuple[FieldDecl, ...] = ()
    lifecycle_callbacks: Dict[str, MethodBody] = field(default_factory=dict)
    listeners: Dict[str, MethodBody] = field(default_factory=dict)
    local_methods: Dict[str, MethodBody] = field(default_factory=dict)
    position: Optional[Position] = _pos()

    @property
    def field_names(self) -> Tuple[str, ...]:
        return tuple(decl.name for decl in self.fields)

    def field_decl(self, name: str) -> Optional[FieldDecl]:
        for decl in self.fields:
            if decl.name == name:
                return decl
        return None

    def entry_methods(self) -> Dict[str, MethodBody]:
        """Framework-invocable methods: lifecycle callbacks then listeners."""
        return {**self.lifecycle_callbacks, **self.listeners}

    def all_methods(self) -> Dict[str, MethodBody]:
        return {**self.lifecycle_callbacks, **self.listeners, **self.local_methods}

    def method(self, name: str) -> Optional[MethodBody]:
        return self.all_methods().get(name)


@dataclass(frozen=True)
class Program:
    name: str
    components: Tuple[Component, ...] = ()
    catalog_ref: str = field(default="default", compare=False)

    def component(self, name: str) -> Component:
        for component in self.components:
            if component.name == name:
                return component
        raise KeyError(f"Unknown component: {name}")


def walk_statements(statements: Tuple[Statement, ...]) -> Iterator[Statement]:
    """Yield statements in pre-order, descending into nested blocks."""
    for statement in statements:
        yield statement
        if isinstance(statement, If):
            yield from walk_statements(statement.then_block)
            yield from walk_statements(statement.else_block)
        elif isinstance(statement, While):
            yield from walk_statements(statement.body)


def walk_expr(expr: Expr) -> Iterator[Expr]:
    yield expr
    if isinstance(expr, BinOp):
        yield from walk_expr(expr.left)
        yield from walk_expr(expr.right)
    elif isinstance(expr, Index):
        yield from walk_expr(expr.index)


def statement_expressions(statement: Statement) -> Iterator[Expr]:
    """Expressions a statement evaluates (not the assignment target name)."""
    if isinstance(statement, Assign):
        yield statement.value
        if isinstance(statement.target, Index):
            yield statement.target.index
    elif isinstance(statement, ApiCall):
        yield from statement.args
        if isinstance(statement.target, Index):
            yield statement.target.index
    elif isinstance(statement, (If, While)):
        for atom in statement.condition.atoms:
            if isinstance(atom, Compare):
                yield atom.left
                yield atom.right
            else:
                yield atom.operand


def names_read(statement: Statement) -> Iterator[str]:
    """Identifiers a single statement reads, excluding nested blocks."""
    for expr in statement_expressions(statement):
        for node in walk_expr(expr):
            if isinstance(node, Name):
                yield node.ident
            elif isinstance(node, Index):
                yield node.base
    # Element writes read the array reference
    target = getattr(statement, "target", None)
    if isinstance(target, Index):
        yield target.base


def assigned_name(statement: Statement) -> Optional[str]:
    target = getattr(statement, "target", None)
    if isinstance(target, Name):
        return target.ident
    if isinstance(target, Index):
        return target.base
    return None
