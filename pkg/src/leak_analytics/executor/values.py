"""Runtime values of the concolic interpreter.

A value is concrete, symbolic, or a string concatenation of parts. Every
value carries the set of source data types that influenced it.
"""

from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, FrozenSet, Iterable, Optional, Tuple, Union

from ..appmodel.nodes import FieldType
from ..errors import AmlRuntimeError

Taint = FrozenSet[str]
NO_TAINT: Taint = frozenset()

SYMBOLIC_PLACEHOLDER = "(.*)"


class ValueType(Enum):
    STRING = "string"
    INT = "int"
    BOOL = "bool"
    STRING_ARRAY = "string[]"

    @classmethod
    def from_field_type(cls, field_type: FieldType) -> "ValueType":
        return cls(field_type.value)


@dataclass(frozen=True)
class Concrete:
    """Known value. Arrays hold a tuple of element values; null is ``None``."""

    type: ValueType
    payload: Any
    taint: Taint = NO_TAINT
    decrypted: bool = False

    @property
    def is_null(self) -> bool:
        return self.payload is None


@dataclass(frozen=True)
class Symbolic:
    """Unknown value ``symbol + offset`` (offset is only meaningful for ints)."""

    symbol_id: int
    type: ValueType
    origin: str
    taint: Taint = NO_TAINT
    decrypted: bool = False
    offset: int = 0


@dataclass(frozen=True)
class Concat:
    """String assembled from concrete and symbolic parts, keeping per-part taint."""

    parts: Tuple[Union[Concrete, Symbolic], ...]
    taint: Taint = NO_TAINT
    decrypted: bool = False

    type = ValueType.STRING

    @property
    def is_symbolic(self) -> bool:
        return any(isinstance(part, Symbolic) for part in self.parts)


Value = Union[Concrete, Symbolic, Concat]


def string(payload: Optional[str], taint: Taint = NO_TAINT) -> Concrete:
    return Concrete(ValueType.STRING, payload, frozenset(taint))


def integer(payload: int, taint: Taint = NO_TAINT) -> Concrete:
    return Concrete(ValueType.INT, payload, frozenset(taint))


def boolean(payload: bool, taint: Taint = NO_TAINT) -> Concrete:
    return Concrete(ValueType.BOOL, payload, frozenset(taint))


def string_array(items: Optional[Iterable[Value]], taint: Taint = NO_TAINT) -> Concrete:
    payload = None if items is None else tuple(items)
    return Concrete(ValueType.STRING_ARRAY, payload, frozenset(taint))


def null_of(value_type: ValueType) -> Concrete:
    return Concrete(value_type, None)


def default_value(field_type: FieldType) -> Concrete:
    """Java default of an uninitialised field."""
    if field_type is FieldType.INT:
        return integer(0)
    if field_type is FieldType.BOOL:
        return boolean(False)
    return null_of(ValueType.from_field_type(field_type))


def from_literal(value: Any, field_type: Optional[FieldType] = None) -> Concrete:
    """Convert an AML literal (str, int, bool, None or tuple) into a value."""
    if isinstance(value, tuple):
        return string_array(string(item) for item in value)
    if isinstance(value, bool):
        return boolean(value)
    if isinstance(value, int):
        return integer(value)
    if value is None and field_type is FieldType.STRING_ARRAY:
        return null_of(ValueType.STRING_ARRAY)
    return string(value)


def value_type(value: Value) -> ValueType:
    return value.type


def full_taint(value: Value) -> Taint:
    """Taint of a value including the taint of array elements."""
    if isinstance(value, Concrete) and value.type is ValueType.STRING_ARRAY and value.payload:
        taint = set(value.taint)
        for item in value.payload:
            taint |= full_taint(item)
        return frozenset(taint)
    return value.taint


def with_taint(value: Value, extra: Taint) -> Value:
    if not extra or extra <= value.taint:
        return value
    return replace(value, taint=value.taint | frozenset(extra))


def propagate_taint(op: str, operands: Iterable[Value]) -> Taint:
    """Taint of the result of ``op`` applied to ``operands``.

    The rule is the same for arithmetic, concatenation, assignment and array
    reads: the result carries the union of its operands' taint.
    """
    taint = set()
    for operand in operands:
        taint |= full_taint(operand)
    return frozenset(taint)


def is_symbolic(value: Value) -> bool:
    if isinstance(value, Symbolic):
        return True
    return isinstance(value, Concat) and value.is_symbolic


def concrete_string(value: Value) -> Tuple[bool, Optional[str]]:
    """Return ``(True, text)`` when the string value is fully known."""
    if isinstance(value, Concrete) and value.type is ValueType.STRING:
        return True, value.payload
    if isinstance(value, Concat) and not value.is_symbolic:
        return True, "".join(part.payload for part in value.parts)
    return False, None


def _as_part(value: Value) -> Tuple[Union[Concrete, Symbolic], ...]:
    if isinstance(value, Concat):
        return value.parts
    if isinstance(value, Symbolic):
        return (value,)
    if value.type is ValueType.STRING_ARRAY:
        raise AmlRuntimeError("cannot concatenate a string array")
    return (string(_concrete_text(value), value.taint),)


def _concrete_text(value: Concrete) -> str:
    if value.payload is None:
        return "null"
    if value.type is ValueType.BOOL:
        return "true" if value.payload else "false"
    return str(value.payload)


def concat(left: Value, right: Value) -> Value:
    """Java string ``+``: merge equal-taint concrete neighbours, drop empty parts."""
    parts = []
    for part in _as_part(left) + _as_part(right):
        if isinstance(part, Concrete) and part.payload == "" and not part.taint:
            continue
        if (
            parts
            and isinstance(part, Concrete)
            and isinstance(parts[-1], Concrete)
            and parts[-1].taint == part.taint
        ):
            parts[-1] = string(parts[-1].payload + part.payload, part.taint)
            continue
        parts.append(part)

    taint = propagate_taint("concat", (left, right))
    decrypted = left.decrypted or right.decrypted
    if not parts:
        return Concrete(ValueType.STRING, "", taint, decrypted)
    if len(parts) == 1:
        single = parts[0]
        if isinstance(single, Symbolic) and single.type is not ValueType.STRING:
            return Concat((single,), taint, decrypted)
        return replace(single, taint=taint, decrypted=decrypted)
    return Concat(tuple(parts), taint, decrypted)


def _placeholder(taint: Taint) -> str:
    return "<" + "+".join(sorted(taint)) + ">"


def render(value: Value) -> str:
    """Raw rendering: concrete text verbatim, unknown parts as ``(.*)``."""
    if isinstance(value, Symbolic):
        return SYMBOLIC_PLACEHOLDER
    if isinstance(value, Concat):
        return "".join(render(part) for part in value.parts)
    if value.type is ValueType.STRING_ARRAY and value.payload is not None:
        return "{" + ",".join(render(item) for item in value.payload) + "}"
    return _concrete_text(value)


def render_template(value: Value) -> str:
    """Classifier view: tainted parts become ``<TYPE>`` placeholders."""
    if isinstance(value, Concat):
        return "".join(render_template(part) for part in value.parts)
    if value.type is ValueType.STRING_ARRAY and value.payload is not None:
        return "{" + ",".join(render_template(item) for item in value.payload) + "}"
    if value.taint:
        return _placeholder(value.taint)
    return render(value)
