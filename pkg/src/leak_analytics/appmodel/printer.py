"""Canonical AML text for parsed programs."""

from typing import List, Tuple

from .nodes import (
    ApiCall,
    Assign,
    BinOp,
    BoolTest,
    Compare,
    Component,
    Condition,
    Expr,
    FieldDecl,
    If,
    Index,
    Literal,
    LocalCall,
    MethodBody,
    Name,
    Program,
    Return,
    Statement,
    While,
)

INDENT = "    "


def format_string(value: str) -> str:
    escaped = (
        value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t")
    )
    return f'"{escaped}"'


def format_literal(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, tuple):
        return "{" + ", ".join(format_literal(item) for item in value) + "}"
    return format_string(value)


def format_expr(expr: Expr, nested: bool = False) -> str:
    if isinstance(expr, Literal):
        return format_literal(expr.value)
    if isinstance(expr, Name):
        return expr.ident
    if isinstance(expr, Index):
        return f"{expr.base}[{format_expr(expr.index)}]"
    text = f"{format_expr(expr.left, True)} {expr.op} {format_expr(expr.right, True)}"
    return f"({text})" if nested else text


def format_condition(condition: Condition) -> str:
    parts = []
    for atom in condition.atoms:
        if isinstance(atom, Compare):
            parts.append(f"{format_expr(atom.left)} {atom.op} {format_expr(atom.right)}")
        elif atom.negated:
            parts.append(f"!{format_expr(atom.operand)}")
        else:
            parts.append(format_expr(atom.operand))
    return " && ".join(parts)


def _format_block(statements: Tuple[Statement, ...], depth: int) -> List[str]:
    lines = []
    for statement in statements:
        lines.extend(_format_statement(statement, depth))
    return lines


def _format_statement(statement: Statement, depth: int) -> List[str]:
    pad = INDENT * depth
    if isinstance(statement, Assign):
        return [f"{pad}{format_expr(statement.target)} = {format_expr(statement.value)};"]
    if isinstance(statement, ApiCall):
        call = f"{statement.api}({', '.join(format_expr(arg) for arg in statement.args)})"
        if statement.target is not None:
            return [f"{pad}{format_expr(statement.target)} = {call};"]
        return [f"{pad}{call};"]
    if isinstance(statement, LocalCall):
        return [f"{pad}call {statement.method};"]
    if isinstance(statement, Return):
        return [f"{pad}return;"]
    if isinstance(statement, While):
        lines = [f"{pad}while ({format_condition(statement.condition)}) {{"]
        lines.extend(_format_block(statement.body, depth + 1))
        lines.append(f"{pad}}}")
        return lines
    lines = [f"{pad}if ({format_condition(statement.condition)}) {{"]
    lines.extend(_format_block(statement.then_block, depth + 1))
    if statement.else_block:
        lines.append(f"{pad}}} else {{")
        lines.extend(_format_block(statement.else_block, depth + 1))
    lines.append(f"{pad}}}")
    return lines


def _format_field(decl: FieldDecl) -> str:
    text = f"field {decl.name} : {decl.type.value}"
    if decl.initializer is not None:
        text += f" = {format_literal(decl.initializer.value)}"
    return text + ";"


def _format_method(keyword: str, method: MethodBody, depth: int) -> List[str]:
    pad = INDENT * depth
    lines = [f"{pad}{keyword} {method.name} {{"]
    lines.extend(_format_block(method.statements, depth + 1))
    lines.append(f"{pad}}}")
    return lines


def format_component(component: Component, depth: int = 1) -> List[str]:
    pad = INDENT * depth
    lines = [f"{pad}component {component.kind.value} {component.name} {{"]
    lines.extend(f"{pad}{INDENT}{_format_field(decl)}" for decl in component.fields)
    for keyword, methods in (
        ("callback", component.lifecycle_callbacks),
        ("listener", component.listeners),
        ("method", component.local_methods),
    ):
        for method in methods.values():
            lines.extend(_format_method(keyword, method, depth + 1))
    lines.append(f"{pad}}}")
    return lines


def format_program(program: Program) -> str:
    """Render a program as canonical AML text that re-parses to an equal Program."""
    lines = [f"app {program.name} {{"]
    for component in program.components:
        lines.extend(format_component(component))
    lines.append("}")
    return "\n".join(lines) + "\n"
