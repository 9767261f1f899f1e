"""Lexer and recursive-descent parser for AML source text."""

import logging
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from ..errors import AmlSyntaxError, DuplicateNameError
from .catalog import ApiCatalog, default_catalog
from .nodes import (
    ApiCall,
    Assign,
    BinOp,
    BoolTest,
    Compare,
    Component,
    ComponentKind,
    Condition,
    COMPARISON_OPERATORS,
    Expr,
    FieldDecl,
    FieldType,
    If,
    Index,
    LIFECYCLE_CALLBACKS,
    Literal,
    LocalCall,
    MethodBody,
    Name,
    Position,
    Program,
    Return,
    Statement,
    While,
)
from .validator import ProgramValidator

logger = logging.getLogger(__name__)

KEYWORDS = frozenset(
    {
        "app",
        "component",
        "field",
        "callback",
        "listener",
        "method",
        "if",
        "else",
        "while",
        "return",
        "call",
        "true",
        "false",
        "null",
    }
)

_TOKEN_SPEC = [
    ("NEWLINE", r"\n"),
    ("SKIP", r"[ \t\r]+"),
    ("COMMENT", r"#[^\n]*"),
    ("STRING", r'"(?:[^"\\\n]|\\.)*"'),
    ("INT", r"\d+"),
    ("IDENT", r"[A-Za-z_][A-Za-z0-9_]*"),
    ("OP", r"&&|==|!=|<=|>=|[{}()\[\];:,=<>+\-*/%!]"),
    ("MISMATCH", r"."),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in _TOKEN_SPEC))
_ESCAPES = {"n": "\n", "t": "\t", '"': '"', "\\": "\\"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int

    @property
    def position(self) -> Position:
        return Position(self.line, self.column)


def tokenize(text: str) -> List[Token]:
    """Split AML text into tokens, tracking 1-based line and column."""
    tokens = []
    line, line_start = 1, 0
    for match in _TOKEN_RE.finditer(text):
        kind = match.lastgroup
        value = match.group()
        column = match.start() - line_start + 1
        if kind == "NEWLINE":
            line += 1
            line_start = match.end()
            continue
        if kind in ("SKIP", "COMMENT"):
            continue
        if kind == "MISMATCH":
            if value == '"':
                raise AmlSyntaxError("unterminated string literal", line, column)
            raise AmlSyntaxError(f"unexpected character {value!r}", line, column)
        tokens.append(Token(kind, value, line, column))
    tokens.append(Token("EOF", "", line, len(text) - line_start + 1))
    return tokens


def _unescape(raw: str, token: Token) -> str:
    out = []
    i = 1
    while i < len(raw) - 1:
        ch = raw[i]
        if ch == "\\":
            nxt = raw[i + 1]
            if nxt not in _ESCAPES:
                raise AmlSyntaxError(f"unknown escape \\{nxt}", token.line, token.column + i)
            out.append(_ESCAPES[nxt])
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


class Parser:
    """Builds a Program from a token stream."""

    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    # Token helpers

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        token = self.current
        if token.kind != "EOF":
            self.pos += 1
        return token

    def check(self, text: str) -> bool:
        token = self.current
        return token.kind in ("OP", "IDENT") and token.text == text

    def accept(self, text: str) -> Optional[Token]:
        if self.check(text):
            return self.advance()
        return None

    def expect(self, text: str) -> Token:
        if not self.check(text):
            self.error(f"expected '{text}'")
        return self.advance()

    def expect_ident(self, what: str = "identifier") -> Token:
        token = self.current
        if token.kind != "IDENT" or token.text in KEYWORDS:
            self.error(f"expected {what}")
        return self.advance()

    def error(self, message: str):
        token = self.current
        found = "end of input" if token.kind == "EOF" else repr(token.text)
        raise AmlSyntaxError(f"{message}, found {found}", token.line, token.column)

    # Declarations

    def parse_program(self) -> Program:
        self.expect("app")
        name = self.expect_ident("app name").text
        self.expect("{")
        components = []
        seen = set()
        while not self.check("}"):
            component = self.parse_component()
            if component.name in seen:
                raise DuplicateNameError(
                    f"Duplicate component '{component.name}' at {component.position}"
                )
            seen.add(component.name)
            components.append(component)
        self.expect("}")
        if self.current.kind != "EOF":
            self.error("expected end of input")
        return Program(name=name, components=tuple(components))

    def parse_component(self) -> Component:
        start = self.expect("component")
        kind_token = self.expect_ident("component kind")
        try:
            kind = ComponentKind(kind_token.text)
        except ValueError:
            raise AmlSyntaxError(
                f"component kind must be Activity or Service, found {kind_token.text!r}",
                kind_token.line,
                kind_token.column,
            )
        name = self.expect_ident("component name").text
        self.expect("{")

        fields: List[FieldDecl] = []
        sections: Dict[str, Dict[str, MethodBody]] = {"callback": {}, "listener": {}, "method": {}}
        method_names = set()
        while not self.check("}"):
            if self.check("field"):
                decl = self.parse_field()
                if decl.name in {f.name for f in fields}:
                    raise DuplicateNameError(
                        f"Duplicate field '{decl.name}' in component '{name}' at {decl.position}"
                    )
                fields.append(decl)
                continue
            keyword = self.current.text
            if keyword not in sections:
                self.error("expected 'field', 'callback', 'listener' or 'method'")
            keyword_token = self.advance()
            method_token = self.expect_ident("method name")
            method_name = method_token.text
            if keyword == "callback" and method_name not in LIFECYCLE_CALLBACKS:
                raise AmlSyntaxError(
                    f"'{method_name}' is not a lifecycle callback",
                    method_token.line,
                    method_token.column,
                )
            if keyword == "listener" and method_name in LIFECYCLE_CALLBACKS:
                raise AmlSyntaxError(
                    f"lifecycle name '{method_name}' cannot be a listener",
                    method_token.line,
                    method_token.column,
                )
            if method_name in method_names:
                raise DuplicateNameError(
                    f"Duplicate method '{method_name}' in component '{name}' "
                    f"at {method_token.position}"
                )
            method_names.add(method_name)
            body = self.parse_block()
            sections[keyword][method_name] = MethodBody(
                method_name, body, position=keyword_token.position
            )
        self.expect("}")
        local_names = frozenset(sections["method"])
        for methods in sections.values():
            for method_name, body in methods.items():
                methods[method_name] = MethodBody(
                    method_name,
                    _resolve_local_calls(body.statements, local_names),
                    position=body.position,
                )
        return Component(
            name=name,
            kind=kind,
            fields=tuple(fields),
            lifecycle_callbacks=sections["callback"],
            listeners=sections["listener"],
            local_methods=sections["method"],
            position=start.position,
        )

    def parse_field(self) -> FieldDecl:
        start = self.expect("field")
        name = self.expect_ident("field name").text
        self.expect(":")
        if self.current.kind != "IDENT" or self.current.text not in ("string", "int", "bool"):
            self.error("expected field type string, int, bool or string[]")
        type_name = self.advance().text
        if type_name == "string" and self.accept("["):
            self.expect("]")
            type_name = "string[]"
        initializer = None
        if self.accept("="):
            initializer = self.parse_literal()
        self.expect(";")
        return FieldDecl(name, FieldType(type_name), initializer, position=start.position)

    # Statements

    def parse_block(self) -> Tuple[Statement, ...]:
        self.expect("{")
        statements = []
        while not self.check("}"):
            if self.current.kind == "EOF":
                self.error("expected '}'")
            statements.append(self.parse_statement())
        self.expect("}")
        return tuple(statements)

    def parse_statement(self) -> Statement:
        token = self.current
        if self.accept("if"):
            return self.parse_if(token)
        if self.accept("while"):
            self.expect("(")
            condition = self.parse_condition()
            self.expect(")")
            return While(condition, self.parse_block(), position=token.position)
        if self.accept("return"):
            self.expect(";")
            return Return(position=token.position)
        if self.accept("call"):
            method = self.expect_ident("method name").text
            self.expect(";")
            return LocalCall(method, position=token.position)

        ident = self.expect_ident("statement")
        if self.check("("):
            args = self.parse_args()
            self.expect(";")
            return ApiCall(ident.text, args, None, position=ident.position)

        target = Name(ident.text, position=ident.position)
        if self.accept("["):
            index = self.parse_expr()
            self.expect("]")
            target = Index(ident.text, index, position=ident.position)
        self.expect("=")
        if self.current.kind == "IDENT" and self.current.text not in KEYWORDS and self.peek().text == "(":
            api = self.advance()
            args = self.parse_args()
            self.expect(";")
            return ApiCall(api.text, args, target, position=ident.position)
        value = self.parse_expr()
        self.expect(";")
        return Assign(target, value, position=ident.position)

    def parse_if(self, token: Token) -> If:
        self.expect("(")
        condition = self.parse_condition()
        self.expect(")")
        then_block = self.parse_block()
        else_block: Tuple[Statement, ...] = ()
        if self.accept("else"):
            if self.check("if"):
                nested = self.advance()
                else_block = (self.parse_if(nested),)
            else:
                else_block = self.parse_block()
        return If(condition, then_block, else_block, position=token.position)

    def parse_args(self) -> Tuple[Expr, ...]:
        self.expect("(")
        args = []
        if not self.check(")"):
            args.append(self.parse_expr())
            while self.accept(","):
                args.append(self.parse_expr())
        self.expect(")")
        return tuple(args)

    # Conditions and expressions

    def parse_condition(self) -> Condition:
        atoms = [self.parse_atom()]
        while self.accept("&&"):
            atoms.append(self.parse_atom())
        return Condition(tuple(atoms))

    def parse_atom(self):
        token = self.current
        if self.accept("!"):
            ident = self.expect_ident("boolean variable")
            return BoolTest(Name(ident.text, position=ident.position), True, position=token.position)
        left = self.parse_expr()
        if self.current.kind == "OP" and self.current.text in COMPARISON_OPERATORS:
            op = self.advance().text
            right = self.parse_expr()
            return Compare(left, op, right, position=token.position)
        if not isinstance(left, (Name, Index)) and not (
            isinstance(left, Literal) and isinstance(left.value, bool)
        ):
            raise AmlSyntaxError(
                "condition must be a comparison or a boolean variable", token.line, token.column
            )
        return BoolTest(left, False, position=token.position)

    def parse_expr(self) -> Expr:
        left = self.parse_term()
        while self.current.kind == "OP" and self.current.text in ("+", "-"):
            op_token = self.advance()
            right = self.parse_term()
            left = BinOp(op_token.text, left, right, position=op_token.position)
        return left

    def parse_term(self) -> Expr:
        left = self.parse_unary()
        while self.current.kind == "OP" and self.current.text in ("*", "/", "%"):
            op_token = self.advance()
            right = self.parse_unary()
            left = BinOp(op_token.text, left, right, position=op_token.position)
        return left

    def parse_unary(self) -> Expr:
        token = self.current
        if self.accept("-"):
            if self.current.kind == "INT":
                return Literal(-int(self.advance().text), position=token.position)
            operand = self.parse_unary()
            return BinOp("-", Literal(0, position=token.position), operand, position=token.position)
        return self.parse_primary()

    def parse_primary(self) -> Expr:
        token = self.current
        if token.kind in ("STRING", "INT") or token.text in ("true", "false", "null", "{"):
            return self.parse_literal()
        if self.accept("("):
            expr = self.parse_expr()
            self.expect(")")
            return expr
        ident = self.expect_ident("expression")
        if self.check("("):
            raise AmlSyntaxError(
                f"call to '{ident.text}' must be the whole right-hand side",
                ident.line,
                ident.column,
            )
        if self.accept("["):
            index = self.parse_expr()
            self.expect("]")
            return Index(ident.text, index, position=ident.position)
        return Name(ident.text, position=ident.position)

    def parse_literal(self) -> Literal:
        token = self.current
        if token.kind == "STRING":
            self.advance()
            return Literal(_unescape(token.text, token), position=token.position)
        if token.kind == "INT":
            self.advance()
            return Literal(int(token.text), position=token.position)
        if self.accept("-"):
            if self.current.kind != "INT":
                self.error("expected integer literal")
            return Literal(-int(self.advance().text), position=token.position)
        if self.accept("true"):
            return Literal(True, position=token.position)
        if self.accept("false"):
            return Literal(False, position=token.position)
        if self.accept("null"):
            return Literal(None, position=token.position)
        if self.accept("{"):
            items = []
            if not self.check("}"):
                items.append(self._array_item())
                while self.accept(","):
                    items.append(self._array_item())
            self.expect("}")
            return Literal(tuple(items), position=token.position)
        self.error("expected literal")

    def _array_item(self) -> Optional[str]:
        token = self.current
        if token.kind == "STRING":
            self.advance()
            return _unescape(token.text, token)
        if self.accept("null"):
            return None
        self.error("array literals hold strings")


def _resolve_local_calls(
    statements: Tuple[Statement, ...], local_names: frozenset
) -> Tuple[Statement, ...]:
    """Rewrite bare ``m();`` calls naming a local method into LocalCall."""
    resolved = []
    for statement in statements:
        if (
            isinstance(statement, ApiCall)
            and statement.api in local_names
            and not statement.args
            and statement.target is None
        ):
            statement = LocalCall(statement.api, position=statement.position)
        elif isinstance(statement, If):
            statement = If(
                statement.condition,
                _resolve_local_calls(statement.then_block, local_names),
                _resolve_local_calls(statement.else_block, local_names),
                position=statement.position,
            )
        elif isinstance(statement, While):
            statement = While(
                statement.condition,
                _resolve_local_calls(statement.body, local_names),
                position=statement.position,
            )
        resolved.append(statement)
    return tuple(resolved)


def parse_program(text: str, catalog: Optional[ApiCatalog] = None) -> Program:
    """Parse and validate AML source text.

    Args:
        text: AML source
        catalog: API catalog used to resolve calls (default catalog if omitted)

    Returns:
        Program: Validated program

    Raises:
        AmlSyntaxError: Malformed source, with line and column
        UnresolvedApiError: Call to an API missing from the catalog
        DuplicateNameError: Repeated component, field or method name
    """
    catalog = catalog or default_catalog()
    program = Parser(text).parse_program()
    program = Program(program.name, program.components, catalog_ref=catalog.name)
    ProgramValidator(catalog).ensure_valid(program)
    logger.debug(f"Parsed app '{program.name}' with {len(program.components)} components")
    return program
