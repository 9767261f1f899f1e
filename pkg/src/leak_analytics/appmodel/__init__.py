"""App-model language: syntax tree, parser, printer and API catalog."""

from .catalog import (
    ApiCatalog,
    ApiKind,
    ApiSpec,
    EnvBehavior,
    EnvBehaviorKind,
    default_catalog,
    load_api_catalog,
)
from .nodes import (
    ApiCall,
    Assign,
    BinOp,
    BoolTest,
    Compare,
    Component,
    ComponentKind,
    Condition,
    FieldDecl,
    FieldType,
    If,
    Index,
    LIFECYCLE_CALLBACKS,
    LIFECYCLE_CHAIN,
    Literal,
    LocalCall,
    MethodBody,
    Name,
    Position,
    Program,
    Return,
    While,
)
from .parser import parse_program, tokenize
from .printer import format_program
from .validator import ProgramValidator

__all__ = [
    "ApiCatalog",
    "ApiKind",
    "ApiSpec",
    "EnvBehavior",
    "EnvBehaviorKind",
    "default_catalog",
    "load_api_catalog",
    "ApiCall",
    "Assign",
    "BinOp",
    "BoolTest",
    "Compare",
    "Component",
    "ComponentKind",
    "Condition",
    "FieldDecl",
    "FieldType",
    "If",
    "Index",
    "LIFECYCLE_CALLBACKS",
    "LIFECYCLE_CHAIN",
    "Literal",
    "LocalCall",
    "MethodBody",
    "Name",
    "Position",
    "Program",
    "Return",
    "While",
    "parse_program",
    "tokenize",
    "format_program",
    "ProgramValidator",
]
