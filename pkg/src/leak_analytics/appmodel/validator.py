"""Structural validation of parsed AML programs."""

from dataclasses import dataclass
from typing import List, Optional, Tuple, Type

from ..errors import (
    AmlSyntaxError,
    DuplicateNameError,
    LeakAnalysisError,
    UnresolvedApiError,
)
from .catalog import ApiCatalog
from .nodes import (
    ApiCall,
    Component,
    FieldDecl,
    FieldType,
    LocalCall,
    Position,
    Program,
    walk_statements,
)


@dataclass(frozen=True)
class ValidationIssue:
    error: Type[LeakAnalysisError]
    message: str
    position: Optional[Position] = None
    api_name: Optional[str] = None

    def raise_error(self):
        if self.error is UnresolvedApiError:
            line = self.position.line if self.position else None
            column = self.position.column if self.position else None
            raise UnresolvedApiError(self.api_name or "?", line, column)
        if self.error is AmlSyntaxError:
            position = self.position or Position(0, 0)
            raise AmlSyntaxError(self.message, position.line, position.column)
        raise self.error(self.message)


def literal_matches(field_type: FieldType, value) -> bool:
    if field_type is FieldType.STRING:
        return value is None or isinstance(value, str)
    if field_type is FieldType.INT:
        return isinstance(value, int) and not isinstance(value, bool)
    if field_type is FieldType.BOOL:
        return isinstance(value, bool)
    return value is None or isinstance(value, tuple)


class ProgramValidator:
    """Validates programs against an API catalog."""

    def __init__(self, catalog: ApiCatalog):
        """Initialize ProgramValidator.

        Args:
            catalog: Catalog every API call must resolve against
        """
        self.catalog = catalog

    def collect_issues(self, program: Program) -> List[ValidationIssue]:
        issues = []
        seen = set()
        for component in program.components:
            if component.name in seen:
                issues.append(
                    ValidationIssue(DuplicateNameError, f"Duplicate component '{component.name}'")
                )
            seen.add(component.name)
            issues.extend(self._component_issues(component))
        return issues

    def _component_issues(self, component: Component) -> List[ValidationIssue]:
        issues = []
        if "onCreate" not in component.lifecycle_callbacks:
            issues.append(
                ValidationIssue(
                    AmlSyntaxError,
                    f"component '{component.name}' has no onCreate callback",
                    component.position,
                )
            )

        names = [decl.name for decl in component.fields]
        for name in sorted({n for n in names if names.count(n) > 1}):
            issues.append(
                ValidationIssue(
                    DuplicateNameError, f"Duplicate field '{name}' in component '{component.name}'"
                )
            )
        for decl in component.fields:
            issues.extend(self._field_issues(component, decl))

        overlap = set(component.listeners) & set(component.lifecycle_callbacks)
        for name in sorted(overlap):
            issues.append(
                ValidationIssue(
                    DuplicateNameError,
                    f"'{name}' is both a lifecycle callback and a listener in '{component.name}'",
                )
            )

        for method in component.all_methods().values():
            for statement in walk_statements(method.statements):
                if isinstance(statement, ApiCall) and statement.api not in self.catalog:
                    issues.append(
                        ValidationIssue(
                            UnresolvedApiError,
                            f"Unresolved API '{statement.api}' in {component.name}::{method.name}",
                            statement.position,
                            api_name=statement.api,
                        )
                    )
                elif isinstance(statement, LocalCall) and statement.method not in component.local_methods:
                    issues.append(
                        ValidationIssue(
                            UnresolvedApiError,
                            f"'call {statement.method}' in {component.name}::{method.name} "
                            "does not name a local method",
                            statement.position,
                            api_name=statement.method,
                        )
                    )
        return issues

    @staticmethod
    def _field_issues(component: Component, decl: FieldDecl) -> List[ValidationIssue]:
        if decl.initializer is None or literal_matches(decl.type, decl.initializer.value):
            return []
        return [
            ValidationIssue(
                AmlSyntaxError,
                f"initializer of field '{decl.name}' in '{component.name}' "
                f"is not a {decl.type.value} literal",
                decl.position,
            )
        ]

    def validate(self, program: Program) -> Tuple[bool, List[str]]:
        """Validate a program.

        Args:
            program: Parsed program

        Returns:
            tuple: (is_valid, list of validation messages)
        """
        issues = self.collect_issues(program)
        if issues:
            return False, [issue.message for issue in issues]
        return True, ["Program validation successful"]

    def ensure_valid(self, program: Program) -> bool:
        """Raise the first validation issue as its typed error."""
        issues = self.collect_issues(program)
        if issues:
            issues[0].raise_error()
        return True
