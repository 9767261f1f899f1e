"""Exception types raised across the leak analytics pipeline."""

from typing import Optional


class LeakAnalysisError(ValueError):
    """Base class for all pipeline errors."""


class AmlSyntaxError(LeakAnalysisError):
    """Malformed AML source text."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnresolvedApiError(LeakAnalysisError):
    """An API call names neither a catalog entry nor a local method."""

    def __init__(self, api_name: str, line: Optional[int] = None, column: Optional[int] = None):
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"Unresolved API '{api_name}'{where}")
        self.api_name = api_name
        self.line = line
        self.column = column


class DuplicateNameError(LeakAnalysisError):
    """Two components, fields, methods or catalog entries share a name."""


class CatalogError(LeakAnalysisError):
    """Malformed API catalog entry."""


class CallGraphError(LeakAnalysisError):
    """Call graph construction or traversal failed."""


class TraceGenerationError(LeakAnalysisError):
    """An execution trace could not be built from the call graph."""


class AmlRuntimeError(LeakAnalysisError):
    """Evaluation error while interpreting AML (type error, null, bounds)."""


class DecryptMissError(AmlRuntimeError):
    """A decryptTable lookup missed while strict decryption is enabled."""


class FlowFormatError(LeakAnalysisError):
    """Malformed flow file."""

    def __init__(self, message: str, line_number: Optional[int] = None):
        prefix = f"line {line_number}: " if line_number is not None else ""
        super().__init__(f"{prefix}{message}")
        self.line_number = line_number


class ClassifierError(LeakAnalysisError):
    """Invalid classifier input or model file."""


class CorpusError(LeakAnalysisError):
    """Invalid benchmark corpus manifest."""
