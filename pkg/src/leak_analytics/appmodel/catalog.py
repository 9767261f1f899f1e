"""API catalog: sources, sinks and environment calls known to the analyzer."""

import json
import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from importlib import resources
from typing import Any, Dict, Iterator, Optional, Tuple

from ..errors import CatalogError, DuplicateNameError

logger = logging.getLogger(__name__)

SYMBOL_ORIGINS = (
    "userInput",
    "deviceStatus",
    "naturalEnvironment",
    "incomingInfo",
    "loopSummary",
)

VALUE_TYPES = ("string", "int", "bool", "string[]")

# Deterministic payloads returned by source APIs
DEFAULT_SOURCE_SAMPLES = {
    "IMEI": "358240051111110",
    "IMSI": "310260000000000",
    "LOCATION_LON": "-122.084",
    "LOCATION_LAT": "37.422",
    "PHONE_NUMBER": "15555215554",
    "SMS": "sms-body",
    "DEVICE_LOCALE": "en_US",
    "ANDROID_ID": "9774d56d682e549c",
    "CONTACTS": "contact-list",
}

_DATA_TYPE = re.compile(r"^[A-Z][A-Z0-9_]*$")
_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_ENTRY = re.compile(r"^(?P<name>[^:\s]+)\s*:\s*(?P<spec>.+)$")


class ApiKind(Enum):
    SOURCE = "source"
    SINK = "sink"
    ENV = "env"


class EnvBehaviorKind(Enum):
    FIXED_VALUE = "fixedValue"
    SYMBOLIC = "symbolic"
    DECRYPT_TABLE = "decryptTable"
    FORCED_TRUE = "forcedTrue"
    SYMBOLIC_ARRAY = "symbolicArray"


@dataclass(frozen=True)
class EnvBehavior:
    kind: EnvBehaviorKind
    value: Any = None
    value_type: Optional[str] = None
    origin: Optional[str] = None
    table: Tuple[Tuple[str, str], ...] = ()
    element_count: Optional[int] = None

    def lookup(self, key: str) -> Optional[str]:
        return dict(self.table).get(key)


@dataclass(frozen=True)
class ApiSpec:
    name: str
    kind: ApiKind
    data_type: Optional[str] = None
    sample: Optional[str] = None
    behavior: Optional[EnvBehavior] = None

    @property
    def is_source(self) -> bool:
        return self.kind is ApiKind.SOURCE

    @property
    def is_sink(self) -> bool:
        return self.kind is ApiKind.SINK

    @property
    def is_env(self) -> bool:
        return self.kind is ApiKind.ENV


@dataclass(frozen=True)
class ApiCatalog:
    name: str
    entries: Dict[str, ApiSpec] = field(default_factory=dict)

    def __contains__(self, api_name: str) -> bool:
        return api_name in self.entries

    def __iter__(self) -> Iterator[ApiSpec]:
        return iter(self.entries.values())

    def get(self, api_name: str) -> Optional[ApiSpec]:
        return self.entries.get(api_name)

    def spec(self, api_name: str) -> ApiSpec:
        try:
            return self.entries[api_name]
        except KeyError:
            raise CatalogError(f"API '{api_name}' is not in catalog '{self.name}'")

    def is_source(self, api_name: str) -> bool:
        spec = self.get(api_name)
        return spec is not None and spec.is_source

    def is_sink(self, api_name: str) -> bool:
        spec = self.get(api_name)
        return spec is not None and spec.is_sink


def _parse_behavior(text: str, line_number: int) -> EnvBehavior:
    match = re.match(r"^(\w+)\s*(?:\((.*)\))?$", text.strip(), re.DOTALL)
    if not match:
        raise CatalogError(f"line {line_number}: malformed env behavior {text!r}")
    name, argument = match.group(1), (match.group(2) or "").strip()
    try:
        kind = EnvBehaviorKind(name)
    except ValueError:
        raise CatalogError(f"line {line_number}: unknown env behavior {name!r}")

    if kind is EnvBehaviorKind.FORCED_TRUE:
        if argument:
            raise CatalogError(f"line {line_number}: forcedTrue takes no argument")
        return EnvBehavior(kind, value=True, value_type="bool")

    if kind is EnvBehaviorKind.FIXED_VALUE:
        try:
            value = json.loads(argument)
        except json.JSONDecodeError:
            raise CatalogError(f"line {line_number}: fixedValue needs a literal, got {argument!r}")
        if isinstance(value, bool):
            value_type = "bool"
        elif isinstance(value, int):
            value_type = "int"
        elif value is None or isinstance(value, str):
            value_type = "string"
        else:
            raise CatalogError(f"line {line_number}: unsupported fixedValue literal {argument!r}")
        return EnvBehavior(kind, value=value, value_type=value_type)

    if kind is EnvBehaviorKind.SYMBOLIC:
        parts = [part.strip() for part in argument.split(",") if part.strip()]
        if not parts or parts[0] not in VALUE_TYPES:
            raise CatalogError(f"line {line_number}: symbolic needs a type in {VALUE_TYPES}")
        origin = parts[1] if len(parts) > 1 else "deviceStatus"
        if origin not in SYMBOL_ORIGINS or len(parts) > 2:
            raise CatalogError(f"line {line_number}: bad symbolic origin {argument!r}")
        return EnvBehavior(kind, value_type=parts[0], origin=origin)

    if kind is EnvBehaviorKind.DECRYPT_TABLE:
        try:
            table = json.loads(argument)
        except json.JSONDecodeError:
            raise CatalogError(f"line {line_number}: decryptTable needs a JSON object")
        if not isinstance(table, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in table.items()
        ):
            raise CatalogError(f"line {line_number}: decryptTable maps strings to strings")
        return EnvBehavior(kind, value_type="string", table=tuple(sorted(table.items())))

    # symbolicArray
    count = None
    if argument:
        try:
            count = int(argument)
        except ValueError:
            raise CatalogError(f"line {line_number}: symbolicArray count must be an integer")
        if count < 1:
            raise CatalogError(f"line {line_number}: symbolicArray count must be >= 1")
    return EnvBehavior(kind, value_type="string[]", element_count=count)


def _parse_entry(name: str, spec_text: str, line_number: int) -> ApiSpec:
    spec_text = spec_text.strip()
    if spec_text == "sink":
        return ApiSpec(name, ApiKind.SINK)

    match = re.match(r"^source\s*\(\s*([A-Za-z0-9_]+)\s*(?:,\s*(\".*\"))?\s*\)$", spec_text)
    if match:
        data_type = match.group(1)
        if not _DATA_TYPE.match(data_type):
            raise CatalogError(f"line {line_number}: data type must be upper case, got {data_type!r}")
        sample = json.loads(match.group(2)) if match.group(2) else None
        if sample is None:
            sample = DEFAULT_SOURCE_SAMPLES.get(data_type, f"{data_type.lower()}-0001")
        return ApiSpec(name, ApiKind.SOURCE, data_type=data_type, sample=sample)

    match = re.match(r"^env\s*\((.*)\)$", spec_text, re.DOTALL)
    if match:
        return ApiSpec(name, ApiKind.ENV, behavior=_parse_behavior(match.group(1), line_number))

    raise CatalogError(f"line {line_number}: malformed entry for {name!r}: {spec_text!r}")


def load_api_catalog(text: str, name: str = "custom") -> ApiCatalog:
    """Parse catalog text, one ``name : kind`` entry per line.

    Args:
        text: Catalog source; ``#`` starts a comment outside JSON strings
        name: Identifier recorded on programs parsed against this catalog

    Returns:
        ApiCatalog: Parsed catalog

    Raises:
        CatalogError: Malformed entry
        DuplicateNameError: API declared twice
    """
    entries: Dict[str, ApiSpec] = {}
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        match = _ENTRY.match(line)
        if not match or not _IDENT.match(match.group("name")):
            raise CatalogError(f"line {line_number}: malformed entry {raw!r}")
        api_name = match.group("name")
        if api_name in entries:
            raise DuplicateNameError(f"line {line_number}: API '{api_name}' declared twice")
        entries[api_name] = _parse_entry(api_name, match.group("spec"), line_number)

    logger.debug(f"Loaded catalog '{name}' with {len(entries)} entries")
    return ApiCatalog(name=name, entries=entries)


def _strip_comment(line: str) -> str:
    in_string = False
    escaped = False
    for i, ch in enumerate(line):
        if escaped:
            escaped = False
        elif ch == "\\":
            escaped = True
        elif ch == '"':
            in_string = not in_string
        elif ch == "#" and not in_string:
            return line[:i]
    return line


@lru_cache(maxsize=1)
def default_catalog() -> ApiCatalog:
    """Catalog shipped with the package."""
    text = resources.files(__package__).joinpath("default_catalog.txt").read_text(encoding="utf-8")
    return load_api_catalog(text, name="default")
