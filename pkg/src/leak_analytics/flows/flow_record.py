"""Persisted form of a sink reach."""

from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional, Tuple

from ..errors import FlowFormatError

UNLABELED = "unlabeled"
LEGAL = "legal"
ILLEGAL = "illegal"
LABELS = (UNLABELED, LEGAL, ILLEGAL)

_FIELDS = {
    "appId": str,
    "component": str,
    "trace": list,
    "sinkApi": str,
    "url": str,
    "urlTemplate": str,
    "carriedTaint": list,
    "sensitive": bool,
    "pathConstraint": str,
    "label": str,
    "hostnameDecrypted": bool,
    "provenance": list,
}


@dataclass(frozen=True)
class FlowRecord:
    """One deduplicated transmission of an app.

    ``provenance`` lists every trace that reached the same URL, the record's
    own trace first.
    """

    app_id: str
    component: str
    trace: Tuple[str, ...]
    sink_api: str
    url: str
    url_template: str
    carried_taint: Tuple[str, ...] = ()
    sensitive: bool = False
    path_constraint: str = "true"
    label: str = UNLABELED
    hostname_decrypted: bool = False
    provenance: Tuple[Tuple[str, ...], ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "trace", tuple(self.trace))
        object.__setattr__(self, "carried_taint", tuple(sorted(set(self.carried_taint))))
        provenance = tuple(tuple(t) for t in self.provenance) or (self.trace,)
        object.__setattr__(self, "provenance", provenance)
        if self.sensitive != bool(self.carried_taint):
            raise ValueError(
                f"Flow {self.url!r}: sensitive={self.sensitive} contradicts taint {self.carried_taint}"
            )
        if self.label not in LABELS:
            raise ValueError(f"Unknown label {self.label!r}, expected one of {LABELS}")

    @classmethod
    def from_event(cls, app_id: str, event) -> "FlowRecord":
        """Convert an executor SinkEvent."""
        return cls(
            app_id=app_id,
            component=event.component,
            trace=event.trace.callbacks,
            sink_api=event.sink_api,
            url=event.url,
            url_template=event.url_template,
            carried_taint=tuple(event.carried_taint),
            sensitive=event.sensitive,
            path_constraint=event.path_constraint.describe(),
            hostname_decrypted=event.hostname_decrypted,
        )

    def with_label(self, label: str) -> "FlowRecord":
        return replace(self, label=label)

    def to_json(self) -> Dict[str, Any]:
        return {
            "appId": self.app_id,
            "component": self.component,
            "trace": list(self.trace),
            "sinkApi": self.sink_api,
            "url": self.url,
            "urlTemplate": self.url_template,
            "carriedTaint": list(self.carried_taint),
            "sensitive": self.sensitive,
            "pathConstraint": self.path_constraint,
            "label": self.label,
            "hostnameDecrypted": self.hostname_decrypted,
            "provenance": [list(t) for t in self.provenance],
        }

    @classmethod
    def from_json(cls, data: Any, line_number: Optional[int] = None) -> "FlowRecord":
        """Rebuild a record from its JSON object.

        Raises:
            FlowFormatError: Missing key, wrong type or inconsistent record
        """
        if not isinstance(data, dict):
            raise FlowFormatError("flow record must be a JSON object", line_number)
        for key, expected in _FIELDS.items():
            if key not in data:
                raise FlowFormatError(f"missing key '{key}'", line_number)
            if not isinstance(data[key], expected):
                raise FlowFormatError(
                    f"key '{key}' must be {expected.__name__}, got {type(data[key]).__name__}",
                    line_number,
                )
        try:
            return cls(
                app_id=data["appId"],
                component=data["component"],
                trace=tuple(data["trace"]),
                sink_api=data["sinkApi"],
                url=data["url"],
                url_template=data["urlTemplate"],
                carried_taint=tuple(data["carriedTaint"]),
                sensitive=data["sensitive"],
                path_constraint=data["pathConstraint"],
                label=data["label"],
                hostname_decrypted=data["hostnameDecrypted"],
                provenance=tuple(tuple(t) for t in data["provenance"]),
            )
        except (TypeError, ValueError) as e:
            raise FlowFormatError(str(e), line_number)
