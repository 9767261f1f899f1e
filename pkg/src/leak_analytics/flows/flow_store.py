"""Flow storage: JSONL import/export, URL deduplication and an in-memory store."""

import json
import logging
from dataclasses import replace
from pathlib import Path
from typing import Dict, Iterable, List, Tuple, Union

import pandas as pd

from ..errors import FlowFormatError
from .flow_record import FlowRecord

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


def dedup_flows(records: Iterable[FlowRecord]) -> List[FlowRecord]:
    """Collapse records of the same app with the same URL.

    The first record is kept; traces of the merged records are appended to
    its provenance. Records of different apps never merge.

    Args:
        records: Flow records in discovery order

    Returns:
        List[FlowRecord]: One record per (app, URL), in first-seen order
    """
    merged: Dict[Tuple[str, str], FlowRecord] = {}
    for record in records:
        key = (record.app_id, record.url)
        kept = merged.get(key)
        if kept is None:
            merged[key] = record
            continue
        provenance = list(kept.provenance)
        for trace in record.provenance:
            if trace not in provenance:
                provenance.append(trace)
        merged[key] = replace(kept, provenance=tuple(provenance))
    return list(merged.values())


def export_flows(
    records: Iterable[FlowRecord], path: Union[str, Path], partial: bool = False
) -> Path:
    """Write a versioned JSONL flow file.

    Args:
        records: Records to write
        path: Output file
        partial: Whether the analysis stopped on a budget

    Returns:
        Path: The written file
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [json.dumps({"schemaVersion": SCHEMA_VERSION, "partial": partial}, sort_keys=True)]
    lines.extend(
        json.dumps(record.to_json(), sort_keys=True, ensure_ascii=False) for record in records
    )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.debug(f"Wrote {len(lines) - 1} flows to {path}")
    return path


def read_flow_file(path: Union[str, Path]) -> Tuple[List[FlowRecord], bool]:
    """Read a JSONL flow file.

    Returns:
        Tuple[List[FlowRecord], bool]: Records and the header's partial flag

    Raises:
        FlowFormatError: Missing or unknown header, or a malformed line
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise FlowFormatError(f"cannot read {path}: {e}")
    lines = text.split("\n")
    if not lines or not lines[0].strip():
        raise FlowFormatError("missing schema header", 1)

    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as e:
        raise FlowFormatError(f"malformed schema header: {e}", 1)
    version = header.get("schemaVersion") if isinstance(header, dict) else None
    if version != SCHEMA_VERSION:
        raise FlowFormatError(f"unsupported schema version {version!r}", 1)

    records = []
    for number, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            data = json.loads(line)
        except json.JSONDecodeError as e:
            raise FlowFormatError(f"malformed JSON: {e.msg}", number)
        records.append(FlowRecord.from_json(data, number))
    return records, bool(header.get("partial", False))


def import_flows(path: Union[str, Path]) -> List[FlowRecord]:
    """Read the records of a JSONL flow file."""
    return read_flow_file(path)[0]


class FlowStore:
    """Append-only collection of flow records.

    Analyses append while readers take snapshots; a snapshot is an immutable
    tuple and never observes later appends.
    """

    def __init__(self, records: Iterable[FlowRecord] = ()):
        self._records: List[FlowRecord] = list(records)
        self.partial = False

    def __len__(self) -> int:
        return len(self._records)

    def append(self, record: FlowRecord):
        if not isinstance(record, FlowRecord):
            raise ValueError("FlowStore only holds FlowRecord instances")
        self._records.append(record)

    def extend(self, records: Iterable[FlowRecord]):
        for record in records:
            self.append(record)

    def add_analysis(self, result) -> int:
        """Append the events of an AnalysisResult; returns the number added."""
        records = [FlowRecord.from_event(result.app, event) for event in result.events]
        self.extend(records)
        self.partial = self.partial or result.budget_exceeded
        return len(records)

    def snapshot(self) -> Tuple[FlowRecord, ...]:
        return tuple(self._records)

    def deduplicated(self) -> List[FlowRecord]:
        return dedup_flows(self._records)

    def save(self, path: Union[str, Path], dedup: bool = True) -> Path:
        records = self.deduplicated() if dedup else self.snapshot()
        return export_flows(records, path, partial=self.partial)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "FlowStore":
        records, partial = read_flow_file(path)
        store = cls(records)
        store.partial = partial
        return store

    def to_frame(self) -> pd.DataFrame:
        """Tabular view, one row per record."""
        rows = [
            {
                "appId": r.app_id,
                "component": r.component,
                "sinkApi": r.sink_api,
                "url": r.url,
                "urlTemplate": r.url_template,
                "carriedTaint": "+".join(r.carried_taint),
                "sensitive": r.sensitive,
                "label": r.label,
                "hostnameDecrypted": r.hostname_decrypted,
                "traces": len(r.provenance),
            }
            for r in self._records
        ]
        columns = [
            "appId", "component", "sinkApi", "url", "urlTemplate", "carriedTaint",
            "sensitive", "label", "hostnameDecrypted", "traces",
        ]
        return pd.DataFrame(rows, columns=columns)
