"""Flow records, JSONL storage, deduplication and labeling."""

from .flow_record import ILLEGAL, LABELS, LEGAL, UNLABELED, FlowRecord
from .flow_store import (
    SCHEMA_VERSION,
    FlowStore,
    dedup_flows,
    export_flows,
    import_flows,
    read_flow_file,
)
from .labeling import (
    LabelRule,
    label_flows,
    match_pattern,
    parse_label_manifest,
    read_label_manifest,
    summarize_labels,
)

__all__ = [
    "ILLEGAL",
    "LABELS",
    "LEGAL",
    "UNLABELED",
    "FlowRecord",
    "SCHEMA_VERSION",
    "FlowStore",
    "dedup_flows",
    "export_flows",
    "import_flows",
    "read_flow_file",
    "LabelRule",
    "label_flows",
    "match_pattern",
    "parse_label_manifest",
    "read_label_manifest",
    "summarize_labels",
]
