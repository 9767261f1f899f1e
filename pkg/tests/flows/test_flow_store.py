"""Tests for flow records, JSONL storage and deduplication."""

import json
import tempfile
import unittest
from pathlib import Path

from hypothesis import given, settings
from hypothesis import strategies as st

from leak_analytics.appmodel import default_catalog, parse_program
from leak_analytics.errors import FlowFormatError
from leak_analytics.executor import analyze_app
from leak_analytics.flows import (
    SCHEMA_VERSION,
    FlowRecord,
    FlowStore,
    dedup_flows,
    export_flows,
    import_flows,
    read_flow_file,
)

TWO_PATHS = """
app TwoPaths {
  component Activity C {
    callback onCreate {
      on = isWifiEnabled();
      id = getDeviceId();
      if (on) {
        transmit("track.example.com/?d=" + id);
      } else {
        transmit("track.example.com/?d=" + id);
      }
    }
  }
}
"""


def make_record(url="a.com/x", app_id="App", taint=("IMEI",), trace=("onCreate",)):
    return FlowRecord(
        app_id=app_id,
        component="C",
        trace=trace,
        sink_api="transmit",
        url=url,
        url_template=url,
        carried_taint=taint,
        sensitive=bool(taint),
    )


class TestFlowRecord(unittest.TestCase):
    """Test cases for FlowRecord."""

    def test_taint_is_sorted_and_unique(self):
        """Test that carried taint is normalised."""
        record = make_record(taint=("IMEI", "ANDROID_ID", "IMEI"))
        self.assertEqual(record.carried_taint, ("ANDROID_ID", "IMEI"))

    def test_sensitive_must_match_taint(self):
        """Test that sensitive=False with taint is rejected."""
        with self.assertRaises(ValueError):
            FlowRecord("A", "C", ("onCreate",), "transmit", "u", "u", ("IMEI",), False)

    def test_unknown_label(self):
        """Test that labels are restricted."""
        with self.assertRaises(ValueError):
            make_record().with_label("maybe")

    def test_provenance_defaults_to_trace(self):
        """Test that a fresh record names its own trace."""
        self.assertEqual(make_record().provenance, (("onCreate",),))

    def test_json_keys(self):
        """Test the camelCase JSON form."""
        data = make_record().to_json()
        self.assertEqual(
            sorted(data),
            sorted([
                "appId", "component", "trace", "sinkApi", "url", "urlTemplate", "carriedTaint",
                "sensitive", "pathConstraint", "label", "hostnameDecrypted", "provenance",
            ]),
        )
        self.assertEqual(data["label"], "unlabeled")
        self.assertEqual(FlowRecord.from_json(data), make_record())

    def test_from_json_errors(self):
        """Test missing keys and wrong types."""
        data = make_record().to_json()
        del data["url"]
        with self.assertRaisesRegex(FlowFormatError, "line 4: missing key 'url'"):
            FlowRecord.from_json(data, 4)
        data = make_record().to_json()
        data["sensitive"] = "yes"
        with self.assertRaisesRegex(FlowFormatError, "key 'sensitive' must be bool"):
            FlowRecord.from_json(data)


class TestDedup(unittest.TestCase):
    """Test cases for URL deduplication."""

    def test_two_paths_one_url(self):
        """Test that two paths sending the same URL give one record."""
        result = analyze_app(parse_program(TWO_PATHS), default_catalog())
        store = FlowStore()
        store.add_analysis(result)
        records = store.deduplicated()
        self.assertEqual(len(records), 1)
        self.assertEqual(records[0].url, "track.example.com/?d=358240051111110")
        self.assertEqual(records[0].url_template, "track.example.com/?d=<IMEI>")

    def test_provenance_merges(self):
        """Test that merged traces are appended once, in order."""
        records = [
            make_record(trace=("onCreate",)),
            make_record(trace=("onCreate", "onStart")),
            make_record(trace=("onCreate",)),
        ]
        merged = dedup_flows(records)
        self.assertEqual(len(merged), 1)
        self.assertEqual(merged[0].provenance, (("onCreate",), ("onCreate", "onStart")))

    def test_apps_never_merge(self):
        """Test that equal URLs of different apps stay separate."""
        merged = dedup_flows([make_record(app_id="A"), make_record(app_id="B"), make_record("b.com")])
        self.assertEqual([(r.app_id, r.url) for r in merged], [("A", "a.com/x"), ("B", "a.com/x"), ("A", "b.com")])

    @given(
        st.lists(
            st.tuples(st.sampled_from(["A", "B"]), st.sampled_from(["a.com", "b.com", "c.com"]), st.sampled_from(["onStart", "onResume"])),
            max_size=12,
        )
    )
    @settings(max_examples=100, deadline=None)
    def test_idempotent(self, rows):
        """Test that deduplicating twice changes nothing and keeps one record per app and URL."""
        records = [make_record(url, app_id, trace=("onCreate", callback)) for app_id, url, callback in rows]
        once = dedup_flows(records)
        self.assertEqual(dedup_flows(once), once)
        self.assertEqual(len(once), len({(app_id, url) for app_id, url, _ in rows}))


class TestFlowFiles(unittest.TestCase):
    """Test cases for JSONL import and export."""

    def setUp(self):
        """Create a scratch directory."""
        self.tmp = tempfile.TemporaryDirectory()
        self.path = Path(self.tmp.name) / "flows.jsonl"

    def tearDown(self):
        """Remove the scratch directory."""
        self.tmp.cleanup()

    def test_header_and_records(self):
        """Test that the header comes first and records follow in order."""
        records = [make_record("a.com"), make_record("b.com", taint=())]
        export_flows(records, self.path, partial=True)
        lines = self.path.read_text(encoding="utf-8").splitlines()
        self.assertEqual(json.loads(lines[0]), {"partial": True, "schemaVersion": SCHEMA_VERSION})
        self.assertEqual(len(lines), 3)

        loaded, partial = read_flow_file(self.path)
        self.assertTrue(partial)
        self.assertEqual(loaded, records)
        self.assertEqual(import_flows(self.path), records)

    def test_empty_file_has_header(self):
        """Test that no records still gives a valid file."""
        export_flows([], self.path)
        self.assertEqual(read_flow_file(self.path), ([], False))

    def test_missing_header(self):
        """Test that an empty file is rejected."""
        self.path.write_text("", encoding="utf-8")
        with self.assertRaisesRegex(FlowFormatError, "line 1: missing schema header"):
            import_flows(self.path)

    def test_unknown_version(self):
        """Test that other schema versions are rejected."""
        self.path.write_text('{"schemaVersion": 2}\n', encoding="utf-8")
        with self.assertRaisesRegex(FlowFormatError, "unsupported schema version 2"):
            import_flows(self.path)

    def test_malformed_line(self):
        """Test that the failing line number is reported."""
        export_flows([make_record()], self.path)
        with self.path.open("a", encoding="utf-8") as handle:
            handle.write("{not json\n")
        with self.assertRaises(FlowFormatError) as ctx:
            import_flows(self.path)
        self.assertEqual(ctx.exception.line_number, 3)

    def test_unreadable_file(self):
        """Test that a missing file is a format error."""
        with self.assertRaises(FlowFormatError):
            import_flows(Path(self.tmp.name) / "missing.jsonl")


class TestFlowStore(unittest.TestCase):
    """Test cases for FlowStore."""

    def test_snapshot_isolated_from_appends(self):
        """Test that a snapshot does not see later appends."""
        store = FlowStore([make_record("a.com")])
        snapshot = store.snapshot()
        store.append(make_record("b.com"))
        self.assertEqual(len(snapshot), 1)
        self.assertEqual(len(store), 2)

    def test_rejects_other_objects(self):
        """Test that only records are stored."""
        with self.assertRaises(ValueError):
            FlowStore().append({"url": "a.com"})

    def test_save_and_load(self):
        """Test that save deduplicates and keeps the partial flag."""
        store = FlowStore([make_record("a.com"), make_record("a.com")])
        store.partial = True
        with tempfile.TemporaryDirectory() as tmp:
            path = store.save(Path(tmp) / "out" / "flows.jsonl")
            loaded = FlowStore.load(path)
        self.assertEqual(len(loaded), 1)
        self.assertTrue(loaded.partial)

    def test_frame(self):
        """Test the tabular view."""
        frame = FlowStore([make_record("a.com", taint=("IMEI", "SMS"))]).to_frame()
        self.assertEqual(frame.loc[0, "carriedTaint"], "IMEI+SMS")
        self.assertEqual(frame.loc[0, "traces"], 1)
        self.assertTrue(frame.loc[0, "sensitive"])


if __name__ == "__main__":
    unittest.main()
