"""Tests for the concolic executor on event-ordering, server-command and loop scenarios."""

import unittest

from leak_analytics.appmodel import default_catalog, parse_program
from leak_analytics.benchmark import default_corpus_dir
from leak_analytics.config import AnalysisConfig
from leak_analytics.errors import AmlRuntimeError, DecryptMissError
from leak_analytics.executor import ConcolicExecutor, ExecutionTrace, IsNull, NotNull

LOOP_TWO_WRITES = """
app LoopWrites {
  component Activity C {
    callback onCreate {
      x = getHttpResponse();
      a = 0;
      b = "s";
      while (x[a] != "") {
        a = a + 1;
        b = b + "t";
      }
      if (a == 7) {
        transmit("a");
      }
      if (b == "zz") {
        transmit("b");
      }
    }
  }
}
"""

LOOP_TAINT = """
app LoopTaint {
  component Activity C {
    callback onCreate {
      d = getDeviceId();
      x = getHttpResponse();
      i = 0;
      s = "u=";
      while (x[i] != "") {
        s = s + d;
        i = i + 1;
      }
      transmit(s);
    }
  }
}
"""

CONCRETE_LOOP = """
app Counting {
  component Activity C {
    callback onCreate {
      i = 0;
      while (i > 0) {
        i = i + 1;
      }
      while (i < 3) {
        i = i + 1;
      }
      if (i == 3) {
        transmit("done");
      }
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
    }
    callback onDestroy {
      sendHttpRequest("tracker.example.net/?u=" + url);
    }
  }
}
"""

RELAY_ON_ONE_PATH = """
app RelayOnOnePath {
  component Activity C {
    field url: string = "";
    callback onCreate {
      on = isWifiEnabled();
      d = getDeviceId();
      url = "h.example.com/?id=" + d;
      if (on) {
        conn = openConnection(url);
      }
    }
  }
}
"""

NESTED_UNKNOWNS = """
app NestedUnknowns {
  component Activity C {
    callback onCreate {
      on = isWifiEnabled();
      level = getBatteryLevel();
      id = getDeviceId();
      if (on) {
        x = 1;
      }
      if (level > 50) {
        x = 2;
      } else {
        transmit("depth.example.com/?d=" + id);
      }
    }
  }
}
"""


def load(case_id):
    text = (default_corpus_dir() / f"{case_id}.aml").read_text(encoding="utf-8")
    return parse_program(text)


class TestEventOrdering(unittest.TestCase):
    """Test cases for the click/low-memory component."""

    def setUp(self):
        """Set up the program, executor and base trace."""
        self.program = load("EventOrdering1")
        self.executor = ConcolicExecutor(default_catalog(), AnalysisConfig())
        self.base = ExecutionTrace("Activity1", ("onCreate", "onClick"))

    def test_click_taints_tmp(self):
        """Test that the click only taints tmp."""
        result = self.executor.execute_trace(self.program, self.base)
        self.assertEqual(result.events, [])
        self.assertEqual(result.newly_tainted, frozenset({"Activity1.tmp"}))
        self.assertEqual(result.stats.paths_explored, 1)

    def test_first_low_memory_sends_empty_imei(self):
        """Test that the first onLowMemory sends the bare host and taints imei."""
        result = self.executor.execute_trace(self.program, self.base.extend("onLowMemory"))
        self.assertEqual(len(result.events), 1)
        event = result.events[0]
        self.assertFalse(event.sensitive)
        self.assertEqual(event.url, "gongfu188.com")
        self.assertEqual(event.sink_api, "openConnection")
        self.assertEqual(result.newly_tainted, frozenset({"Activity1.imei"}))

    def test_second_low_memory_leaks_imei(self):
        """Test that the second onLowMemory sends the IMEI."""
        trace = self.base.extend("onLowMemory").extend("onLowMemory")
        result = self.executor.execute_trace(self.program, trace)
        sensitive = [event for event in result.events if event.sensitive]
        self.assertEqual(len(sensitive), 1)
        event = sensitive[0]
        self.assertEqual(event.carried_taint, frozenset({"IMEI"}))
        self.assertEqual(event.url, "gongfu188.com358240051111110")
        self.assertEqual(event.url_template, "gongfu188.com<IMEI>")
        self.assertEqual(result.newly_tainted, frozenset({"Activity1.url"}))
        self.assertEqual(result.transmitted_by, {"Activity1.url": frozenset({"onLowMemory"})})

    def test_relayed_field_records_sender(self):
        """Test that a field sent by one callback keeps its taint for other readers."""
        program = parse_program(RELAY)
        trace = ExecutionTrace("C", ("onCreate", "onClick"))
        result = self.executor.execute_trace(program, trace)
        self.assertEqual(result.newly_tainted, frozenset({"C.url"}))
        self.assertEqual(result.transmitted_by, {"C.url": frozenset({"onClick"})})

    def test_sender_kept_only_when_sent_on_every_path(self):
        """Test that a field sent on one path but not the other has no sender."""
        program = parse_program(RELAY_ON_ONE_PATH)
        result = self.executor.execute_trace(program, ExecutionTrace("C", ("onCreate",)))
        self.assertEqual(result.stats.paths_explored, 2)
        self.assertEqual(result.newly_tainted, frozenset({"C.url"}))
        self.assertEqual(result.transmitted_by, {"C.url": frozenset()})

    def test_unknown_callback(self):
        """Test a trace naming a callback the component lacks."""
        with self.assertRaises(AmlRuntimeError):
            self.executor.execute_trace(self.program, ExecutionTrace("Activity1", ("onCreate", "onPause")))


class TestServerCommand(unittest.TestCase):
    """Test cases for the null-checked server command."""

    def setUp(self):
        """Set up the program and its single trace."""
        self.program = load("DroidKunfu1")
        self.executor = ConcolicExecutor(default_catalog())
        self.trace = ExecutionTrace("SearchService", ("onCreate",))

    def test_two_feasible_paths(self):
        """Test that the nested then-branch is pruned."""
        result = self.executor.execute_trace(self.program, self.trace)
        stats = result.stats
        self.assertEqual(stats.paths_explored, 2)
        self.assertEqual(stats.paths_pruned, 1)
        self.assertEqual(stats.forks, 1)
        pruned = stats.pruned_constraints[0].conjuncts
        self.assertEqual(pruned, (IsNull(1), NotNull(1)))

    def test_leak_under_null_command(self):
        """Test the one leak and its path constraint."""
        result = self.executor.execute_trace(self.program, self.trace)
        self.assertEqual(len(result.events), 1)
        event = result.events[0]
        self.assertEqual(event.url_template, "ad.kunfu-report.com/state?s=1&imei=<IMEI>")
        self.assertEqual(event.path_constraint.conjuncts, (IsNull(1),))
        self.assertEqual(event.path_constraint.describe(), "$1 == null")

    def test_snapshot_restores_saved_state(self):
        """Test that every resumed snapshot matches its saved hash."""
        stats = self.executor.execute_trace(self.program, self.trace).stats
        self.assertEqual(stats.snapshot_checks, 1)
        self.assertEqual(stats.snapshot_mismatches, 0)

    def test_path_budget(self):
        """Test that the path budget stops exploration and is reported."""
        executor = ConcolicExecutor(default_catalog(), AnalysisConfig(max_paths_per_trace=1))
        stats = executor.execute_trace(self.program, self.trace).stats
        self.assertEqual(stats.paths_explored, 1)
        self.assertTrue(stats.budget_exceeded)


class TestUnknownDepth(unittest.TestCase):
    """Test cases for the unknown-branch depth limit."""

    def setUp(self):
        """Set up the program and its single trace."""
        self.program = parse_program(NESTED_UNKNOWNS)
        self.trace = ExecutionTrace("C", ("onCreate",))

    def test_all_directions_within_limit(self):
        """Test that both unknown branches fork under the default limit."""
        result = ConcolicExecutor(default_catalog()).execute_trace(self.program, self.trace)
        self.assertEqual(result.stats.paths_explored, 4)
        self.assertEqual(result.stats.depth_limited, 0)
        self.assertFalse(result.stats.budget_exceeded)
        self.assertEqual(len([e for e in result.events if e.sensitive]), 2)

    def test_depth_limit_is_a_budget_hit(self):
        """Test that dropping else-directions at the depth limit is reported."""
        executor = ConcolicExecutor(default_catalog(), AnalysisConfig(max_unknown_depth=1))
        result = executor.execute_trace(self.program, self.trace)
        self.assertEqual(result.events, [])
        self.assertEqual(result.stats.paths_explored, 2)
        self.assertEqual(result.stats.depth_limited, 2)
        self.assertTrue(result.stats.budget_exceeded)


class TestLoops(unittest.TestCase):
    """Test cases for loops over unknown data."""

    def setUp(self):
        """Set up the executor."""
        self.executor = ConcolicExecutor(default_catalog())

    def test_response_length_loop_reaches_transmit(self):
        """Test that the loop counter becomes unknown and the send is reached."""
        program = load("LoopBomb1")
        result = self.executor.execute_trace(program, ExecutionTrace("WeatherActivity", ("onCreate",)))
        self.assertEqual(result.stats.loops_symbolized, 1)
        self.assertEqual(result.stats.paths_explored, 3)
        self.assertEqual(len(result.events), 1)
        event = result.events[0]
        self.assertEqual(event.carried_taint, frozenset({"LOCATION_LON", "LOCATION_LAT"}))
        self.assertEqual(event.url, "-122.084&37.422")
        self.assertEqual(event.url_template, "<LOCATION_LON>&<LOCATION_LAT>")

    def test_concrete_loops_run_normally(self):
        """Test that known conditions never symbolize."""
        program = parse_program(CONCRETE_LOOP)
        result = self.executor.execute_trace(program, ExecutionTrace("C", ("onCreate",)))
        self.assertEqual(result.stats.loops_symbolized, 0)
        self.assertEqual(result.stats.forks, 0)
        self.assertEqual([event.url for event in result.events], ["done"])

    def test_all_written_variables_rebound(self):
        """Test that both loop-written variables become unknown."""
        program = parse_program(LOOP_TWO_WRITES)
        stats = self.executor.execute_trace(program, ExecutionTrace("C", ("onCreate",))).stats
        self.assertEqual(stats.loops_symbolized, 1)
        self.assertEqual(stats.forks, 3)
        self.assertEqual(stats.paths_explored, 4)

    def test_loop_summary_keeps_body_taint(self):
        """Test that a value built in the body keeps its taint."""
        program = parse_program(LOOP_TAINT)
        result = self.executor.execute_trace(program, ExecutionTrace("C", ("onCreate",)))
        (event,) = result.events
        self.assertEqual(event.carried_taint, frozenset({"IMEI"}))
        self.assertEqual(event.url, "(.*)")
        self.assertEqual(event.url_template, "<IMEI>")

    def test_concrete_loop_guard(self):
        """Test that a runaway concrete loop aborts only its path."""
        program = parse_program(
            "app Spin { component Activity C { callback onCreate { i = 0; while (i >= 0) { i = i + 1; } } } }"
        )
        executor = ConcolicExecutor(default_catalog(), AnalysisConfig(max_loop_iterations=10))
        stats = executor.execute_trace(program, ExecutionTrace("C", ("onCreate",))).stats
        self.assertEqual(stats.aborted_paths, 1)
        self.assertEqual(stats.paths_explored, 0)


class TestEnvironmentScenarios(unittest.TestCase):
    """Test cases for modelled environment behaviour inside apps."""

    def setUp(self):
        """Set up the executor."""
        self.executor = ConcolicExecutor(default_catalog())

    def test_decrypted_hostname(self):
        """Test that a decrypted host is flagged on the event."""
        program = load("EncryptedHost1")
        component = program.components[0]
        result = self.executor.execute_trace(program, ExecutionTrace(component.name, ("onCreate",)))
        sensitive = [event for event in result.events if event.sensitive]
        self.assertTrue(sensitive)
        self.assertTrue(all(event.hostname_decrypted for event in sensitive))
        self.assertTrue(sensitive[0].url.startswith("xml.meego91.com"))

    def test_strict_decrypt_miss(self):
        """Test that strict mode fails the trace on a table miss."""
        program = parse_program(
            'app Miss { component Activity C { callback onCreate { h = decrypt("zzz"); transmit(h); } } }'
        )
        executor = ConcolicExecutor(default_catalog(), AnalysisConfig(strict_decrypt=True))
        with self.assertRaises(DecryptMissError):
            executor.execute_trace(program, ExecutionTrace("C", ("onCreate",)))

    def test_forced_connection_check(self):
        """Test that an isConnected guard never forks."""
        program = load("NetworkGuard")
        component = program.components[0]
        trace = ExecutionTrace(component.name, ("onCreate", "onResume"))
        result = self.executor.execute_trace(program, trace)
        self.assertEqual(result.stats.forks, 0)
        self.assertEqual([event.url_template for event in result.events], ["gad.ju6666.com/GetAd?&la=<LOCATION_LAT>"])


if __name__ == "__main__":
    unittest.main()
