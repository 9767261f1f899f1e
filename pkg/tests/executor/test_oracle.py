"""Cross-checks of the concolic executor against concrete enumeration."""

import itertools
import unittest

from leak_analytics.appmodel import default_catalog, parse_program
from leak_analytics.benchmark import load_corpus
from leak_analytics.executor import (
    ConcreteEnumerationExecutor,
    ExecutionTrace,
    OracleScopeExceeded,
    ValueType,
    analyze_app,
    value_domains,
)
from leak_analytics.executor.constraints import atom_symbol_type

MAX_ASSIGNMENTS = 20000

TYPE_DOMAINS = {"int": ValueType.INT, "string": ValueType.STRING, "bool": ValueType.BOOL}


def leak_keys(result):
    return {
        (event.component, event.position.line, tuple(sorted(event.carried_taint)))
        for event in result.sensitive_events
    }


class TestOracleAgreement(unittest.TestCase):
    """Concolic and enumerated runs report the same leaks."""

    def setUp(self):
        """Load the corpus programs."""
        self.catalog = default_catalog()
        self.programs = [
            (case.id, parse_program(case.aml_path.read_text(encoding="utf-8")))
            for case in load_corpus()
        ]

    def test_same_leaks_on_small_programs(self):
        """Test leak agreement wherever the oracle can enumerate every unknown."""
        compared = []
        for case_id, program in self.programs:
            oracle = ConcreteEnumerationExecutor(self.catalog)
            try:
                expected = analyze_app(program, self.catalog, executor=oracle)
            except OracleScopeExceeded:
                continue
            actual = analyze_app(program, self.catalog)
            with self.subTest(case=case_id):
                self.assertEqual(leak_keys(actual), leak_keys(expected))
            compared.append(case_id)

        self.assertGreaterEqual(len(compared), 20)
        self.assertIn("TimeBomb1", compared)
        self.assertIn("InfeasibleTrap2", compared)
        self.assertNotIn("LoopBomb1", compared)

    def test_pruned_paths_have_no_witness(self):
        """Test that every pruned constraint is unsatisfiable over the program's domains."""
        checked = 0
        for case_id, program in self.programs:
            domains = value_domains(program)
            result = analyze_app(program, self.catalog)
            for _, stats in result.trace_stats:
                for constraint in stats.pruned_constraints:
                    types = {}
                    for atom in constraint.conjuncts:
                        for symbol in atom.symbols():
                            types[symbol] = TYPE_DOMAINS[atom_symbol_type(atom)]
                    symbols = list(types)
                    choices = [domains[types[symbol]] for symbol in symbols]
                    size = 1
                    for choice in choices:
                        size *= len(choice)
                    if size > MAX_ASSIGNMENTS:
                        continue
                    witness = any(
                        constraint.evaluate(dict(zip(symbols, values)))
                        for values in itertools.product(*choices)
                    )
                    with self.subTest(case=case_id, constraint=constraint.describe()):
                        self.assertFalse(witness)
                    checked += 1
        self.assertGreater(checked, 0)


class TestConcreteRuns(unittest.TestCase):
    """Single concrete runs of the enumeration executor."""

    def setUp(self):
        """Load the loop scenario."""
        self.catalog = default_catalog()
        self.program = parse_program(
            next(case for case in load_corpus() if case.id == "LoopBomb1").aml_path.read_text(
                encoding="utf-8"
            )
        )
        self.trace = ExecutionTrace("WeatherActivity", ("onCreate",))

    def test_short_response_does_not_leak(self):
        """Test that a response of two entries stays below the send threshold."""
        oracle = ConcreteEnumerationExecutor(self.catalog, max_symbols=4)
        # String domain starts null, "", "fresh"
        result = oracle.run_vector(self.program, self.trace, [2, 2, 1, 1])
        self.assertEqual(result.events, [])
        self.assertEqual(result.stats.paths_explored, 1)

    def test_scope_limit(self):
        """Test that more unknowns than the limit raise."""
        oracle = ConcreteEnumerationExecutor(self.catalog)
        with self.assertRaises(OracleScopeExceeded):
            oracle.run_vector(self.program, self.trace, [])

    def test_domains_cover_constants(self):
        """Test that the int domain holds constants and their neighbours."""
        domains = value_domains(self.program)
        for value in (0, 3, 4, 9, 10, 11, 13):
            self.assertIn(value, domains[ValueType.INT])
        self.assertEqual(domains[ValueType.STRING][:3], [None, "", "fresh"])
        self.assertEqual(domains[ValueType.BOOL], [False, True])


if __name__ == "__main__":
    unittest.main()
