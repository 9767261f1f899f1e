"""Tests for modelled environment APIs."""

import unittest

from leak_analytics.appmodel import default_catalog, load_api_catalog
from leak_analytics.config import AnalysisConfig
from leak_analytics.errors import DecryptMissError
from leak_analytics.executor import Concrete, Symbolic, ValueType, eval_env_call
from leak_analytics.executor.values import string


class TestEnvironmentCalls(unittest.TestCase):
    """Test cases for eval_env_call."""

    def setUp(self):
        """Set up the catalog and a counting symbol factory."""
        self.catalog = default_catalog()
        self.config = AnalysisConfig()
        self.created = []

    def fresh(self, value_type, origin, api, taint):
        symbol = Symbolic(len(self.created) + 1, value_type, origin, frozenset(taint))
        self.created.append(symbol)
        return symbol

    def call(self, api, *args, config=None):
        return eval_env_call(self.catalog.spec(api), args, self.fresh, config or self.config)

    def test_decrypt_hit(self):
        """Test decryption of a known hostname."""
        value = self.call("decrypt", string("ax3mkl4mgele2guoo9f1hc3ohm"))
        self.assertEqual(value.payload, "xml.meego91.com")
        self.assertTrue(value.decrypted)
        self.assertEqual(self.created, [])

    def test_decrypt_keeps_argument_taint(self):
        """Test that the plaintext keeps the ciphertext's taint."""
        value = self.call("decrypt", string("q7h2kd93jf8s", {"SMS"}))
        self.assertEqual(value.payload, "log.gemini-stat.com")
        self.assertEqual(value.taint, frozenset({"SMS"}))

    def test_decrypt_miss(self):
        """Test a table miss in lenient and strict mode."""
        value = self.call("decrypt", string("unknown"))
        self.assertIsInstance(value, Symbolic)
        self.assertTrue(value.decrypted)
        with self.assertRaises(DecryptMissError):
            self.call("decrypt", string("unknown"), config=AnalysisConfig(strict_decrypt=True))

    def test_forced_true(self):
        """Test that isConnected is always true."""
        self.assertEqual(self.call("isConnected"), Concrete(ValueType.BOOL, True))

    def test_symbolic_string(self):
        """Test a fresh device-status string for the display name."""
        value = self.call("getDisplayName")
        self.assertIsInstance(value, Symbolic)
        self.assertEqual(value.type, ValueType.STRING)
        self.assertEqual(value.origin, "deviceStatus")

    def test_symbolic_array(self):
        """Test an array of fresh strings sized by the configuration."""
        value = self.call("getHttpResponse", config=AnalysisConfig(symbolic_array_len=3))
        self.assertEqual(value.type, ValueType.STRING_ARRAY)
        self.assertEqual(len(value.payload), 3)
        self.assertTrue(all(isinstance(item, Symbolic) for item in value.payload))

    def test_fixed_value(self):
        """Test a stubbed library call."""
        self.assertEqual(self.call("loadImage").payload, "bitmap")

    def test_fixed_value_int(self):
        """Test a stubbed int in a custom catalog."""
        catalog = load_api_catalog("getVersion : env(fixedValue(21))")
        value = eval_env_call(catalog.spec("getVersion"), (), self.fresh, self.config)
        self.assertEqual((value.type, value.payload), (ValueType.INT, 21))


if __name__ == "__main__":
    unittest.main()
