"""Tests for the trained model and its JSON file."""

import json
import tempfile
import unittest
from pathlib import Path

from leak_analytics.classifier import LabeledDataset, TrainedModel
from leak_analytics.config import AnalysisConfig
from leak_analytics.errors import ClassifierError
from leak_analytics.flows import FlowRecord

GETAD_PAIRS = [
    ("gad.ju6666.com/GetAd?&lo=<LOCATION_LON>", "illegal"),
    ("gad.ju6666.com/GetAd?&la=<LOCATION_LAT>", "illegal"),
    ("api.openweathermap.org/forecast?&lon=<LOCATION_LON>", "legal"),
    ("api.openweathermap.org/forecast?&lat=<LOCATION_LAT>", "legal"),
]


class TestTrainedModel(unittest.TestCase):
    """Test cases for TrainedModel."""

    def setUp(self):
        """Train on the ad/forecast pairs."""
        self.config = AnalysisConfig(seed=1, min_leaf=1)
        self.model = TrainedModel.train(LabeledDataset.from_pairs(GETAD_PAIRS), self.config)

    def test_single_token_tree(self):
        """Test that the ad path token alone decides."""
        vocab = self.model.vocabulary
        self.assertEqual(
            vocab.tokens,
            (
                "<LOCATION_LAT>", "<LOCATION_LON>", "GetAd", "api", "com", "forecast",
                "gad", "ju6666", "openweathermap", "org",
            ),
        )
        self.assertEqual(self.model.tree.depth, 1)
        self.assertEqual(vocab.tokens[self.model.tree.root.feature], "GetAd")

    def test_predict(self):
        """Test predictions on unseen templates."""
        self.assertEqual(
            self.model.predict(["gad.ju6666.com/GetAd?&id=<IMEI>", "maps.example.org/tiles"]),
            ["illegal", "legal"],
        )
        self.assertEqual(self.model.predict([]), [])

    def test_classify_records(self):
        """Test pairing of records and predictions."""
        record = FlowRecord("A", "C", ("onCreate",), "transmit", "u", "x.com/GetAd?&d=<IMEI>", ("IMEI",), True)
        self.assertEqual(self.model.classify_records([record]), [(record, "illegal")])

    def test_params(self):
        """Test recorded training parameters."""
        self.assertEqual(self.model.params["seed"], 1)
        self.assertEqual(self.model.params["instances"], 4)
        self.assertEqual(self.model.params["mode"], "host")

    def test_save_and_load(self):
        """Test that a reloaded model predicts identically."""
        templates = [template for template, _ in GETAD_PAIRS] + ["other.net/x"]
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "model.json"
            self.model.save(path)
            data = json.loads(path.read_text(encoding="utf-8"))
            loaded = TrainedModel.load(path)
        self.assertEqual(data["format"], "leaksem-model")
        self.assertEqual(data["version"], 1)
        self.assertEqual(loaded.predict(templates), self.model.predict(templates))
        self.assertEqual(loaded.vocabulary, self.model.vocabulary)

    def test_bad_model_files(self):
        """Test format, version and JSON errors."""
        data = self.model.to_dict()
        with self.assertRaises(ClassifierError):
            TrainedModel.from_dict({**data, "format": "other"})
        with self.assertRaises(ClassifierError):
            TrainedModel.from_dict({**data, "version": 9})
        with self.assertRaises(ClassifierError):
            TrainedModel.from_dict({"format": "leaksem-model", "version": 1})
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "broken.json"
            path.write_text("{", encoding="utf-8")
            with self.assertRaises(ClassifierError):
                TrainedModel.load(path)

    def test_training_errors(self):
        """Test empty and seedless training."""
        with self.assertRaises(ClassifierError):
            TrainedModel.train(LabeledDataset((), ()), self.config)
        with self.assertRaises(ValueError):
            TrainedModel.train(LabeledDataset.from_pairs(GETAD_PAIRS), AnalysisConfig())


if __name__ == "__main__":
    unittest.main()
