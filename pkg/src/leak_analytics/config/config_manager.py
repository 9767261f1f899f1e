from pathlib import Path
import copy
import json
import logging
import sys
from dataclasses import dataclass, fields, replace
from typing import Dict, Any, Optional, Union

import yaml

logger = logging.getLogger(__name__)

ANALYSIS_MODES = ("full", "sink-reach")


@dataclass(frozen=True)
class AnalysisConfig:
    """Budgets and knobs shared by the analysis and classification stages."""

    max_traces: int = 64
    max_trace_len: int = 8
    max_paths_per_trace: int = 256
    max_unknown_depth: int = 16
    symbolic_array_len: int = 4
    max_loop_iterations: int = 1024
    max_call_depth: int = 64
    strict_decrypt: bool = False
    mode: str = "full"
    min_df: int = 2
    k: int = 10
    seed: Optional[int] = None
    separators: str = "./?&=:_,;"
    lowercase: bool = False
    max_depth: int = 12
    min_leaf: int = 2
    network_legal_ratio: Optional[float] = None
    workers: int = 1

    def __post_init__(self):
        for name in (
            "max_traces",
            "max_trace_len",
            "max_paths_per_trace",
            "max_unknown_depth",
            "symbolic_array_len",
            "max_loop_iterations",
            "max_call_depth",
            "min_df",
            "k",
            "max_depth",
            "min_leaf",
            "workers",
        ):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"{name} must be an integer >= 1, got {value!r}")
        if self.mode not in ANALYSIS_MODES:
            raise ValueError(f"Unknown analysis mode: {self.mode}")
        if not self.separators:
            raise ValueError("separators must not be empty")
        if self.network_legal_ratio is not None and self.network_legal_ratio <= 0:
            raise ValueError("network_legal_ratio must be positive")

    def with_overrides(self, **overrides: Any) -> "AnalysisConfig":
        """Return a copy with the non-None overrides applied."""
        changes = {key: value for key, value in overrides.items() if value is not None}
        return replace(self, **changes)

    def require_seed(self) -> int:
        """Return the seed, failing loudly for stochastic operations without one."""
        if self.seed is None:
            raise ValueError("A seed is required for stochastic operations")
        return self.seed


class ConfigManager:
    """Manages configuration settings for leak analytics."""

    DEFAULT_CONFIG = {
        "analysis": {
            "max_traces": 64,
            "max_trace_len": 8,
            "max_paths_per_trace": 256,
            "max_unknown_depth": 16,
            "symbolic_array_len": 4,
            "max_loop_iterations": 1024,
            "max_call_depth": 64,
            "strict_decrypt": False,
            "mode": "full",
            "workers": 1,
        },
        "classifier": {
            "min_df": 2,
            "k": 10,
            "seed": None,
            "separators": "./?&=:_,;",
            "lowercase": False,
            "max_depth": 12,
            "min_leaf": 2,
            "network_legal_ratio": None,
        },
        "benchmark": {
            "finding1_test_fraction": 0.5,
            "finding1_repeats": 10,
            "oracle_max_symbols": 3,
        },
        "logging": {
            "level": "WARNING",
            "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        },
    }

    # Flat keys accepted in key=value files and on the command line
    FLAT_KEYS = {
        **{key: f"analysis.{key}" for key in DEFAULT_CONFIG["analysis"]},
        **{key: f"classifier.{key}" for key in DEFAULT_CONFIG["classifier"]},
        "max_paths": "analysis.max_paths_per_trace",
        "log_level": "logging.level",
    }

    def __init__(self, config_path: Optional[Union[str, Path]] = None):
        self.config_path = Path(config_path) if config_path else None
        self.config = self.load_config()

    def load_config(self) -> Dict[str, Any]:
        """Load configuration from file and merge it over the defaults.

        Raises:
            ValueError: If the file does not exist or cannot be parsed
        """
        config = copy.deepcopy(self.DEFAULT_CONFIG)
        if self.config_path is None:
            return config
        if not self.config_path.exists():
            raise ValueError(f"Config file not found: {self.config_path}")

        text = self.config_path.read_text(encoding="utf-8")
        suffix = self.config_path.suffix.lower()
        try:
            if suffix in (".yaml", ".yml"):
                loaded = yaml.safe_load(text) or {}
                self._merge(config, loaded)
            elif suffix == ".json":
                self._merge(config, json.loads(text))
            else:
                for key, value in self._parse_key_values(text).items():
                    self._set(config, key, value)
        except (yaml.YAMLError, json.JSONDecodeError) as e:
            raise ValueError(f"Error loading config {self.config_path}: {e}")

        logger.debug(f"Loaded configuration from {self.config_path}")
        return config

    @classmethod
    def _parse_key_values(cls, text: str) -> Dict[str, Any]:
        values = {}
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"Config line {number} is not key=value: {raw!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            values[key.replace("-", "_")] = cls._coerce(value)
        return values

    @staticmethod
    def _coerce(value: str) -> Any:
        lowered = value.lower()
        if lowered in ("true", "yes", "on"):
            return True
        if lowered in ("false", "no", "off"):
            return False
        if lowered in ("none", "null", ""):
            return None
        for cast in (int, float):
            try:
                return cast(value)
            except ValueError:
                pass
        return value

    @classmethod
    def _merge(cls, base: Dict[str, Any], loaded: Dict[str, Any], top: bool = True):
        for key, value in loaded.items():
            if isinstance(value, dict) and isinstance(base.get(key), dict):
                cls._merge(base[key], value, top=False)
            elif top and key.replace("-", "_") in cls.FLAT_KEYS:
                cls._set(base, key, value)
            else:
                base[key] = value

    @classmethod
    def _set(cls, config: Dict[str, Any], key: str, value: Any):
        key = key.replace("-", "_")
        dotted = cls.FLAT_KEYS.get(key, key)
        keys = dotted.split(".")
        target = config
        for k in keys[:-1]:
            target = target.setdefault(k, {})
        target[keys[-1]] = value

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value by dotted key."""
        keys = key.split(".")
        value = self.config
        try:
            for k in keys:
                value = value[k]
            return value
        except (KeyError, TypeError):
            return default

    def update(self, key: str, value: Any):
        """Update configuration value; flat flag names are accepted too."""
        self._set(self.config, key, value)

    def to_analysis_config(self, **overrides: Any) -> AnalysisConfig:
        """Build the typed configuration, applying non-None overrides last."""
        known = {f.name for f in fields(AnalysisConfig)}
        values = {}
        for section in ("analysis", "classifier"):
            for key, value in self.get(section, {}).items():
                if key in known:
                    values[key] = value
        values.update({k: v for k, v in overrides.items() if v is not None})
        return AnalysisConfig(**values)

    def to_classifier_params(self) -> Dict[str, Any]:
        """Get classifier parameters (vocabulary, tree, folds and seed)."""
        return dict(self.get("classifier", {}))

    def get_benchmark_params(self) -> Dict[str, Any]:
        """Get benchmark harness parameters."""
        return self.get("benchmark", {})

    def configure_logging(self, level: Optional[str] = None):
        """Route log records to stderr using the configured level and format."""
        level_name = (level or self.get("logging.level", "WARNING")).upper()
        logging.basicConfig(
            level=getattr(logging, level_name, logging.WARNING),
            format=self.get("logging.format"),
            stream=sys.stderr,
            force=True,
        )
