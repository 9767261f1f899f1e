"""Configuration management for leak analytics."""

from .config_manager import ANALYSIS_MODES, AnalysisConfig, ConfigManager

__all__ = ["ANALYSIS_MODES", "AnalysisConfig", "ConfigManager"]
