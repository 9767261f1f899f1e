"""Taint analysis of app-model programs and classification of their network flows."""

__version__ = "0.1.0"
