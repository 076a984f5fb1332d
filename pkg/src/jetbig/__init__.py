"""Exact leading terms and bigness thresholds on Demailly-Semple jet towers."""

__version__ = "0.1.0"
