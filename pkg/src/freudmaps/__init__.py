"""Exact genus-g generating functions for regular maps from Freud-orbit asymptotics."""
__version__ = "0.1.0"
