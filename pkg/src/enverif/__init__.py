"""Static energy-bound inference and verification for Horn-clause programs."""

__version__ = "0.1.0"
