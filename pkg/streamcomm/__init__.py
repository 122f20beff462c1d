"""Single-pass local community detection over graph edge streams."""

__version__ = "0.1.0"
