"""algoprob - laboratory for experimental algorithmic probability."""

__version__ = "0.1.0"
