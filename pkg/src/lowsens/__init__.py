"""Low-sensitivity Boolean function toolkit."""

__version__ = "0.1.0"
