"""Version information for track-guide."""

__version__ = "1.0.0"
