"""contextsearch: semantic full-text search over decomposed sentence contexts."""

__version__ = "0.1.0"
