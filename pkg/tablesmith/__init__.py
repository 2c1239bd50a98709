"""tablesmith: synthetic HTML table datasets, structure checks and TEDS scoring."""

__version__ = "0.1.0"
