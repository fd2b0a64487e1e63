"""accucheck: factual-accuracy toolkit for generated basketball game summaries."""

__version__ = "0.1.0"
