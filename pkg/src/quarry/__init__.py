"""Offline package-registry mining, snippet correction, ranked search, and a
reuse-oriented REPL."""

__version__ = "0.1.0"
