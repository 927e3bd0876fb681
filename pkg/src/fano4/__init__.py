"""Exact invariants of Fano fourfolds built from toric and projective-bundle data."""

__version__ = "0.1.0"
