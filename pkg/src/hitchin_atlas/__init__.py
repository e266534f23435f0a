"""Exact local and global computations for sl(2)-type Hitchin fibres."""

__version__ = "0.1.0"
