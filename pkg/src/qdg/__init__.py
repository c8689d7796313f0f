"""Diagram groups over semigroup presentations and the groups QF <= QT <= QV."""

__version__ = "0.1.0"
