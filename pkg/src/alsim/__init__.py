"""Workbench for local graph computation with asynchronous, crash-prone
processes: synchronous, snapshot-based async, and router-decoupled
execution models over port-numbered graphs, with a checker for locally
checkable labelings."""

__version__ = "0.1.0"
