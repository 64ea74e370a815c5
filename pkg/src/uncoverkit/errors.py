"""Exception hierarchy shared across the package."""

from __future__ import annotations


class UncoverkitError(Exception):
    """Base class for all errors raised by uncoverkit."""


class GraphError(UncoverkitError):
    """A hypergraph violates a structural invariant."""


class ArityMismatch(GraphError):
    def __init__(self, edge: str, expected: int, got: int):
        super().__init__(f"edge {edge!r}: label arity {expected}, got {got} endpoints")
        self.edge = edge
        self.expected = expected
        self.got = got


class DanglingEndpoint(GraphError):
    def __init__(self, edge: str, node: str):
        super().__init__(f"edge {edge!r} references unknown node {node!r}")
        self.edge = edge
        self.node = node


class UnknownLabel(GraphError):
    def __init__(self, edge: str, label: str):
        super().__init__(f"edge {edge!r} carries label {label!r} not in signature")
        self.edge = edge
        self.label = label


class SignatureMismatch(UncoverkitError):
    """Operation on graphs over different signatures."""


class NotDirectedGraph(UncoverkitError):
    """Operation requires every edge to have arity 2."""


class MorphismError(UncoverkitError):
    """A partial morphism violates the morphism laws."""


class LabelMismatch(MorphismError):
    def __init__(self, edge: str):
        super().__init__(f"edge map changes the label of {edge!r}")
        self.edge = edge


class ConnMismatch(MorphismError):
    def __init__(self, edge: str):
        super().__init__(f"edge map does not commute with connections at {edge!r}")
        self.edge = edge


class IncidentNodeUndefined(MorphismError):
    def __init__(self, edge: str, node: str):
        super().__init__(f"map defined on edge {edge!r} but not on incident node {node!r}")
        self.edge = edge
        self.node = node


class TypeMismatch(UncoverkitError):
    """Morphisms do not compose / are not a span over a common source."""


class NotConflictFree(UncoverkitError):
    """Match identifies a deleted element with a preserved one."""


class NacViolated(UncoverkitError):
    def __init__(self, index: int):
        super().__init__(f"negative application condition #{index} violated")
        self.index = index


class UnsupportedOrder(UncoverkitError):
    """Requested order has no engine (minor ordering is a reserved extension)."""


class BudgetTooLarge(UncoverkitError):
    """Brute-force enumeration budget exceeds the guard."""


class ParseError(UncoverkitError):
    def __init__(self, message: str, line: int | None = None):
        loc = f"line {line}: " if line is not None else ""
        super().__init__(f"{loc}{message}")
        self.line = line


class ModelError(UncoverkitError):
    """Semantically inconsistent model or analysis setup."""
