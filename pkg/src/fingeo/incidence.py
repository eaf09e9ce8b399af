"""Incidence structures and the graphs derived from them.

An IncidenceStructure is a finite point set, line set and flag relation with
canonical hashable labels and deterministic ordering, so equal geometries
compare equal and exports are byte-stable. Graphs (collinearity graphs,
Cayley graphs) are dense boolean adjacency matrices with optional labels.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import FingeoError

__all__ = [
    "IncidenceStructure",
    "Graph",
    "to_canonical_json",
    "jsonable",
]

SCHEMA_INCIDENCE = "fingeo.incidence/1"
SCHEMA_GRAPH = "fingeo.graph/1"


def jsonable(obj):
    """Recursively turn tuples into lists and numpy scalars into ints."""
    if isinstance(obj, (tuple, list)):
        return [jsonable(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [jsonable(x) for x in obj.tolist()]
    return obj


def _tupled(obj):
    if isinstance(obj, list):
        return tuple(_tupled(x) for x in obj)
    return obj


def to_canonical_json(obj) -> str:
    """Deterministic JSON text: sorted keys, tight separators, newline end."""
    return json.dumps(jsonable(obj), sort_keys=True, separators=(",", ":")) + "\n"


class IncidenceStructure:
    """Points, lines and flags with canonical labels."""

    def __init__(self, kind, points, lines, flags, params=None, metadata=None):
        self.kind = str(kind)
        self.points = tuple(points)
        self.lines = tuple(lines)
        self.flags = tuple(sorted((int(p), int(l)) for p, l in flags))
        self.params = dict(params or {})
        self.metadata = dict(metadata or {})
        self._point_index: dict | None = None
        self._line_index: dict | None = None
        self._points_of_line: list[list[int]] | None = None
        self._lines_of_point: list[list[int]] | None = None
        self._flag_set: frozenset | None = None

    # -- derived views ---------------------------------------------------

    @property
    def n_points(self) -> int:
        return len(self.points)

    @property
    def n_lines(self) -> int:
        return len(self.lines)

    @property
    def n_flags(self) -> int:
        return len(self.flags)

    def point_index(self) -> dict:
        if self._point_index is None:
            self._point_index = {lbl: i for i, lbl in enumerate(self.points)}
        return self._point_index

    def line_index(self) -> dict:
        if self._line_index is None:
            self._line_index = {lbl: i for i, lbl in enumerate(self.lines)}
        return self._line_index

    def flag_set(self) -> frozenset:
        if self._flag_set is None:
            self._flag_set = frozenset(self.flags)
        return self._flag_set

    def points_of_line(self, li: int) -> list[int]:
        if self._points_of_line is None:
            pol: list[list[int]] = [[] for _ in self.lines]
            lop: list[list[int]] = [[] for _ in self.points]
            for p, l in self.flags:
                pol[l].append(p)
                lop[p].append(l)
            self._points_of_line = pol
            self._lines_of_point = lop
        return self._points_of_line[li]

    def lines_of_point(self, pi: int) -> list[int]:
        if self._lines_of_point is None:
            lop: list[list[int]] = [[] for _ in self.points]
            for p, l in self.flags:
                lop[p].append(l)
            self._lines_of_point = lop
        return self._lines_of_point[pi]

    def line_pointsets(self) -> list[frozenset]:
        return [frozenset(self.points_of_line(l)) for l in range(self.n_lines)]

    def validate(self) -> None:
        if len(set(self.points)) != self.n_points:
            raise FingeoError("duplicate point labels")
        if len(set(self.lines)) != self.n_lines:
            raise FingeoError("duplicate line labels")
        if len(self.flag_set()) != self.n_flags:
            raise FingeoError("duplicate flags")
        for p, l in self.flags:
            if not (0 <= p < self.n_points and 0 <= l < self.n_lines):
                raise FingeoError(f"flag ({p},{l}) out of range")
        for l in range(self.n_lines):
            if len(self.points_of_line(l)) < 2:
                raise FingeoError(f"line {l} has fewer than 2 points")

    def point_graph(self) -> "Graph":
        """Collinearity graph on the points."""
        n = self.n_points
        adj = np.zeros((n, n), dtype=bool)
        for l in range(self.n_lines):
            idx = np.array(self.points_of_line(l), dtype=np.int64)
            adj[np.ix_(idx, idx)] = True
        np.fill_diagonal(adj, False)
        return Graph(adj, labels=self.points)

    # -- equality and export ----------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, IncidenceStructure)
            and other.points == self.points
            and other.lines == self.lines
            and other.flags == self.flags
        )

    def __hash__(self):
        return hash((self.points, self.lines, self.flags))

    def __repr__(self):
        return (
            f"IncidenceStructure(kind={self.kind!r}, points={self.n_points}, "
            f"lines={self.n_lines}, flags={self.n_flags})"
        )

    def to_json_obj(self) -> dict:
        return {
            "schema": SCHEMA_INCIDENCE,
            "kind": self.kind,
            "params": jsonable(self.params),
            "points": jsonable(list(self.points)),
            "lines": jsonable(list(self.lines)),
            "flags": jsonable(list(self.flags)),
            "metadata": jsonable(self.metadata),
        }

    def to_json(self) -> str:
        return to_canonical_json(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict) -> "IncidenceStructure":
        if obj.get("schema") != SCHEMA_INCIDENCE:
            raise FingeoError(f"unexpected schema {obj.get('schema')!r}")
        return cls(
            obj["kind"],
            [_tupled(p) for p in obj["points"]],
            [_tupled(l) for l in obj["lines"]],
            [tuple(f) for f in obj["flags"]],
            params=obj.get("params"),
            metadata=obj.get("metadata"),
        )

    def incidence_dimacs(self) -> str:
        """Bipartite point-line incidence graph in DIMACS edge format;
        vertices 1..n_points are points, the rest are lines."""
        n = self.n_points + self.n_lines
        out = [
            f"c fingeo incidence kind={self.kind} points={self.n_points} "
            f"lines={self.n_lines}",
            f"p edge {n} {self.n_flags}",
        ]
        for p, l in self.flags:
            out.append(f"e {p + 1} {self.n_points + l + 1}")
        return "\n".join(out) + "\n"


class Graph:
    """Simple undirected graph as a dense boolean adjacency matrix."""

    def __init__(self, adj: np.ndarray, labels=None):
        adj = np.asarray(adj, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError("adjacency must be square")
        if np.any(adj != adj.T):
            raise ValueError("adjacency must be symmetric")
        if np.any(np.diag(adj)):
            raise ValueError("no loops allowed")
        adj.setflags(write=False)
        self.adj = adj
        self.labels = tuple(labels) if labels is not None else None

    @property
    def n(self) -> int:
        return self.adj.shape[0]

    @property
    def edge_count(self) -> int:
        return int(self.adj.sum()) // 2

    def edges(self):
        r, c = np.nonzero(np.triu(self.adj))
        return list(zip(r.tolist(), c.tolist()))

    def degrees(self) -> np.ndarray:
        return self.adj.sum(axis=1).astype(np.int64)

    def to_dimacs(self, comment: str = "") -> str:
        out = []
        if comment:
            out.append(f"c {comment}")
        out.append(f"p edge {self.n} {self.edge_count}")
        for a, b in self.edges():
            out.append(f"e {a + 1} {b + 1}")
        return "\n".join(out) + "\n"

    def to_json_obj(self) -> dict:
        return {
            "schema": SCHEMA_GRAPH,
            "n": self.n,
            "edges": [[a, b] for a, b in self.edges()],
            "labels": jsonable(list(self.labels)) if self.labels is not None else None,
        }

    def to_json(self) -> str:
        return to_canonical_json(self.to_json_obj())
