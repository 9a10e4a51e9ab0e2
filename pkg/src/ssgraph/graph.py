"""Directed-graph substrate.

Edges point from source to range in the usual graph-algebra convention:
a path ``e1 e2 ... en`` is composable when ``s(e_i) = r(e_{i+1})``, and
``v >= w`` means some path has range ``v`` and source ``w``.  An edge
with ``omega=True`` stands for countably many parallel copies; paths
record which copy they use.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

import networkx as nx

from .errors import DanglingEndpoint, DuplicateName, SpecError

INF = math.inf


@dataclass(frozen=True, order=True)
class Edge:
    name: str
    range: str
    source: str
    omega: bool = False
    color: int = 1


@dataclass(frozen=True, order=True)
class Path:
    """A finite path: its range vertex plus a tuple of (edge name, copy)."""

    vertex: str
    edges: tuple = ()

    def __len__(self):
        return len(self.edges)

    def __str__(self):
        if not self.edges:
            return self.vertex
        return " ".join(n if c == 0 else f"{n}[{c}]" for n, c in self.edges)

    @classmethod
    def of(cls, graph: "Graph", *names) -> "Path":
        """Path through the named edges, copy 0 everywhere."""
        if not names:
            raise ValueError("use Path(vertex) for vertices")
        edges = tuple((n, 0) if isinstance(n, str) else tuple(n) for n in names)
        p = cls(graph.edge(edges[0][0]).range, edges)
        graph.check_path(p)
        return p


@dataclass(frozen=True, eq=False)
class Graph:
    vertices: tuple
    edges: tuple
    rank: int = 1
    _edge_index: dict = field(default_factory=dict, repr=False)
    _vertex_index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._vertex_index.update({v: i for i, v in enumerate(self.vertices)})
        self._edge_index.update({e.name: i for i, e in enumerate(self.edges)})

    # lookups

    def vindex(self, v: str) -> int:
        return self._vertex_index[v]

    def eindex(self, name: str) -> int:
        return self._edge_index[name]

    def edge(self, name: str) -> Edge:
        return self.edges[self._edge_index[name]]

    def has_vertex(self, v) -> bool:
        return v in self._vertex_index

    def has_edge(self, name) -> bool:
        return name in self._edge_index

    @cached_property
    def incoming(self) -> dict:
        """v -> edges with range v, i.e. vE^1."""
        out = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e.range].append(e)
        return {v: tuple(es) for v, es in out.items()}

    @cached_property
    def has_omega(self) -> bool:
        return any(e.omega for e in self.edges)

    @cached_property
    def colors(self) -> tuple:
        return tuple(range(1, self.rank + 1))

    # reachability

    @cached_property
    def _digraph(self) -> nx.DiGraph:
        # arc range -> source, so descendants of v are the w with v >= w
        g = nx.DiGraph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from((e.range, e.source) for e in self.edges)
        return g

    @cached_property
    def _below(self) -> dict:
        cond = nx.condensation(self._digraph)
        members = cond.graph["mapping"]
        reach = {}
        for c in reversed(list(nx.topological_sort(cond))):
            acc = set(cond.nodes[c]["members"])
            for d in cond.successors(c):
                acc |= reach[d]
            reach[c] = acc
        return {v: frozenset(reach[members[v]]) for v in self.vertices}

    @cached_property
    def _above(self) -> dict:
        up = {v: set() for v in self.vertices}
        for v, ws in self._below.items():
            for w in ws:
                up[w].add(v)
        return {w: frozenset(vs) for w, vs in up.items()}

    def ge(self, v: str, w: str) -> bool:
        """v >= w: a path with range v and source w exists."""
        return w in self._below[v]

    def below(self, v: str) -> frozenset:
        return self._below[v]

    def above(self, w: str) -> frozenset:
        return self._above[w]

    def up_closure(self, vs: Iterable[str]) -> frozenset:
        out = set()
        for w in vs:
            out |= self._above[w]
        return frozenset(out)

    @cached_property
    def sccs(self) -> tuple:
        """Strongly connected components as sorted tuples, canonical order."""
        comps = [tuple(sorted(c)) for c in nx.strongly_connected_components(self._digraph)]
        return tuple(sorted(comps))

    def scc_has_cycle(self, comp) -> bool:
        if len(comp) > 1:
            return True
        v = comp[0]
        return any(e.source == v for e in self.incoming[v])

    # singular structure (rank one)

    def is_singular(self, v: str) -> bool:
        es = self.incoming[v]
        return not es or any(e.omega for e in es)

    def count_into(self, v: str, M) -> float:
        """|vE^1 M|, with omega edges from M counting as infinity."""
        n = 0
        for e in self.incoming[v]:
            if e.source in M:
                if e.omega:
                    return INF
                n += 1
        return n

    def edges_into(self, v: str, M) -> tuple:
        return tuple(e for e in self.incoming[v] if e.source in M)

    # paths

    def source(self, p: Path) -> str:
        if not p.edges:
            return p.vertex
        return self.edge(p.edges[-1][0]).source

    def check_path(self, p: Path) -> None:
        cur = p.vertex
        if cur not in self._vertex_index:
            raise ValueError(f"unknown vertex {cur!r}")
        for name, copy in p.edges:
            e = self.edge(name)
            if e.range != cur:
                raise ValueError(f"path not composable at {name}")
            if copy and not e.omega:
                raise ValueError(f"copy index on non-omega edge {name}")
            cur = e.source

    def paths_from(self, v: str, length: int, window: int = 1) -> Iterator[Path]:
        """All paths of the given length with range v.

        Omega edges contribute copies ``0..window-1``.
        """
        def rec(cur, acc):
            if len(acc) == length:
                yield Path(v, tuple(acc))
                return
            for e in self.incoming[cur]:
                for c in range(window if e.omega else 1):
                    acc.append((e.name, c))
                    yield from rec(e.source, acc)
                    acc.pop()
        yield from rec(v, [])

    def count_paths(self, depth: int, window: int = 1) -> int:
        """Number of paths of length <= depth (all ranges)."""
        per = {v: 1 for v in self.vertices}
        total = len(self.vertices)
        for _ in range(depth):
            nxt = {}
            for v in self.vertices:
                nxt[v] = sum(per[e.source] * (window if e.omega else 1) for e in self.incoming[v])
            per = nxt
            total += sum(per.values())
        return total


def build_graph(spec: dict) -> Graph:
    """Validated Graph from a mapping with ``vertices`` and ``edges`` keys."""
    vertices = [str(v) for v in spec.get("vertices", [])]
    seen = set()
    for v in vertices:
        if v in seen:
            raise DuplicateName(f"duplicate vertex {v!r}", witness=v)
        seen.add(v)
    rank = int(spec.get("rank", 1))
    edges = []
    names = set()
    for raw in spec.get("edges", []):
        name = str(raw["name"])
        if name in names or name in seen:
            raise DuplicateName(f"duplicate name {name!r}", witness=name)
        names.add(name)
        for end in ("range", "source"):
            if raw[end] not in seen:
                raise DanglingEndpoint(f"edge {name!r}: {end} {raw[end]!r} is not a vertex", witness=name)
        mult = raw.get("multiplicity", "one")
        if mult not in ("one", "omega"):
            raise SpecError(f"edge {name!r}: multiplicity must be 'one' or 'omega'", witness=name)
        color = int(raw.get("color", 1))
        if not 1 <= color <= rank:
            raise SpecError(f"edge {name!r}: color {color} outside 1..{rank}", witness=name)
        if mult == "omega" and rank > 1:
            raise SpecError("omega edges are only allowed in rank one", witness=name)
        edges.append(Edge(name, str(raw["range"]), str(raw["source"]), mult == "omega", color))
    return Graph(tuple(sorted(vertices)), tuple(sorted(edges, key=lambda e: e.name)), rank)


def singular_vertices(graph: Graph) -> tuple:
    return tuple(v for v in graph.vertices if graph.is_singular(v))


def vertex_ge(graph: Graph, v: str, w: str) -> bool:
    return graph.ge(v, w)
