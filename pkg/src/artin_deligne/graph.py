"""Defining graphs of Artin groups.

A defining graph is a finite simplicial graph whose edges carry integer
coefficients m >= 2. A pair of vertices without an edge has m = infinity;
this is encoded by absence, never by a sentinel value.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping


class GraphError(ValueError):
    """Malformed defining graph."""


def _pair(a: str, b: str) -> frozenset:
    return frozenset((a, b))


@dataclass(frozen=True)
class DefiningGraph:
    vertices: tuple[str, ...]
    coefficients: Mapping[frozenset, int] = field(default_factory=dict)

    def __post_init__(self):
        verts = tuple(self.vertices)
        if len(set(verts)) != len(verts):
            raise GraphError("duplicate vertex name")
        for v in verts:
            if not isinstance(v, str) or not v:
                raise GraphError(f"vertex names must be non-empty strings, got {v!r}")
        coeffs = {}
        for key, m in dict(self.coefficients).items():
            pair = frozenset(key)
            if len(pair) != 2:
                raise GraphError(f"loop or malformed edge {sorted(key)}")
            if not pair <= set(verts):
                raise GraphError(f"edge {sorted(pair)} uses an unknown vertex")
            if isinstance(m, bool) or not isinstance(m, int) or m < 2:
                raise GraphError(f"coefficient on {sorted(pair)} must be an integer >= 2, got {m!r}")
            coeffs[pair] = m
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_edges(cls, vertices: Iterable[str], edges: Iterable[tuple[str, str, int]]) -> "DefiningGraph":
        coeffs: dict[frozenset, int] = {}
        for a, b, m in edges:
            if a == b:
                raise GraphError(f"loop at {a!r}")
            key = _pair(a, b)
            if key in coeffs:
                raise GraphError(f"duplicate edge {a}-{b}")
            coeffs[key] = m
        return cls(tuple(vertices), coeffs)

    @classmethod
    def from_json(cls, data) -> "DefiningGraph":
        if isinstance(data, (str, bytes)):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise GraphError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
        if not isinstance(data, dict) or "vertices" not in data:
            raise GraphError("graph JSON must be an object with 'vertices' and 'edges'")
        edges = []
        for i, e in enumerate(data.get("edges", [])):
            if not isinstance(e, (list, tuple)) or len(e) != 3:
                raise GraphError(f"edge #{i} must be [a, b, m]")
            edges.append((e[0], e[1], e[2]))
        return cls.from_edges(data["vertices"], edges)

    @classmethod
    def load(cls, path) -> "DefiningGraph":
        with open(path) as fh:
            return cls.from_json(fh.read())

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices),
                "edges": [[a, b, m] for (a, b), m in self.edges()]}

    # queries

    def m(self, a: str, b: str) -> int | None:
        """Coefficient m_ab, or None for infinity."""
        return self.coefficients.get(_pair(a, b))

    def edges(self) -> list[tuple[tuple[str, str], int]]:
        """Edges ordered by vertex input order, each as ((a, b), m) with a before b."""
        out = []
        for a, b in itertools.combinations(self.vertices, 2):
            m = self.m(a, b)
            if m is not None:
                out.append(((a, b), m))
        return out

    def neighbours(self, a: str) -> list[str]:
        return [b for b in self.vertices if b != a and self.m(a, b) is not None]

    def degree(self, a: str) -> int:
        return len(self.neighbours(a))

    def index(self, a: str) -> int:
        return self.vertices.index(a)

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            for b in self.neighbours(stack.pop()):
                if b not in seen:
                    seen.add(b)
                    stack.append(b)
        return len(seen) == len(self.vertices)

    def relabel(self, mapping: Mapping[str, str]) -> "DefiningGraph":
        return DefiningGraph.from_edges([mapping[v] for v in self.vertices],
                                        [(mapping[a], mapping[b], m) for (a, b), m in self.edges()])

    def __repr__(self):
        es = ", ".join(f"{a}{b}:{m}" for (a, b), m in self.edges())
        return f"DefiningGraph({list(self.vertices)}, {{{es}}})"


def triangle(m_ab: int | None, m_ac: int | None, m_bc: int | None, names: str = "abc") -> DefiningGraph:
    a, b, c = names
    edges = [(x, y, m) for x, y, m in ((a, b, m_ab), (a, c, m_ac), (b, c, m_bc)) if m is not None]
    return DefiningGraph.from_edges([a, b, c], edges)


# predicates

def is_large_type(g: DefiningGraph) -> bool:
    return all(m >= 3 for m in g.coefficients.values())


def is_free_of_infinity(g: DefiningGraph) -> bool:
    return all(g.m(a, b) is not None for a, b in itertools.combinations(g.vertices, 2))


def is_hyperbolic_type(g: DefiningGraph) -> bool:
    if not is_large_type(g):
        raise GraphError("hyperbolic type is only defined here for large-type graphs")
    for a, b, c in itertools.combinations(g.vertices, 3):
        if g.m(a, b) == g.m(a, c) == g.m(b, c) == 3:
            return False
    return True


# isomorphisms

@dataclass(frozen=True)
class GraphIso:
    mapping: Mapping[str, str]

    def __call__(self, v: str) -> str:
        return self.mapping[v]

    def compose(self, other: "GraphIso") -> "GraphIso":
        """self after other."""
        return GraphIso({v: self.mapping[w] for v, w in other.mapping.items()})

    def inverse(self) -> "GraphIso":
        return GraphIso({w: v for v, w in self.mapping.items()})

    def key(self, order: Iterable[str]) -> tuple:
        return tuple(self.mapping[v] for v in order)


def _invariant(g: DefiningGraph, v: str) -> tuple:
    return (g.degree(v), tuple(sorted(g.m(v, w) for w in g.neighbours(v))))


def _search(g1: DefiningGraph, g2: DefiningGraph, first_only: bool) -> list[GraphIso]:
    if len(g1.vertices) != len(g2.vertices) or len(g1.coefficients) != len(g2.coefficients):
        return []
    if sorted(g1.coefficients.values()) != sorted(g2.coefficients.values()):
        return []
    inv1 = {v: _invariant(g1, v) for v in g1.vertices}
    inv2 = {v: _invariant(g2, v) for v in g2.vertices}
    if sorted(inv1.values()) != sorted(inv2.values()):
        return []
    # most constrained vertices first
    order = sorted(g1.vertices, key=lambda v: (sum(1 for w in g2.vertices if inv2[w] == inv1[v]), g1.index(v)))
    found: list[GraphIso] = []
    assign: dict[str, str] = {}
    used: set[str] = set()

    def extend(i: int) -> bool:
        if i == len(order):
            found.append(GraphIso(dict(assign)))
            return first_only
        v = order[i]
        for w in g2.vertices:
            if w in used or inv2[w] != inv1[v]:
                continue
            if all(g1.m(v, u) == g2.m(w, assign[u]) for u in order[:i]):
                assign[v] = w
                used.add(w)
                if extend(i + 1):
                    return True
                del assign[v]
                used.discard(w)
        return False

    extend(0)
    return found


def labelled_isomorphism(g1: DefiningGraph, g2: DefiningGraph) -> GraphIso | None:
    """A label-preserving isomorphism g1 -> g2, or None."""
    found = _search(g1, g2, first_only=True)
    return found[0] if found else None


def graph_automorphisms(g: DefiningGraph) -> list[GraphIso]:
    """All label-preserving automorphisms, identity first, then by image order."""
    auts = _search(g, g, first_only=False)
    auts.sort(key=lambda f: tuple(g.index(f(v)) for v in g.vertices))
    return auts


def barycentric_subdivision(g: DefiningGraph) -> tuple[list[tuple], list[tuple[tuple, tuple]]]:
    """Gamma_bar as (nodes, edges).

    Type-1 nodes are ``(1, (a,))`` and type-2 nodes are ``(2, (a, b))`` with a
    before b in input order.
    """
    nodes: list[tuple] = [(1, (a,)) for a in g.vertices]
    edges = []
    for (a, b), _m in g.edges():
        v = (2, (a, b))
        nodes.append(v)
        edges.append(((1, (a,)), v))
        edges.append(((1, (b,)), v))
    return nodes, edges


def spherical_pairs(g: DefiningGraph) -> list[tuple[str, str]]:
    return [pair for pair, _m in g.edges()]
