"""Isomorphism decision, standard automorphisms and Out for large-type,
free-of-infinity Artin groups.

Out(A_Gamma) is Aut(Gamma) x Z/2 here, with the Z/2 generated by the global
inversion s -> s^-1. User-supplied maps are validated (relations and
generator heights) before they are used.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .graph import (DefiningGraph, GraphIso, graph_automorphisms, is_free_of_infinity,
                    is_large_type, labelled_isomorphism)
from .oracle import Oracle
from .words import Word, concat, conjugate, format_word, inverse, parse_word

HEIGHT_PRESERVING = "height_preserving"
INVERSION_COMPOSITE = "inversion_composite"


class ScopeError(ValueError):
    """The graph lies outside the large-type, free-of-infinity class."""


class MapValidationError(ValueError):
    def __init__(self, reasons: list[str]):
        super().__init__("; ".join(reasons))
        self.reasons = reasons


def require_scope(*graphs: DefiningGraph):
    for g in graphs:
        if not is_large_type(g):
            raise ScopeError(f"{g!r} is not large-type (some m < 3); rigidity is only decided for large-type graphs")
        if not is_free_of_infinity(g):
            raise ScopeError(f"{g!r} has an infinite label; rigidity is only decided for free-of-infinity graphs")


@dataclass(frozen=True)
class ArtinMap:
    source: DefiningGraph
    target: DefiningGraph
    images: dict = field(hash=False)     # generator -> Word in the target

    def __post_init__(self):
        missing = [v for v in self.source.vertices if v not in self.images]
        if missing:
            raise MapValidationError([f"no image for generator {v!r}" for v in missing])
        for v, w in self.images.items():
            for gen, _ in w:
                if gen not in self.target.vertices:
                    raise MapValidationError([f"image of {v!r} uses unknown generator {gen!r}"])

    def __call__(self, w: Word) -> Word:
        letters = []
        for gen, sign in w:
            img = self.images[gen]
            letters.extend(img if sign > 0 else inverse(img))
        return Word(letters).reduced()

    def compose(self, other: "ArtinMap") -> "ArtinMap":
        """self after other."""
        return ArtinMap(other.source, self.target, {v: self(other.images[v]) for v in other.source.vertices})

    def key(self) -> tuple:
        return tuple((v, tuple(self.images[v])) for v in self.source.vertices)

    def same_images(self, other: "ArtinMap") -> bool:
        return self.key() == other.key()

    def failing_relations(self, oracle: Oracle) -> list[str]:
        """Edges whose braid relation is not sent to the identity."""
        bad = []
        for (a, b), m in self.source.edges():
            u, v = self.images[a], self.images[b]
            lhs = concat(*[(u, v)[i % 2] for i in range(m)])
            rhs = concat(*[(v, u)[i % 2] for i in range(m)])
            if not oracle.are_equal(lhs, rhs):
                bad.append(f"{a}{b}")
        return bad

    def to_json(self) -> dict:
        return {"images": {v: format_word(self.images[v]) for v in self.source.vertices}}

    @classmethod
    def from_json(cls, data, source: DefiningGraph, target: DefiningGraph | None = None) -> "ArtinMap":
        if isinstance(data, (str, bytes)):
            data = json.loads(data)
        target = target or source
        raw = data.get("images") if isinstance(data, dict) else None
        if not isinstance(raw, dict):
            raise MapValidationError(["map file needs an 'images' object"])
        images = {v: parse_word(str(w), target.vertices) for v, w in raw.items()}
        unknown = sorted(set(images) - set(source.vertices))
        if unknown:
            raise MapValidationError([f"image given for unknown generator {u!r}" for u in unknown])
        return cls(source, target, images)


def identity_map(g: DefiningGraph) -> ArtinMap:
    return ArtinMap(g, g, {v: Word.of(v) for v in g.vertices})


def inversion(g: DefiningGraph) -> ArtinMap:
    """The global inversion s -> s^-1."""
    return ArtinMap(g, g, {v: Word([(v, -1)]) for v in g.vertices})


def graph_induced(g: DefiningGraph, sigma: GraphIso, target: DefiningGraph | None = None) -> ArtinMap:
    return ArtinMap(g, target or g, {v: Word.of(sigma(v)) for v in g.vertices})


def conjugation(g: DefiningGraph, w: Word) -> ArtinMap:
    """Inner automorphism x -> w x w^-1."""
    return ArtinMap(g, g, {v: conjugate(Word.of(v), w) for v in g.vertices})


def decide_isomorphic(g1: DefiningGraph, g2: DefiningGraph) -> GraphIso | None:
    """Group isomorphism of A_g1 and A_g2 decided by labelled-graph isomorphism."""
    require_scope(g1, g2)
    return labelled_isomorphism(g1, g2)


def standard_automorphisms(g: DefiningGraph, oracle: Oracle | None = None) -> list[ArtinMap]:
    """Graph-induced maps (one per graph automorphism) followed by the inversion.

    With an oracle every map is relation-checked.
    """
    require_scope(g)
    maps = [graph_induced(g, s) for s in graph_automorphisms(g)] + [inversion(g)]
    if oracle is not None:
        for phi in maps:
            bad = phi.failing_relations(oracle)
            if bad:
                raise MapValidationError([f"relation {e} fails under {phi.to_json()}" for e in bad])
    return maps


def height_dichotomy(phi: ArtinMap, oracle: Oracle) -> str:
    """Which of phi and phi o iota preserves height, after validating phi."""
    reasons = []
    bad = phi.failing_relations(oracle)
    reasons += [f"braid relation {e} is not preserved" for e in bad]
    heights = {v: phi.images[v].height() for v in phi.source.vertices}
    odd = [v for v, h in heights.items() if h not in (1, -1)]
    reasons += [f"image of {v} has height {heights[v]}, not +-1; not a conjugate of a generator" for v in odd]
    signs = {h for v, h in heights.items() if v not in odd}
    if len(signs) > 1:
        pos = [v for v in phi.source.vertices if heights[v] == 1]
        neg = [v for v in phi.source.vertices if heights[v] == -1]
        reasons.append(f"mixed heights: +1 on {','.join(pos)} and -1 on {','.join(neg)}")
    if reasons:
        raise MapValidationError(reasons)
    return HEIGHT_PRESERVING if signs == {1} else INVERSION_COMPOSITE


@dataclass
class OutDescription:
    graph: DefiningGraph
    graph_auts: list
    representatives: list        # (GraphIso, epsilon) pairs
    maps: list                   # matching ArtinMaps, phi_sigma o iota^epsilon
    table: list                  # table[i][j] = index of rep_i * rep_j

    @property
    def order(self) -> int:
        return len(self.representatives)

    def check_group_axioms(self) -> list[str]:
        n = self.order
        t = self.table
        problems = []
        ident = [i for i in range(n) if all(t[i][j] == j and t[j][i] == j for j in range(n))]
        if len(ident) != 1:
            problems.append("no unique identity")
            return problems
        e = ident[0]
        for i in range(n):
            if not any(t[i][j] == e and t[j][i] == e for j in range(n)):
                problems.append(f"element {i} has no inverse")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if t[t[i][j]][k] != t[i][t[j][k]]:
                        problems.append(f"associativity fails at {i},{j},{k}")
                        return problems
        return problems

    def to_json(self) -> dict:
        order = self.graph.vertices
        return {
            "order": self.order,
            "graph_automorphisms": len(self.graph_auts),
            "structure": "Aut(Gamma) x Z/2",
            "representatives": [{"permutation": dict(zip(order, s.key(order))), "inversion": e,
                                 "images": m.to_json()["images"]}
                                for (s, e), m in zip(self.representatives, self.maps)],
            "table": self.table,
        }


def out_group(g: DefiningGraph) -> OutDescription:
    require_scope(g)
    auts = graph_automorphisms(g)
    reps, maps = [], []
    for e in (0, 1):
        for s in auts:
            phi = graph_induced(g, s)
            if e:
                phi = phi.compose(inversion(g))
            reps.append((s, e))
            maps.append(phi)
    index = {m.key(): i for i, m in enumerate(maps)}
    table = []
    for m1 in maps:
        row = []
        for m2 in maps:
            k = m1.compose(m2).key()
            if k not in index:
                raise RuntimeError("representatives are not closed under composition")
            row.append(index[k])
        table.append(row)
    return OutDescription(g, auts, reps, maps, table)
