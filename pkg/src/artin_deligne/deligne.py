"""Finite balls in the Deligne complex of a two-dimensional Artin group.

The complex is the development of the fundamental domain K (the cone over the
barycentric subdivision of the defining graph) along the coset poset. A
translate g.K is called a copy. Two copies g.K and g a^k.K share the edge
[g v_a, g v_ab] for every b adjacent to a, so the ball of radius R is the set
of copies reachable from K by at most R steps g -> g a^k with 1 <= |k| <= L
(L is the length bound on the local groups).

Vertices are cosets: type 0 is g, type 1 is g<a>, type 2 is g A_ab. Each is
keyed by a canonical coset representative from the oracle.
"""

from __future__ import annotations

import itertools
import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import pi, sin
from typing import Iterable, NamedTuple

from .graph import DefiningGraph, is_large_type
from .oracle import Oracle, OracleBoundExceeded
from .words import Word, format_word, parse_word


class BallError(ValueError):
    pass


class CosetVertex(NamedTuple):
    rep: Word
    tag: tuple

    @property
    def type(self) -> int:
        return len(self.tag)

    def label(self) -> str:
        tag = "".join(self.tag) if self.tag else "-"
        return f"{format_word(self.rep)}|{tag}"


# angles and lengths

class MoussongAngles(NamedTuple):
    """Angles of a base triangle as exact multiples of pi."""
    at_v2: Fraction
    at_v1: Fraction
    at_v0: Fraction


def moussong_angles(m: int) -> MoussongAngles:
    if m < 3:
        raise BallError("Moussong angles need m >= 3")
    return MoussongAngles(Fraction(1, 2 * m), Fraction(1, 2), Fraction(1, 2) - Fraction(1, 2 * m))


class EdgeLengths(NamedTuple):
    e_a: float       # [v0, v_a]
    e_a_ab: float    # [v_a, v_ab]
    e_ab: float      # [v0, v_ab]


def moussong_edge_lengths(m: int) -> EdgeLengths:
    """Side lengths of the base triangle by the law of sines, with |e_a| = 1."""
    ang = moussong_angles(m)
    scale = 1.0 / sin(float(ang.at_v2) * pi)
    return EdgeLengths(1.0, sin(float(ang.at_v0) * pi) * scale, sin(float(ang.at_v1) * pi) * scale)


# the ball

def _check_graph(graph: DefiningGraph):
    if len(graph.vertices) < 3:
        raise BallError("the Deligne complex builder needs rank >= 3")
    if not graph.is_connected():
        raise BallError("the defining graph must be connected")
    if not is_large_type(graph):
        raise BallError("the defining graph must be of large type")


@dataclass
class ComplexBall:
    graph: DefiningGraph
    radius: int
    length_bound: int
    copies: dict = field(default_factory=dict)          # copy rep -> layer
    parents: dict = field(default_factory=dict)         # copy rep -> (parent rep, generator, exponent)
    copy_vertices: dict = field(default_factory=dict)   # copy rep -> {tag: CosetVertex}

    # derived structure

    def __post_init__(self):
        self._index: dict | None = None
        self._oracle: Oracle | None = None

    def oracle(self) -> Oracle:
        if self._oracle is None:
            self._oracle = Oracle(self.graph)
        return self._oracle

    def _build_index(self):
        holders = defaultdict(list)
        for g, verts in self.copy_vertices.items():
            for v in verts.values():
                holders[v].append(g)
        self._index = holders

    def copies_of(self, v: CosetVertex) -> list[Word]:
        """Copies containing vertex v, in copy order."""
        if self._index is None:
            self._build_index()
        return self._index.get(v, [])

    def pairs(self) -> list[tuple[str, str]]:
        return [p for p, _m in self.graph.edges()]

    def vertices(self) -> list[CosetVertex]:
        seen = set()
        for verts in self.copy_vertices.values():
            seen.update(verts.values())
        return sort_vertices(self.graph, seen)

    def triangles(self) -> list[tuple[CosetVertex, CosetVertex, CosetVertex]]:
        out = []
        for g, verts in self.copy_vertices.items():
            v0 = verts[()]
            for a, b in self.pairs():
                vab = verts[(a, b)]
                out.append((v0, verts[(a,)], vab))
                out.append((v0, verts[(b,)], vab))
        return out

    def edges(self) -> set[tuple[CosetVertex, CosetVertex, str]]:
        out = set()
        for g, verts in self.copy_vertices.items():
            v0 = verts[()]
            for a in self.graph.vertices:
                out.add((v0, verts[(a,)], "e_a"))
            for a, b in self.pairs():
                vab = verts[(a, b)]
                out.add((v0, vab, "e_ab"))
                out.add((verts[(a,)], vab, "e_a_ab"))
                out.add((verts[(b,)], vab, "e_a_ab"))
        return out

    def core_copies(self) -> list[Word]:
        return [g for g, r in self.copies.items() if r < self.radius]

    def is_interior_copy(self, g: Word) -> bool:
        return self.copies.get(g, self.radius) < self.radius

    def vertex_disk_copies(self, v: CosetVertex) -> list[Word]:
        """The 2m copies g p.K around a type-2 vertex g A_ab, p a prefix of either Delta word."""
        a, b = v.tag
        m = self.graph.m(a, b)
        out = []
        for first, lengths in ((a, range(0, m + 1)), (b, range(1, m))):
            second = b if first == a else a
            for n in lengths:
                out.append(Word(tuple(v.rep) + tuple((first if i % 2 == 0 else second, 1) for i in range(n))))
        return out

    def interior_vertices(self, oracle: Oracle | None = None) -> set[CosetVertex]:
        """Vertices whose star was generated in full (up to the length bound)."""
        out = set()
        for v in self.vertices():
            if v.type < 2:
                if any(self.is_interior_copy(g) for g in self.copies_of(v)):
                    out.add(v)
            else:
                disk = self.disk_reps(v, oracle)
                if disk is not None:
                    out.add(v)
        return out

    def disk_reps(self, v: CosetVertex, oracle: Oracle | None = None) -> list[Word] | None:
        """Canonical copy reps of the vertex disk of a type-2 vertex, or None if incomplete."""
        cache = getattr(self, "_disk_cache", None)
        if cache is None:
            cache = self._disk_cache = {}
        if v in cache:
            return cache[v]
        reps = []
        holders = set(self.copies_of(v))
        for w in self.vertex_disk_copies(v):
            key = self.canonical_copy(w, oracle)
            if key is None or key not in holders:
                reps = None
                break
            reps.append(key)
        cache[v] = reps
        return reps

    def canonical_copy(self, w: Word, oracle: Oracle | None) -> Word | None:
        if w in self.copies:
            return w
        key = (oracle or self.oracle()).shortlex_geodesic(w)
        return key if key in self.copies else None

    def to_json(self, interior: set | None = None) -> dict:
        verts = self.vertices()
        idx = {v: i for i, v in enumerate(verts)}
        if interior is None:
            interior = self.interior_vertices()
        edges = sorted((idx[u], idx[v], cls) for u, v, cls in self.edges())
        tris = sorted(tuple(idx[x] for x in t) for t in self.triangles())
        copies = []
        for g in sort_words(self.graph, self.copies):
            copies.append({"rep": format_word(g), "layer": self.copies[g],
                           "vertices": {"".join(t) or "-": idx[v] for t, v in sorted(self.copy_vertices[g].items())}})
        return {
            "graph": self.graph.to_json(),
            "radius": self.radius,
            "length_bound": self.length_bound,
            "vertices": [{"rep": format_word(v.rep), "tag": list(v.tag), "type": v.type,
                          "interior": v in interior} for v in verts],
            "edges": [[u, v, c] for u, v, c in edges],
            "triangles": [list(t) for t in tris],
            "copies": copies,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, data) -> "ComplexBall":
        if isinstance(data, (str, bytes)):
            data = json.loads(data)
        graph = DefiningGraph.from_json(data["graph"])
        gens = graph.vertices
        verts = [CosetVertex(parse_word(v["rep"], gens), tuple(v["tag"])) for v in data["vertices"]]
        ball = cls(graph, data["radius"], data["length_bound"])
        tag_of = {"".join(t) or "-": t for t in _all_tags(graph)}
        for c in data["copies"]:
            g = parse_word(c["rep"], gens)
            ball.copies[g] = c["layer"]
            ball.copy_vertices[g] = {tag_of[k]: verts[i] for k, i in c["vertices"].items()}
        return ball

    @classmethod
    def load(cls, path) -> "ComplexBall":
        with open(path) as fh:
            return cls.from_json(fh.read())


def _all_tags(graph: DefiningGraph) -> list[tuple]:
    return [()] + [(a,) for a in graph.vertices] + [p for p, _m in graph.edges()]


def sort_words(graph: DefiningGraph, words: Iterable[Word]) -> list[Word]:
    rank = {}
    n = len(graph.vertices)
    for i, a in enumerate(graph.vertices):
        rank[(a, 1)] = i
        rank[(a, -1)] = n + i
    return sorted(words, key=lambda w: (len(w), [rank[x] for x in w]))


def sort_vertices(graph: DefiningGraph, verts: Iterable[CosetVertex]) -> list[CosetVertex]:
    n = len(graph.vertices)
    rank = {}
    for i, a in enumerate(graph.vertices):
        rank[(a, 1)] = i
        rank[(a, -1)] = n + i
    tag_rank = {t: i for i, t in enumerate(_all_tags(graph))}
    return sorted(verts, key=lambda v: (v.type, len(v.rep), [rank[x] for x in v.rep], tag_rank[v.tag]))


class _Builder:
    def __init__(self, graph: DefiningGraph, oracle: Oracle):
        self.graph = graph
        self.oracle = oracle
        self.codes = {a: {oracle.encode(Word.of(a))[0]} for a in graph.vertices}
        self.pair_codes = {p: self.codes[p[0]] | self.codes[p[1]] for p, _m in graph.edges()}

    def vertices_for(self, g: tuple, parent: dict | None, gen: str | None) -> dict:
        o = self.oracle
        dec = o.decode
        verts = {(): CosetVertex(dec(g), ())}
        for a in self.graph.vertices:
            if parent is not None and a == gen:
                verts[(a,)] = parent[(a,)]
            else:
                verts[(a,)] = CosetVertex(dec(o.coset_key_codes(g, self.codes[a])), (a,))
        for p, codes in self.pair_codes.items():
            if parent is not None and gen in p:
                verts[p] = parent[p]
            else:
                verts[p] = CosetVertex(dec(o.coset_key_codes(g, codes)), p)
        return verts


def fundamental_domain(graph: DefiningGraph, oracle: Oracle | None = None) -> ComplexBall:
    return build_ball(graph, oracle, radius=0, length_bound=1)


def build_ball(graph: DefiningGraph, oracle: Oracle | None = None, radius: int = 2,
               length_bound: int = 6) -> ComplexBall:
    _check_graph(graph)
    if radius < 0 or length_bound < 1:
        raise BallError("radius must be >= 0 and length_bound >= 1")
    oracle = oracle or Oracle(graph)
    ball = ComplexBall(graph, radius, length_bound)
    ball._oracle = oracle
    builder = _Builder(graph, oracle)
    base = ()
    ball.copies[Word()] = 0
    ball.copy_vertices[Word()] = builder.vertices_for(base, None, None)
    _grow(ball, builder, [Word()], 1, radius)
    return ball


def expand_ball(ball: ComplexBall, oracle: Oracle, radius: int, length_bound: int) -> ComplexBall:
    """Grow a ball to a larger radius; a changed length bound triggers a rebuild."""
    if radius < 1 or length_bound < 1:
        raise BallError("bounds must be >= 1")
    if oracle.graph != ball.graph:
        raise BallError("oracle and ball use different graphs")
    if length_bound != ball.length_bound or radius < ball.radius:
        return build_ball(ball.graph, oracle, radius, length_bound)
    out = ComplexBall(ball.graph, radius, length_bound, dict(ball.copies), dict(ball.parents),
                      dict(ball.copy_vertices))
    out._oracle = oracle
    frontier = [g for g, r in ball.copies.items() if r == ball.radius]
    _grow(out, _Builder(ball.graph, oracle), frontier, ball.radius + 1, radius)
    return out


def _grow(ball: ComplexBall, builder: _Builder, frontier: list[Word], first: int, last: int):
    o = builder.oracle
    L = ball.length_bound
    for layer in range(first, last + 1):
        new = []
        for g in frontier:
            gt = o.encode(g)
            parent_verts = ball.copy_vertices[g]
            for a in ball.graph.vertices:
                code = o.encode(Word.of(a))[0]
                for k in itertools.chain(range(1, L + 1), range(-1, -L - 1, -1)):
                    step = (code if k > 0 else -code,) * abs(k)
                    try:
                        h = o._canonical(gt + step)
                    except OracleBoundExceeded as exc:
                        raise BallError(f"oracle bound exceeded at copy {format_word(g)} . {a}^{k}: {exc}") from exc
                    hw = o.decode(h)
                    if hw in ball.copies:
                        continue
                    ball.copies[hw] = layer
                    ball.parents[hw] = (g, a, k)
                    ball.copy_vertices[hw] = builder.vertices_for(h, parent_verts, a)
                    new.append(hw)
        frontier = new
    ball._index = None


# checks

def essential_skeleton(ball: ComplexBall):
    """Bipartite graph of type-1 and type-2 vertices (networkx Graph)."""
    import networkx as nx
    sk = nx.Graph()
    for g, verts in ball.copy_vertices.items():
        for a, b in ball.pairs():
            vab = verts[(a, b)]
            sk.add_edge(verts[(a,)], vab)
            sk.add_edge(verts[(b,)], vab)
    for verts in ball.copy_vertices.values():
        for a in ball.graph.vertices:
            sk.add_node(verts[(a,)])
    return sk


def translate_skeleton_nodes(ball: ComplexBall, g: Word) -> frozenset:
    verts = ball.copy_vertices[g]
    return frozenset(v for t, v in verts.items() if len(t) >= 1)


def verify_merges(ball: ComplexBall, oracle: Oracle) -> list[str]:
    """Re-check every vertex of every copy: g^-1 rep must lie in the tag subgroup."""
    problems = []
    for g, verts in ball.copy_vertices.items():
        for tag, v in verts.items():
            diff = Word(tuple(g.inverse()) + tuple(v.rep)).reduced()
            if tag == ():
                ok = oracle.is_trivial(diff)
            else:
                ok = oracle.in_parabolic(diff, tag)
            if not ok:
                problems.append(f"copy {format_word(g)} tag {tag}: {v.label()}")
    return problems


def verify_distinct(ball: ComplexBall, oracle: Oracle, tags: Iterable[tuple] | None = None) -> list[str]:
    """Pairwise check that distinct keys of one tag are distinct cosets."""
    by_tag = defaultdict(list)
    for v in ball.vertices():
        by_tag[v.tag].append(v)
    problems = []
    for tag, vs in by_tag.items():
        if tags is not None and tag not in tags:
            continue
        for u, v in itertools.combinations(vs, 2):
            diff = Word(tuple(u.rep.inverse()) + tuple(v.rep)).reduced()
            same = oracle.is_trivial(diff) if tag == () else oracle.in_parabolic(diff, tag)
            if same:
                problems.append(f"{u.label()} == {v.label()}")
    return problems


def structure_report(ball: ComplexBall, oracle: Oracle | None = None) -> dict:
    """Bipartite essential skeleton, n-pod stars at interior type-1 vertices,
    and base-triangle counts at type-0 vertices."""
    import networkx as nx
    sk = essential_skeleton(ball)
    interior = ball.interior_vertices(oracle)
    bad_pods = []
    for y in sk:
        if y.type != 1 or y not in interior:
            continue
        n = ball.graph.degree(y.tag[0])
        nbrs = list(sk.neighbors(y))
        if len(nbrs) != n or any(v.type != 2 for v in nbrs):
            bad_pods.append(y.label())
    per_v0 = defaultdict(int)
    for v0, _y, _h in ball.triangles():
        per_v0[v0] += 1
    expected = 2 * len(ball.graph.edges())
    bipartite = nx.is_bipartite(sk) and all(
        (u.type, v.type) in ((1, 2), (2, 1)) for u, v in sk.edges())
    return {
        "bipartite": bipartite,
        "interior_type1": sum(1 for v in interior if v.type == 1),
        "npod_violations": bad_pods,
        "type0_triangles_expected": expected,
        "type0_violations": sorted(format_word(v.rep) for v, c in per_v0.items() if c != expected),
    }


# Gauss-Bonnet

@dataclass(frozen=True)
class Polygon:
    """The disk g.K_abc bounded by the hexagon g.(v_a, v_ab, v_b, v_bc, v_c, v_ac)."""
    copy: Word
    triple: tuple


def polygon_cycle(ball: ComplexBall, p: Polygon) -> list[CosetVertex]:
    verts = ball.copy_vertices.get(p.copy)
    if verts is None:
        raise BallError(f"polygon copy {format_word(p.copy)} is not in the ball")
    a, b, c = p.triple
    order = ball.graph.vertices

    def pair(x, y):
        return (x, y) if order.index(x) < order.index(y) else (y, x)

    for x, y in ((a, b), (b, c), (a, c)):
        if ball.graph.m(x, y) is None:
            raise BallError(f"{p.triple} is not a 3-clique")
    return [verts[(a,)], verts[pair(a, b)], verts[(b,)], verts[pair(b, c)], verts[(c,)], verts[pair(a, c)]]


def corner_angle(graph: DefiningGraph, v: CosetVertex) -> Fraction:
    """Interior angle (multiple of pi) of a polygon at one of its boundary vertices."""
    if v.type == 2:
        return Fraction(1, graph.m(*v.tag))
    return Fraction(1)


@dataclass
class CurvatureReport:
    polygons: int
    vertices: int
    edges: int
    euler_characteristic: int
    is_disk: bool
    face_curvature: dict
    vertex_curvature: dict
    total: Fraction   # multiple of pi

    def to_json(self) -> dict:
        return {
            "polygons": self.polygons, "vertices": self.vertices, "edges": self.edges,
            "euler_characteristic": self.euler_characteristic, "is_disk": self.is_disk,
            "total_over_pi": str(self.total),
            "face_curvature_over_pi": {f"{format_word(p.copy)}|{''.join(p.triple)}": str(c)
                                       for p, c in self.face_curvature.items()},
        }


def face_curvature(graph: DefiningGraph, cycle: list[CosetVertex]) -> Fraction:
    return 2 - sum(1 - corner_angle(graph, v) for v in cycle)


def _region_topology(cycles: list[list[CosetVertex]]):
    edge_faces = defaultdict(list)
    vert_faces = defaultdict(list)
    for i, cyc in enumerate(cycles):
        n = len(cyc)
        for j in range(n):
            e = frozenset((cyc[j], cyc[(j + 1) % n]))
            edge_faces[e].append(i)
            vert_faces[cyc[j]].append(i)
    return edge_faces, vert_faces


def is_disk(cycles: list[list[CosetVertex]]) -> tuple[bool, set]:
    """Disk test for a union of polygons; also returns the boundary vertices."""
    edge_faces, vert_faces = _region_topology(cycles)
    if any(len(fs) > 2 for fs in edge_faces.values()):
        return False, set()
    boundary = [e for e, fs in edge_faces.items() if len(fs) == 1]
    bverts = set().union(*boundary) if boundary else set()
    chi = len(vert_faces) - len(edge_faces) + len(cycles)
    if chi != 1 or not boundary:
        return False, bverts
    # boundary edges form one cycle
    adj = defaultdict(list)
    for e in boundary:
        u, v = tuple(e)
        adj[u].append(v)
        adj[v].append(u)
    if any(len(n) != 2 for n in adj.values()):
        return False, bverts
    start = next(iter(adj))
    seen = {start}
    stack = [start]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != len(adj):
        return False, bverts
    # vertex links are single arcs or cycles
    for v, faces in vert_faces.items():
        link = defaultdict(set)
        for i in faces:
            cyc = cycles[i]
            j = cyc.index(v)
            e1 = frozenset((v, cyc[j - 1]))
            e2 = frozenset((v, cyc[(j + 1) % len(cyc)]))
            link[e1].add(e2)
            link[e2].add(e1)
        nodes = list(link)
        seen = {nodes[0]}
        stack = [nodes[0]]
        while stack:
            for w in link[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != len(nodes):
            return False, bverts
    return True, bverts


def gauss_bonnet_audit(ball: ComplexBall, region: Iterable[Polygon]) -> CurvatureReport:
    region = list(dict.fromkeys(region))
    if not region:
        raise BallError("empty region")
    cycles = [polygon_cycle(ball, p) for p in region]
    for p, cyc in zip(region, cycles):
        if len(set(cyc)) != 6:
            raise BallError(f"polygon {p} is degenerate")
    disk, boundary = is_disk(cycles)
    edge_faces, vert_faces = _region_topology(cycles)
    g = ball.graph
    faces = {p: face_curvature(g, cyc) for p, cyc in zip(region, cycles)}
    vcurv = {}
    for v, fs in vert_faces.items():
        angle_sum = sum(corner_angle(g, v) for _ in fs)
        vcurv[v] = (1 if v in boundary else 2) - angle_sum
    total = sum(faces.values(), Fraction(0)) + sum(vcurv.values(), Fraction(0))
    chi = len(vert_faces) - len(edge_faces) + len(cycles)
    report = CurvatureReport(len(region), len(vert_faces), len(edge_faces), chi, disk, faces, vcurv, total)
    if disk and total != 2:
        raise AssertionError(f"Gauss-Bonnet violated: total {total} pi on a disk")
    return report


def vertex_disk_region(ball: ComplexBall, v: CosetVertex, oracle: Oracle | None = None) -> list[Polygon] | None:
    """Polygons around a type-2 vertex, one per 3-clique through its pair, per disk copy."""
    reps = ball.disk_reps(v, oracle)
    if reps is None:
        return None
    a, b = v.tag
    thirds = [c for c in ball.graph.vertices if c not in v.tag and ball.graph.m(a, c) and ball.graph.m(b, c)]
    if len(thirds) != 1:
        return None
    triple = _ordered_triple(ball.graph, (a, b, thirds[0]))
    return [Polygon(g, triple) for g in reps]


def _ordered_triple(graph: DefiningGraph, t) -> tuple:
    return tuple(sorted(t, key=graph.vertices.index))


def disk_regions(ball: ComplexBall, oracle: Oracle | None = None, max_pairs: int = 200) -> list[list[Polygon]]:
    """Single polygons, vertex disks and unions of two vertex disks that are disks."""
    graph = ball.graph
    triples = [t for t in itertools.combinations(graph.vertices, 3)
               if all(graph.m(x, y) for x, y in itertools.combinations(t, 2))]
    regions: list[list[Polygon]] = []
    for g in sort_words(graph, ball.copies):
        for t in triples:
            regions.append([Polygon(g, t)])
    disks = []
    for v in ball.vertices():
        if v.type == 2:
            reg = vertex_disk_region(ball, v, oracle)
            if reg is not None:
                disks.append(reg)
    regions.extend(disks)
    pairs = 0
    for r1, r2 in itertools.combinations(disks, 2):
        if pairs >= max_pairs:
            break
        union = list(dict.fromkeys(r1 + r2))
        if len(union) == len(r1) + len(r2):
            continue
        cycles = [polygon_cycle(ball, p) for p in union]
        if is_disk(cycles)[0]:
            regions.append(union)
            pairs += 1
    return regions


# standard trees

@dataclass
class StandardTreeIndex:
    """Parabolic keys of type-1 vertices and the type-2 vertices on each standard tree.

    The stabiliser of a type-1 vertex k<a> is the cyclic parabolic k<a>k^-1,
    keyed by the ShortLex geodesic of its height-one generator k a k^-1.
    """
    key_of: dict        # type-1 vertex -> parabolic key (Word)
    tree: dict          # parabolic key -> type-2 vertices adjacent to a type-1 vertex with that key
    stars: dict         # type-2 vertex -> frozenset of parabolic keys (its visible cyclic subgroups)


def parabolic_key(oracle: Oracle, v: CosetVertex) -> Word:
    if v.type != 1:
        raise BallError("parabolic keys are defined for type-1 vertices")
    a = v.tag[0]
    return oracle.shortlex_geodesic(Word(tuple(v.rep) + ((a, 1),) + tuple(v.rep.inverse())))


def standard_tree_index(ball: ComplexBall, oracle: Oracle | None = None) -> StandardTreeIndex:
    oracle = oracle or ball.oracle()
    key_of = {}
    tree = defaultdict(set)
    stars = defaultdict(set)
    sk = essential_skeleton(ball)
    for y in ball.vertices():
        if y.type != 1:
            continue
        key = parabolic_key(oracle, y)
        key_of[y] = key
        for v in sk.neighbors(y):
            tree[key].add(v)
            stars[v].add(key)
    return StandardTreeIndex(key_of, {k: frozenset(vs) for k, vs in tree.items()},
                             {v: frozenset(ks) for v, ks in stars.items()})
