"""Rebuilding the Deligne complex from subgroup data.

Type-2 handles are the classical maximal dihedral subgroups g A_ab g^-1, keyed
by canonical coset representatives. Their pairwise intersections are read off
the ball (shared standard trees) and every positive intersection is confirmed
by oracle membership. Everything downstream of that (adjacency, the type-1
nodes, the graph D1, characteristic subgraphs and the coned complex) uses the
handle/intersection data only. The ball geometry is used again only to check
the result.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import networkx as nx

from .deligne import ComplexBall, CosetVertex, essential_skeleton, sort_vertices, standard_tree_index
from .graph import DefiningGraph, barycentric_subdivision, is_free_of_infinity, is_large_type
from .oracle import Oracle
from .words import Word, concat, format_word, inverse


class ReconstructionError(ValueError):
    pass


class TruncationError(RuntimeError):
    """A required handle or candidate lies outside the ball."""


@dataclass(frozen=True, order=True)
class Type2Handle:
    key: Word
    pair: tuple

    def label(self) -> str:
        return f"{format_word(self.key)}|{''.join(self.pair)}"

    def vertex(self) -> CosetVertex:
        return CosetVertex(self.key, self.pair)


@dataclass(frozen=True)
class Type1Node:
    handles: frozenset
    intersection: Word          # parabolic key of the common cyclic subgroup
    radius: int                 # radius at which the candidate sweep was exhausted

    def label(self) -> str:
        return "{" + ", ".join(sorted(h.label() for h in self.handles)) + "}"


def handle_of(v: CosetVertex) -> Type2Handle:
    return Type2Handle(v.rep, v.tag)


class SubgroupData:
    """Handles of a ball and their oracle-confirmed cyclic intersections."""

    def __init__(self, ball: ComplexBall, oracle: Oracle | None = None, confirm: bool = True):
        g = ball.graph
        if not is_large_type(g) or not is_free_of_infinity(g):
            raise ReconstructionError("reconstruction needs a large-type, free-of-infinity graph")
        self.ball = ball
        self.oracle = oracle or ball.oracle()
        index = standard_tree_index(ball, self.oracle)
        self.handles = sorted(handle_of(v) for v in ball.vertices() if v.type == 2)
        self.contains: dict[Type2Handle, frozenset] = {
            h: index.stars.get(h.vertex(), frozenset()) for h in self.handles}
        self.members: dict[Word, frozenset] = {
            k: frozenset(handle_of(v) for v in vs) for k, vs in index.tree.items()}
        core = set()
        for gw in ball.core_copies():
            for t, v in ball.copy_vertices[gw].items():
                if len(t) == 2:
                    core.add(handle_of(v))
        self.core = frozenset(core)
        if confirm:
            self.confirm()

    def confirm(self):
        """Oracle check that each handle really contains each recorded intersection."""
        o = self.oracle
        for h, keys in self.contains.items():
            for k in keys:
                if not o.in_parabolic(concat(inverse(h.key), k, h.key), h.pair):
                    raise ReconstructionError(f"{h.label()} does not contain {format_word(k)}")

    def intersection(self, h1: Type2Handle, h2: Type2Handle) -> frozenset:
        return self.contains.get(h1, frozenset()) & self.contains.get(h2, frozenset())

    def meets(self, h: Type2Handle) -> set:
        out = set()
        for k in self.contains.get(h, ()):
            out |= self.members[k]
        out.discard(h)
        return out

    def in_handle(self, k: Word, h: Type2Handle) -> bool:
        """Exact membership of a cyclic generator in a handle."""
        if k in self.contains.get(h, ()):
            return True
        return self.oracle.in_parabolic(concat(inverse(h.key), k, h.key), h.pair)


def adjacency_property(h1: Type2Handle, h2: Type2Handle, ball: ComplexBall | None = None,
                       oracle: Oracle | None = None, data: SubgroupData | None = None):
    """(witness h3 or None). True adjacency iff some ball handle h3 meets both
    nontrivially while the triple intersection is trivial."""
    if h1 == h2:
        raise ReconstructionError("the adjacency property needs two distinct subgroups")
    if data is None:
        if ball is None:
            raise ReconstructionError("a ball or precomputed subgroup data is required")
        data = SubgroupData(ball, oracle)
    for h in (h1, h2):
        if h not in data.contains:
            raise TruncationError(f"handle {h.label()} is not represented in the ball")
    common = data.intersection(h1, h2)
    if not common:
        return None
    for h3 in sorted(data.meets(h1) & data.meets(h2)):
        if h3 in (h1, h2):
            continue
        # triple intersection trivial iff no common generator of H1 and H2 lies in H3
        if not any(data.in_handle(k, h3) for k in common):
            return h3
    return None


@dataclass
class D1Graph:
    graph: nx.Graph                 # nodes: Type2Handle and Type1Node
    radius: int
    length_bound: int
    gamma: DefiningGraph | None = None

    def type2(self) -> list:
        return sorted(n for n in self.graph if isinstance(n, Type2Handle))

    def type1(self) -> list:
        return sorted((n for n in self.graph if isinstance(n, Type1Node)), key=lambda n: n.label())


def _maximal_cliques(nodes: list, adjacent) -> list[frozenset]:
    g = nx.Graph()
    g.add_nodes_from(nodes)
    for u, v in itertools.combinations(nodes, 2):
        if adjacent(u, v):
            g.add_edge(u, v)
    return [frozenset(c) for c in nx.find_cliques(g)]


def build_D1(ball: ComplexBall, oracle: Oracle | None = None, data: SubgroupData | None = None,
             restrict_to_core: bool = True) -> D1Graph:
    """Type-1 nodes are maximal pairwise-adjacent handle sets with a common intersection.

    With ``restrict_to_core`` only nodes all of whose handles come from
    copies of layer < radius are kept, so every candidate sweep they need
    fits in the ball.
    """
    data = data or SubgroupData(ball, oracle)
    cache: dict = {}

    def adjacent(u, v):
        key = (u, v) if u < v else (v, u)
        if key not in cache:
            cache[key] = adjacency_property(u, v, data=data) is not None
        return cache[key]

    d1 = nx.Graph()
    keep = data.core if restrict_to_core else frozenset(data.handles)
    for h in sorted(keep):
        d1.add_node(h)
    seen = set()
    for k in sorted(data.members, key=lambda w: data.oracle.shortlex_key(data.oracle.encode(w))):
        pool = sorted(data.members[k])
        for clique in _maximal_cliques(pool, adjacent):
            if len(clique) < 2 or clique in seen or not clique <= keep:
                continue
            seen.add(clique)
            node = Type1Node(clique, k, ball.radius)
            for h in clique:
                d1.add_edge(node, h)
    return D1Graph(d1, ball.radius, ball.length_bound, ball.graph)


# comparison with the geometric skeleton

def skeleton_region(ball: ComplexBall, handles: frozenset) -> nx.Graph:
    """Essential skeleton restricted to the given type-2 vertices and the type-1
    vertices all of whose neighbours are among them."""
    sk = essential_skeleton(ball)
    hv = {h.vertex() for h in handles}
    keep = set(hv)
    for y in sk:
        if y.type == 1 and sk.degree(y) > 0 and all(v in hv for v in sk.neighbors(y)):
            keep.add(y)
    return sk.subgraph(keep).copy()


def F1_map(d1: D1Graph, ball: ComplexBall) -> dict:
    """Natural map D1 -> skeleton: handle to its vertex, node to the common neighbour."""
    sk = essential_skeleton(ball)
    out = {}
    for n in d1.graph:
        if isinstance(n, Type2Handle):
            out[n] = n.vertex()
            continue
        hs = [h.vertex() for h in n.handles]
        common = set(sk.neighbors(hs[0]))
        for v in hs[1:]:
            common &= set(sk.neighbors(v))
        common = {y for y in common if set(sk.neighbors(y)) == set(hs)}
        if len(common) != 1:
            raise ReconstructionError(f"type-1 node {n.label()} matches {len(common)} skeleton vertices")
        out[n] = common.pop()
    return out


@dataclass
class F1Report:
    d1_nodes: int
    d1_edges: int
    skeleton_nodes: int
    skeleton_edges: int
    natural_map_is_isomorphism: bool
    hashes_agree: bool

    @property
    def ok(self) -> bool:
        return self.natural_map_is_isomorphism and self.hashes_agree

    def to_json(self) -> dict:
        return dict(self.__dict__, ok=self.ok)


def _typed(g: nx.Graph, kind) -> nx.Graph:
    out = nx.Graph()
    for n in g:
        out.add_node(n, t=str(kind(n)))
    out.add_edges_from(g.edges())
    return out


def verify_F1(d1: D1Graph, ball: ComplexBall) -> F1Report:
    region = skeleton_region(ball, frozenset(d1.type2()))
    f = F1_map(d1, ball)
    image_edges = {frozenset((f[u], f[v])) for u, v in d1.graph.edges()}
    region_edges = {frozenset(e) for e in region.edges()}
    natural = (len(set(f.values())) == len(f) and set(f.values()) == set(region.nodes())
               and image_edges == region_edges)
    a = _typed(d1.graph, lambda n: 1 if isinstance(n, Type1Node) else 2)
    b = _typed(region, lambda v: v.type)
    # the natural map is the isomorphism certificate; the hash is an independent cross-check
    abstract = (nx.weisfeiler_lehman_graph_hash(a, node_attr="t", iterations=4)
                == nx.weisfeiler_lehman_graph_hash(b, node_attr="t", iterations=4))
    return F1Report(d1.graph.number_of_nodes(), d1.graph.number_of_edges(), region.number_of_nodes(),
                    region.number_of_edges(), natural, abstract)


# characteristic subgraphs and the algebraic complex

def gamma_bar(graph: DefiningGraph) -> nx.Graph:
    nodes, edges = barycentric_subdivision(graph)
    g = nx.Graph()
    g.add_nodes_from(nodes)
    g.add_edges_from(edges)
    return g


def _embeddings_from(g: nx.Graph, pattern: nx.Graph, order: list, anchor):
    """Injective edge-preserving maps of the pattern sending order[0] to anchor."""
    pos = {p: i for i, p in enumerate(order)}
    earlier = [[q for q in pattern.neighbors(p) if pos[q] < pos[p]] for p in order]
    need = [pattern.degree(p) for p in order]
    image: list = []
    used: set = set()

    def extend(i):
        if i == len(order):
            yield tuple(image)
            return
        back = earlier[i]
        if back:
            cands = g.neighbors(image[pos[back[0]]])
        else:
            cands = g.nodes
        for c in cands:
            if c in used or g.degree(c) < need[i]:
                continue
            if any(not g.has_edge(c, image[pos[q]]) for q in back[1:]):
                continue
            image.append(c)
            used.add(c)
            yield from extend(i + 1)
            used.discard(c)
            image.pop()

    if g.degree(anchor) < need[0]:
        return
    image.append(anchor)
    used.add(anchor)
    yield from extend(1)


def characteristic_subgraphs(d1: D1Graph, pattern: nx.Graph) -> list[frozenset]:
    """Node sets of the subgraphs of D1 isomorphic to the pattern (unlabelled).

    The search is anchored: a fixed pattern node is sent to each node of D1 in
    turn and the rest is extended along pattern edges in BFS order.
    """
    g = d1.graph
    if pattern.number_of_nodes() == 0:
        return []
    root = min(pattern.nodes, key=lambda p: (-pattern.degree(p), str(p)))
    order = list(nx.bfs_tree(pattern, root))
    if len(order) != pattern.number_of_nodes():
        raise ReconstructionError("the pattern graph must be connected")
    found = set()
    for anchor in g.nodes:
        for emb in _embeddings_from(g, pattern, order, anchor):
            found.add(frozenset(emb))
    return sorted(found, key=lambda s: sorted(n.label() for n in s))


def is_label_consistent(nodes: frozenset, graph: DefiningGraph) -> bool:
    """The type-2 nodes of a characteristic subgraph carry Gamma's label multiset."""
    labels = sorted(graph.m(*h.pair) for h in nodes if isinstance(h, Type2Handle))
    return labels == sorted(m for _p, m in graph.edges())


@dataclass
class AlgebraicComplex:
    type2: list
    type1: list
    edges: list                      # (Type1Node, Type2Handle)
    apices: list                     # node sets of characteristic subgraphs
    simplices: list = field(default_factory=list)   # (apex index, Type1Node, Type2Handle)
    radius: int = 0
    length_bound: int = 0
    graph: DefiningGraph | None = None

    def check_invariants(self) -> list[str]:
        problems = []
        t1, t2 = set(self.type1), set(self.type2)
        for y, h in self.edges:
            if y not in t1 or h not in t2:
                problems.append(f"edge {y.label()} - {h.label()} is not bipartite")
        es = {(y, h) for y, h in self.edges}
        for i, y, h in self.simplices:
            if (y, h) not in es:
                problems.append(f"simplex at apex {i} uses a non-edge")
            if y not in self.apices[i] or h not in self.apices[i]:
                problems.append(f"simplex at apex {i} leaves its subgraph")
        return problems

    def to_json(self) -> dict:
        idx2 = {h: i for i, h in enumerate(self.type2)}
        idx1 = {y: i for i, y in enumerate(self.type1)}
        return {
            "ball": {"radius": self.radius, "length_bound": self.length_bound},
            "type2": [{"key": format_word(h.key), "pair": list(h.pair)} for h in self.type2],
            "type1": [{"handles": sorted(idx2[h] for h in y.handles),
                       "intersection": format_word(y.intersection), "sweep_radius": y.radius}
                      for y in self.type1],
            "edges": sorted([idx1[y], idx2[h]] for y, h in self.edges),
            "apices": [{"type1": sorted(idx1[n] for n in s if n in idx1),
                        "type2": sorted(idx2[n] for n in s if n in idx2)} for s in self.apices],
            "simplices": sorted([i, idx1[y], idx2[h]] for i, y, h in self.simplices),
        }


def build_algebraic_complex(d1: D1Graph, subgraphs: list[frozenset]) -> AlgebraicComplex:
    edges = []
    for u, v in d1.graph.edges():
        y, h = (u, v) if isinstance(u, Type1Node) else (v, u)
        edges.append((y, h))
    edges.sort(key=lambda e: (e[0].label(), e[1]))
    simplices = []
    for i, nodes in enumerate(subgraphs):
        for u, v in d1.graph.subgraph(nodes).edges():
            y, h = (u, v) if isinstance(u, Type1Node) else (v, u)
            simplices.append((i, y, h))
    return AlgebraicComplex(d1.type2(), d1.type1(), edges, list(subgraphs), simplices,
                            d1.radius, d1.length_bound, d1.gamma)


@dataclass
class FReport:
    apices: int
    matched_copies: int
    simplices: int
    ball_triangles: int
    bijective: bool
    unmatched: list = field(default_factory=list)

    def to_json(self) -> dict:
        return dict(self.__dict__)


def verify_F(cx: AlgebraicComplex, d1: D1Graph, ball: ComplexBall) -> FReport:
    """Simplex-level comparison of the algebraic complex with the ball.

    Apex i goes to the copy g whose essential nodes are the image of subgraph
    i; a simplex (i, y, h) goes to the triangle (g, F1(y), F1(h)). The compared
    part of the ball is every copy whose essential nodes lie in the image of D1.
    """
    f = F1_map(d1, ball)
    image = set(f.values())
    copy_of = {}
    for g, verts in ball.copy_vertices.items():
        nodes = frozenset(v for t, v in verts.items() if t)
        if nodes <= image:
            copy_of.setdefault(nodes, g)
    apex_copy = {}
    unmatched = []
    for i, s in enumerate(cx.apices):
        key = frozenset(f[n] for n in s)
        g = copy_of.get(key)
        if g is None:
            unmatched.append(i)
        else:
            apex_copy[i] = g
    ball_tris = set()
    for g in set(copy_of.values()):
        verts = ball.copy_vertices[g]
        for (a, b), _m in ball.graph.edges():
            for x in (a, b):
                ball_tris.add((verts[()], verts[(x,)], verts[(a, b)]))
    mapped = set()
    for i, y, h in cx.simplices:
        if i in apex_copy:
            mapped.add((ball.copy_vertices[apex_copy[i]][()], f[y], f[h]))
    bij = (not unmatched and len(set(apex_copy.values())) == len(cx.apices)
           and len(set(apex_copy.values())) == len(set(copy_of.values()))
           and len(mapped) == len(cx.simplices) and mapped == ball_tris)
    return FReport(len(cx.apices), len(apex_copy), len(cx.simplices), len(ball_tris), bij,
                   [sorted(n.label() for n in cx.apices[i]) for i in unmatched])


# induced maps

@dataclass
class InducedMap:
    handles: dict
    nodes: dict
    apices: dict
    truncated: list
    compatible: bool

    def to_json(self) -> dict:
        return {
            "handles": {h.label(): v.label() for h, v in sorted(self.handles.items())},
            "type1": {y.label(): v.label() for y, v in sorted(self.nodes.items(), key=lambda kv: kv[0].label())},
            "apices": {str(i): j for i, j in sorted(self.apices.items())},
            "truncated": list(self.truncated),
            "compatible": self.compatible,
        }


def apply_images(images: dict, w: Word) -> Word:
    letters = []
    for gen, sign in w:
        img = images[gen]
        letters.extend(img if sign > 0 else inverse(img))
    return Word(letters).reduced()


def _generator_key(oracle: Oracle, w: Word) -> Word:
    """Parabolic key of a conjugate of a generator or its inverse."""
    h = w.height()
    if h not in (1, -1):
        raise ReconstructionError(f"{format_word(w)} is not a conjugate of a generator (height {h})")
    if h < 0:
        w = inverse(w)
    return oracle.shortlex_geodesic(w)


def induced_map(images: dict, source: AlgebraicComplex, target: AlgebraicComplex,
                target_data: SubgroupData) -> InducedMap:
    """The combinatorial map of D_Gamma induced by a group map given on generators.

    phi(g A_ab g^-1) is located as the unique target handle containing both
    phi(g a g^-1) and phi(g b g^-1).
    """
    o = target_data.oracle
    hmap, truncated = {}, []
    for h in source.type2:
        a, b = h.pair
        keys = []
        for x in (a, b):
            keys.append(_generator_key(o, apply_images(images, concat(h.key, Word.of(x), inverse(h.key)))))
        cands = target_data.members.get(keys[0], frozenset()) & target_data.members.get(keys[1], frozenset())
        cands = [c for c in cands if c in set(target.type2)]
        if len(cands) == 1:
            hmap[h] = cands[0]
        elif not cands:
            truncated.append(h.label())
        else:
            raise ReconstructionError(f"image of {h.label()} is not unique")
    by_handles = {y.handles: y for y in target.type1}
    nmap = {}
    for y in source.type1:
        if all(h in hmap for h in y.handles):
            img = frozenset(hmap[h] for h in y.handles)
            if img in by_handles:
                nmap[y] = by_handles[img]
            else:
                truncated.append(y.label())
    apex_index = {s: j for j, s in enumerate(target.apices)}
    amap = {}
    for i, s in enumerate(source.apices):
        img = set()
        ok = True
        for n in s:
            m = hmap.get(n) if isinstance(n, Type2Handle) else nmap.get(n)
            if m is None:
                ok = False
                break
            img.add(m)
        if ok and frozenset(img) in apex_index:
            amap[i] = apex_index[frozenset(img)]
        else:
            truncated.append(f"apex {i}")
    tedges = set(target.edges)
    tsimp = set(target.simplices)
    compatible = len(set(hmap.values())) == len(hmap) and len(set(nmap.values())) == len(nmap)
    for h, v in hmap.items():
        if source.graph.m(*h.pair) != target.graph.m(*v.pair):
            compatible = False
    for y, h in source.edges:
        if y in nmap and h in hmap and (nmap[y], hmap[h]) not in tedges:
            compatible = False
    for i, y, h in source.simplices:
        if i in amap and y in nmap and h in hmap and (amap[i], nmap[y], hmap[h]) not in tsimp:
            compatible = False
    return InducedMap(hmap, nmap, amap, truncated, compatible)


def sorted_handles(ball: ComplexBall) -> list[Type2Handle]:
    return [handle_of(v) for v in sort_vertices(ball.graph, ball.vertices()) if v.type == 2]
