import itertools

import networkx as nx
import pytest

from artin_deligne.deligne import build_ball, essential_skeleton, fundamental_domain
from artin_deligne.graph import DefiningGraph
from artin_deligne.reconstruct import (ReconstructionError, SubgroupData, TruncationError, Type1Node, Type2Handle,
                                       adjacency_property, build_algebraic_complex, build_D1,
                                       characteristic_subgraphs, F1_map, gamma_bar, induced_map,
                                       is_label_consistent, verify_F, verify_F1)
from artin_deligne.words import Word, parse_word


@pytest.fixture(scope="module")
def r345(t345, o345):
    ball = build_ball(t345, o345, radius=2, length_bound=3)
    data = SubgroupData(ball, o345)
    d1 = build_D1(ball, o345, data)
    subs = characteristic_subgraphs(d1, gamma_bar(t345))
    return ball, data, d1, subs, build_algebraic_complex(d1, subs)


@pytest.fixture(scope="module")
def r334(t334, o334):
    ball = build_ball(t334, o334, radius=2, length_bound=3)
    data = SubgroupData(ball, o334)
    d1 = build_D1(ball, o334, data)
    subs = characteristic_subgraphs(d1, gamma_bar(t334))
    return ball, data, d1, subs, build_algebraic_complex(d1, subs)


def H(key, pair):
    return Type2Handle(parse_word(key), tuple(pair))


def test_adjacency_examples(r345):
    _ball, data, *_ = r345
    assert adjacency_property(H("1", "ab"), H("1", "bc"), data=data) == H("1", "ac")
    assert adjacency_property(H("1", "ab"), H("c", "ab"), data=data) is None
    with pytest.raises(ReconstructionError):
        adjacency_property(H("1", "ab"), H("1", "ab"), data=data)
    with pytest.raises(TruncationError):
        adjacency_property(H("1", "ab"), H("cacaca", "ab"), data=data)


def test_adjacency_is_distance_two(r345):
    ball, data, *_ = r345
    sk = essential_skeleton(ball)
    adjacent = 0
    for h1, h2 in itertools.combinations(sorted(data.core), 2):
        a = adjacency_property(h1, h2, data=data) is not None
        d = nx.shortest_path_length(sk, h1.vertex(), h2.vertex())
        assert a == (d == 2), (h1.label(), h2.label(), d)
        adjacent += a
    assert adjacent > 0


def test_d1_is_skeleton(r345):
    ball, _data, d1, *_ = r345
    rep = verify_F1(d1, ball)
    assert rep.ok
    assert rep.d1_nodes == rep.skeleton_nodes and rep.d1_edges == rep.skeleton_edges
    assert nx.is_bipartite(d1.graph)


def test_type1_nodes_match_stars(r345):
    ball, _data, d1, *_ = r345
    f = F1_map(d1, ball)
    sk = essential_skeleton(ball)
    for y in d1.type1():
        assert len(y.handles) == sk.degree(f[y]) == ball.graph.degree(f[y].tag[0])
        assert y.radius == ball.radius


def test_empty_interior(t345, o345):
    ball = fundamental_domain(t345, o345)
    d1 = build_D1(ball, o345)
    assert d1.graph.number_of_nodes() == 0
    cx = build_algebraic_complex(d1, characteristic_subgraphs(d1, gamma_bar(t345)))
    assert cx.apices == [] and cx.type1 == []


def test_characteristic_subgraphs_are_six_cycles(r345):
    ball, _data, d1, subs, _cx = r345
    cycles = {frozenset(c) for c in nx.simple_cycles(d1.graph, length_bound=6) if len(c) == 6}
    assert set(subs) == cycles
    base = frozenset(Type2Handle(Word(), p) for p in ball.pairs())
    assert any(base <= s for s in subs)
    for s in subs:
        assert is_label_consistent(s, ball.graph)


def test_subgraphs_are_translates(r345):
    ball, _data, d1, subs, cx = r345
    f = F1_map(d1, ball)
    translates = {frozenset(v for t, v in verts.items() if t) for verts in ball.copy_vertices.values()}
    for s in subs:
        assert frozenset(f[n] for n in s) in translates
    assert all(len([x for x in cx.simplices if x[0] == i]) == 6 for i in range(len(subs)))


def test_complex_invariants_and_F(r345):
    ball, _data, d1, _subs, cx = r345
    assert cx.check_invariants() == []
    rep = verify_F(cx, d1, ball)
    assert rep.bijective and rep.unmatched == []
    j = cx.to_json()
    assert len(j["simplices"]) == len(cx.simplices)


def test_no_subgraphs_gives_d1(r345):
    _ball, _data, d1, _subs, _cx = r345
    cx = build_algebraic_complex(d1, [])
    assert cx.simplices == [] and len(cx.edges) == d1.graph.number_of_edges()


def test_rank_four_pattern():
    g = DefiningGraph.from_edges("abcd", [("a", "b", 3), ("a", "c", 4), ("a", "d", 3),
                                          ("b", "c", 3), ("b", "d", 4), ("c", "d", 3)])
    p = gamma_bar(g)
    assert p.number_of_nodes() == 10 and p.number_of_edges() == 12


def test_rejects_infinite_labels():
    g = DefiningGraph.from_edges("abc", [("a", "b", 3), ("b", "c", 3)])
    ball = build_ball(g, radius=1, length_bound=1)
    with pytest.raises(ReconstructionError):
        SubgroupData(ball)


def test_identity_and_inversion_maps(r345):
    _ball, data, _d1, _subs, cx = r345
    ident = induced_map({x: Word.of(x) for x in "abc"}, cx, cx, data)
    assert ident.compatible and all(h == v for h, v in ident.handles.items())
    assert all(y == v for y, v in ident.nodes.items())
    inv = induced_map({x: Word([(x, -1)]) for x in "abc"}, cx, cx, data)
    assert inv.compatible
    for p in ("ab", "ac", "bc"):
        assert inv.handles[H("1", p)] == H("1", p)
    assert any(h != v for h, v in inv.handles.items())


def test_graph_swap_on_334(r334):
    ball, data, _d1, _subs, cx = r334
    # labels: m_ab = 3, m_ac = 3, m_bc = 4; swapping b and c preserves them
    assert (ball.graph.m("a", "b"), ball.graph.m("a", "c"), ball.graph.m("b", "c")) == (3, 3, 4)
    swap = induced_map({"a": Word.of("a"), "b": Word.of("c"), "c": Word.of("b")}, cx, cx, data)
    assert swap.compatible
    assert swap.handles[H("1", "ab")] == H("1", "ac")
    bad = induced_map({"a": Word.of("b"), "b": Word.of("a"), "c": Word.of("c")}, cx, cx, data)
    assert not bad.compatible


def test_non_generator_images_rejected(r345):
    _ball, data, _d1, _subs, cx = r345
    with pytest.raises(ReconstructionError):
        induced_map({"a": parse_word("a a"), "b": Word.of("b"), "c": Word.of("c")}, cx, cx, data)


def test_type1_labels_sorted(r345):
    _ball, _data, d1, *_ = r345
    labels = [y.label() for y in d1.type1()]
    assert labels == sorted(labels)
    assert all(isinstance(y, Type1Node) for y in d1.type1())
