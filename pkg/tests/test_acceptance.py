"""Acceptance criteria 1-9.

Each test records one line "criterion N: PASS|FAIL ..." that is printed at
the end of the pytest run (see conftest.py) and also when this file is run
as a script. Tolerances: every comparison is exact (integer, rational or
word equality); only wall-clock limits are numeric and pinned below.
"""

from __future__ import annotations

import itertools
import random
import time

import networkx as nx
import pytest

from artin_deligne.automorphisms import decide_isomorphic, out_group
from artin_deligne.deligne import (Polygon, build_ball, disk_regions, essential_skeleton, face_curvature,
                                   fundamental_domain, gauss_bonnet_audit, polygon_cycle, structure_report)
from artin_deligne.dihedral import (DihedralGroup, centre_element, dihedral_equal, normal_form_local,
                                    trivial_2m_syllable_tuples)
from artin_deligne.graph import DefiningGraph, graph_automorphisms, triangle
from artin_deligne.hexagon import (ALL_LEGAL, DOUBLE_PATTERN, SINGLE_PATTERN, arrow_of, classify_exponents,
                                   legal_lifts)
from artin_deligne.oracle import Oracle
from artin_deligne.reconstruct import (SubgroupData, adjacency_property, build_algebraic_complex, build_D1,
                                       characteristic_subgraphs, gamma_bar, is_label_consistent, verify_F,
                                       verify_F1)
from artin_deligne.subgroups import centraliser_presentation_checks, exotic_subgroup
from artin_deligne.words import Word, commutator, concat, inverse, parse_word
from conftest import K4_MIXED_EDGES
from oracles import (braid_holds, central_quotient_key, perm_eval, positive_monoid_key, reduce_word,
                     reduced_words)

# wall-clock limits in seconds
LIMIT_1 = 60.0
LIMIT_2 = 10.0
LIMIT_3 = 120.0
LIMIT_6 = 600.0
LIMIT_8 = 5.0

RESULTS: list[str] = []

# permutation images of a, b, c in S6 satisfying the (3,3,4) relations
S6_334 = {"a": (0, 5, 4, 2, 1, 3), "b": (0, 4, 3, 1, 5, 2), "c": (4, 1, 5, 2, 3, 0)}


def record(n: int, ok: bool, detail: str) -> bool:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    RESULTS.append(line)
    print(line)
    return ok


def _partition(key, m, words):
    groups: dict = {}
    for w in words:
        groups.setdefault(key(m, w), set()).add(w)
    return {frozenset(g) for g in groups.values()}


# 1

def test_criterion_1_dihedral():
    t0 = time.perf_counter()
    words = list(reduced_words(8))
    bad = []
    for m in (3, 4, 5, 6):
        nf = _partition(normal_form_local, m, words)
        if nf != _partition(positive_monoid_key, m, words):
            bad.append(f"m={m} braid closure")
        if nf != _partition(central_quotient_key, m, words):
            bad.append(f"m={m} central quotient")
        g = DihedralGroup(m)
        z = centre_element(g)
        for x in (Word.of("s"), Word.of("t")):
            if not dihedral_equal(g, concat(z, x), concat(x, z)):
                bad.append(f"m={m} centre")
    dt = time.perf_counter() - t0
    ok = not bad and dt < LIMIT_1
    record(1, ok, f"{len(words)} words of length <= 8, m = 3..6, exact partition equality; "
                  f"{dt:.1f}s (limit {LIMIT_1:.0f}s) {bad or ''}")
    assert ok


# 2

def test_criterion_2_hexagon():
    t0 = time.perf_counter()
    tuples = trivial_2m_syllable_tuples(3, 3)
    brute = []
    for ks in itertools.product([k for k in range(-3, 4) if k], repeat=6):
        w = []
        for i, k in enumerate(ks):
            x = 1 + i % 2
            w.extend([x if k > 0 else -x] * abs(k))
        if positive_monoid_key(3, reduce_word(w)) == (0, ()):
            brute.append(ks)
    same_sign = [t for t in tuples if all(k > 0 for k in t) or all(k < 0 for k in t)]
    forward = all(classify_exponents(t) in (SINGLE_PATTERN, DOUBLE_PATTERN) for t in tuples)
    induced = {tuple(arrow_of(k) for k in t) for t in tuples}
    backward = all(legal_lifts(p) for p in ALL_LEGAL) and induced == set(ALL_LEGAL)
    dt = time.perf_counter() - t0
    ok = (tuples == brute and bool(tuples) and (1, 1, 1, -1, -1, -1) in tuples and not same_sign
          and forward and backward and dt < LIMIT_2)
    record(2, ok, f"{len(tuples)} trivial tuples (K=3), {len(ALL_LEGAL)} legal arrow patterns, two-way exact; "
                  f"{dt:.1f}s (limit {LIMIT_2:.0f}s)")
    assert ok


# 3

def test_criterion_3_exotic(t333):
    t0 = time.perf_counter()
    o = Oracle(t333)
    h = exotic_subgroup(t333, "abc")
    s, t = h.generators
    z = parse_word("abcabc")
    checks = {
        "s = b^-1, t = b abc": (s, t) == (parse_word("B"), parse_word("b a b c")),
        "z = stst": o.are_equal(concat(s, t, s, t), z),
        "z = tsts": o.are_equal(concat(t, s, t, s), z),
        "[b, abcabc] = 1": o.is_trivial(commutator(parse_word("b"), z)),
        "(abc)^2 = abcabc": o.are_equal(parse_word("abc") ** 2, z),
    }
    # b^k = z^j forces k = 6j by height; the oracle checks every k against j in -1..1 as well
    free = True
    for k in range(1, 7):
        for j in (-1, 0, 1):
            if o.are_equal(parse_word("b") ** k, z ** j):
                free = False
    checks["b^k not in <z0>, 1 <= k <= 6"] = free
    checks["presentation report"] = centraliser_presentation_checks(t333, "abc", o).ok
    dt = time.perf_counter() - t0
    ok = all(checks.values()) and dt < LIMIT_3
    failed = [k for k, v in checks.items() if not v]
    record(3, ok, f"{len(checks)} exact oracle checks, default cap {o.cap}; {dt:.1f}s (limit {LIMIT_3:.0f}s)"
                  + (f" failed: {failed}" if failed else ""))
    assert ok


# 4

def _certified_regions(ball, oracle):
    """Single polygons on interior copies, plus every vertex disk (and union
    of two) whose full disk of copies was generated."""
    return [reg for reg in disk_regions(ball, oracle, max_pairs=100)
            if len(reg) > 1 or ball.is_interior_copy(reg[0].copy)]


def test_criterion_4_gauss_bonnet(ball333_r3, ball345_r3, o333, o345):
    totals = []
    n_disks = 0
    for ball, o in ((ball333_r3, o333), (ball345_r3, o345)):
        for reg in _certified_regions(ball, o):
            rep = gauss_bonnet_audit(ball, reg)
            if rep.is_disk:
                n_disks += 1
                totals.append(rep.total)
    totals_ok = bool(totals) and all(t == 2 for t in totals)
    corners = []
    for labels in ((3, 3, 3), (3, 3, 4), (3, 4, 5), (4, 4, 4), (3, 3, 7)):
        g = triangle(*labels)
        curv = face_curvature(g, polygon_cycle(fundamental_domain(g), Polygon(Word(), ("a", "b", "c"))))
        expect_zero = max(labels) == 3
        corners.append(curv == 0 if expect_zero else curv < 0)
    ok = totals_ok and all(corners)
    record(4, ok, f"{n_disks} certified disk regions (radius 3, (3,3,3) and (3,4,5)), every total = 2pi exactly; "
                  f"single-polygon curvature 0 at (3,3,3) and < 0 otherwise")
    assert ok


# 5

def test_criterion_5_structure(ball333_r3, ball345, ball345_r3, o333, o345):
    ok = True
    parts = []
    for name, ball, o in (("(3,3,3) R3", ball333_r3, o333), ("(3,4,5) R2", ball345, o345),
                          ("(3,4,5) R3", ball345_r3, o345)):
        rep = structure_report(ball, o)
        good = rep["bipartite"] and not rep["npod_violations"] and not rep["type0_violations"]
        if name.startswith("(3,3,3)"):
            good = good and rep["type0_triangles_expected"] == 6
        ok = ok and good and rep["interior_type1"] > 0
        parts.append(f"{name}: {rep['interior_type1']} interior type-1")
    record(5, ok, "bipartite skeleton, n-pods, 6 base triangles per type-0 vertex; " + "; ".join(parts))
    assert ok


# 6 and 7

@pytest.fixture(scope="module")
def reconstructions(t345, o345, k4_mixed):
    t0 = time.perf_counter()
    out = []
    for name, g, o in (("(3,4,5)", t345, o345), ("K4 mixed 3/4", k4_mixed, Oracle(k4_mixed))):
        ball = build_ball(g, o, radius=2, length_bound=6)
        data = SubgroupData(ball, o)
        d1 = build_D1(ball, o, data)
        subs = characteristic_subgraphs(d1, gamma_bar(g))
        cx = build_algebraic_complex(d1, subs)
        out.append((name, ball, data, d1, subs, cx))
    return out, time.perf_counter() - t0


def test_criterion_6_reconstruction(reconstructions):
    runs, build_time = reconstructions
    t0 = time.perf_counter()
    ok = True
    parts = []
    for name, ball, _data, d1, subs, cx in runs:
        f1 = verify_F1(d1, ball)
        fr = verify_F(cx, d1, ball)
        labels = all(is_label_consistent(s, ball.graph) for s in subs)
        good = f1.ok and fr.bijective and not cx.check_invariants() and labels and bool(subs)
        ok = ok and good
        parts.append(f"{name}: D1 {f1.d1_nodes}/{f1.d1_edges} = skeleton {f1.skeleton_nodes}/{f1.skeleton_edges}, "
                     f"{len(subs)} apices, {fr.simplices} simplices")
    dt = build_time + time.perf_counter() - t0
    ok = ok and dt < LIMIT_6
    record(6, ok, "; ".join(parts) + f"; {dt:.1f}s (limit {LIMIT_6:.0f}s)")
    assert ok


def test_criterion_7_adjacency(reconstructions):
    runs, _ = reconstructions
    exceptions = 0
    pairs = adjacent = 0
    for _name, ball, data, *_ in runs:
        sk = essential_skeleton(ball)
        core = sorted(data.core)
        near = {h: nx.single_source_shortest_path_length(sk, h.vertex(), cutoff=2) for h in core}
        for h1, h2 in itertools.combinations(core, 2):
            a = adjacency_property(h1, h2, data=data) is not None
            d2 = near[h1].get(h2.vertex()) == 2
            pairs += 1
            adjacent += a
            exceptions += a != d2
    ok = exceptions == 0 and adjacent > 0
    record(7, ok, f"{pairs} handle pairs, {adjacent} adjacent, {exceptions} exceptions")
    assert ok


# 8

def _nx_iso(g1, g2):
    def conv(g):
        x = nx.Graph()
        x.add_nodes_from(g.vertices)
        for (a, b), m in g.edges():
            x.add_edge(a, b, m=m)
        return x
    return nx.is_isomorphic(conv(g1), conv(g2), edge_match=lambda e, f: e["m"] == f["m"])


def _rank4(labels):
    return DefiningGraph.from_edges("abcd", [(x, y, m) for (x, y), m in
                                             zip(itertools.combinations("abcd", 2), labels)])


def test_criterion_8_rigidity():
    t0 = time.perf_counter()
    rng = random.Random(8)
    base = [triangle(3, 3, 3), triangle(3, 4, 5), triangle(3, 3, 4), triangle(4, 4, 5), triangle(3, 5, 7),
            DefiningGraph.from_edges("abcd", K4_MIXED_EDGES), _rank4((3, 3, 3, 3, 3, 3)), _rank4((3, 4, 3, 3, 4, 3))]
    pairs = []
    for g in base:
        perm = list(g.vertices)
        rng.shuffle(perm)
        pairs.append((g, g.relabel(dict(zip(g.vertices, perm)))))
    pairs += [(triangle(3, 3, 4), triangle(3, 4, 4)), (triangle(3, 4, 5), triangle(3, 4, 6)),
              (triangle(3, 3, 3), triangle(3, 3, 4)), (triangle(4, 4, 5), triangle(4, 5, 5)),
              (triangle(3, 4, 5), triangle(5, 3, 4)), (triangle(3, 5, 7), triangle(3, 5, 8)),
              (_rank4((3, 4, 3, 3, 4, 3)), _rank4((4, 3, 3, 3, 3, 4))),
              (_rank4((3, 4, 3, 3, 4, 3)), _rank4((3, 4, 4, 3, 3, 3))),
              (_rank4((3, 3, 3, 3, 3, 3)), _rank4((3, 3, 3, 3, 3, 4))),
              (DefiningGraph.from_edges("abcd", K4_MIXED_EDGES), _rank4((3, 4, 3, 3, 4, 3))),
              (triangle(6, 6, 3), triangle(3, 6, 6)), (triangle(5, 5, 5), triangle(5, 5, 4))]
    agree = sum((decide_isomorphic(g1, g2) is not None) == _nx_iso(g1, g2) for g1, g2 in pairs)
    expected = {(3, 3, 3): 12, (3, 4, 5): 2, (3, 3, 4): 4}
    orders = {k: out_group(triangle(*k)).order for k in expected}
    k4 = _rank4((3,) * 6)
    k4_out = out_group(k4)
    axioms = all(not out_group(triangle(*k)).check_group_axioms() for k in expected) and not k4_out.check_group_axioms()
    dt = time.perf_counter() - t0
    ok = (len(pairs) >= 20 and agree == len(pairs) and orders == expected and len(graph_automorphisms(k4)) == 24
          and k4_out.order == 48 and axioms and dt < LIMIT_8)
    record(8, ok, f"{agree}/{len(pairs)} pairs agree with labelled isomorphism; Out orders {orders}, "
                  f"K4 equal labels |Aut| = {len(graph_automorphisms(k4))}, Out = {k4_out.order}; "
                  f"{dt:.2f}s (limit {LIMIT_8:.0f}s)")
    assert ok


# 9

def _rand_word(rng, letters, max_len):
    return Word((rng.choice(letters), rng.choice((1, -1))) for _ in range(rng.randint(0, max_len))).reduced()


def _scramble(rng, w, g):
    """An equal word: insert a random conjugate of a relator at a random position."""
    (a, b), m = rng.choice(g.edges())
    lhs = Word.of(*[(a, b)[i % 2] for i in range(m)])
    rhs = Word.of(*[(b, a)[i % 2] for i in range(m)])
    x = _rand_word(rng, "abc", 2)
    rel = concat(x, lhs, inverse(rhs), inverse(x))
    i = rng.randint(0, len(w))
    return Word(tuple(w)[:i] + tuple(rel) + tuple(w)[i:]).reduced()


def test_criterion_9_oracle(t334):
    rng = random.Random(2024)
    o = Oracle(t334)
    assert all(braid_holds(S6_334, x, y, t334.m(x, y)) for x, y in (("a", "b"), ("a", "c"), ("b", "c")))
    words = [_rand_word(rng, "abc", 10) for _ in range(400)]
    edge_words = []
    for (a, b), _m in t334.edges():
        edge_words += [_rand_word(rng, a + b, 10) for _ in range(34)]
    words += edge_words
    words = words[:500]
    bad = []
    # equal pairs by relator insertion, unequal candidates at random
    for u in words[:120]:
        v = _scramble(rng, u, t334)
        if not o.are_equal(u, v) or not o.are_equal(v, u):
            bad.append(("equal", u, v))
            continue
        x, y = _rand_word(rng, "abc", 3), _rand_word(rng, "abc", 3)
        if not o.are_equal(concat(x, u, y), concat(x, v, y)):
            bad.append(("congruence", u, v))
        w = _scramble(rng, v, t334)
        if not o.are_equal(u, w):
            bad.append(("transitivity", u, w))
    for u, v in zip(words[::2], words[1::2]):
        eq = o.are_equal(u, v)
        if eq != o.are_equal(v, u) or not o.are_equal(u, u):
            bad.append(("symmetry", u, v))
        # soundness against a finite quotient and the height map
        if eq and (perm_eval(u, S6_334) != perm_eval(v, S6_334) or u.height() != v.height()):
            bad.append(("quotient", u, v))
    for (a, b), m in t334.edges():
        g = DihedralGroup(m, (a, b))
        ew = [w for w in words if {x for x, _ in w} <= {a, b}]
        for u, v in zip(ew, ew[1:]):
            if o.are_equal(u, v) != dihedral_equal(g, u, v):
                bad.append(("dihedral", u, v))
        for u in ew:
            if o.is_trivial(u) != dihedral_equal(g, u, Word()):
                bad.append(("dihedral trivial", u))
    ok = not bad and len(words) == 500
    record(9, ok, f"{len(words)} random words of length <= 10 in (3,3,4), {len(edge_words)} single-edge; "
                  f"congruence, equivalence, S6 quotient and dihedral agreement exact; {len(bad)} failures")
    assert ok


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
