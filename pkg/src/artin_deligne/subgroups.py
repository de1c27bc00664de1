"""Classical and exotic dihedral Artin subgroups.

A classical subgroup is a conjugate g A_ab g^-1 of a rank-two standard
parabolic. An exotic one lives inside a (3,3,3) triple (a, b, c): it is
generated by s = b^-1 and t = b abc, satisfies stst = tsts, and equals the
centraliser of z = abcabc. Both are then conjugated by g.

Verdicts about all subgroups of the group are only made over candidates that
the supplied ball can represent, and every probe report carries the ball
parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .deligne import ComplexBall, CosetVertex, parabolic_key, standard_tree_index
from .graph import DefiningGraph
from .oracle import Oracle, OracleBoundExceeded
from .words import Word, commutator, concat, conjugate, format_word, inverse

CLASSICAL = "classical"
EXOTIC = "exotic"

HAS_ISOLATED = "has_isolated_witness"
NO_ISOLATED = "no_isolated_within_ball"


class SubgroupError(ValueError):
    pass


class InsufficientRadius(RuntimeError):
    """The ball does not contain enough of the complex to decide the probe."""

    def __init__(self, message: str, radius: int, length_bound: int, details=None):
        super().__init__(f"{message} (radius {radius}, length bound {length_bound})")
        self.radius = radius
        self.length_bound = length_bound
        self.details = details or []


@dataclass(frozen=True)
class DihedralSubgroup:
    kind: str
    conjugator: Word
    letters: tuple          # (a, b) for classical, (a, b, c) for exotic
    generators: tuple       # (s, t) as Words

    @property
    def coefficient(self) -> int | None:
        return 4 if self.kind == EXOTIC else None

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "conjugator": format_word(self.conjugator),
            "letters": list(self.letters),
            "generators": [format_word(w) for w in self.generators],
        }


@dataclass(frozen=True)
class CentreWitness:
    z: Word
    m_prime: int


def _check_letters(graph: DefiningGraph, letters):
    for x in letters:
        if x not in graph.vertices:
            raise SubgroupError(f"unknown generator {x!r}")
    if len(set(letters)) != len(letters):
        raise SubgroupError("generators must be distinct")


def classical_subgroup(graph: DefiningGraph, pair, conjugator: Word = Word()) -> DihedralSubgroup:
    a, b = pair
    _check_letters(graph, (a, b))
    m = graph.m(a, b)
    if m is None:
        raise SubgroupError(f"m_{a}{b} is infinite; <{a},{b}> is free, not dihedral Artin")
    g = Word(conjugator).reduced()
    gens = (conjugate(Word.of(a), g), conjugate(Word.of(b), g))
    return DihedralSubgroup(CLASSICAL, g, (a, b), gens)


def normalize_triple(graph: DefiningGraph, triple, conjugator: Word = Word()) -> tuple[tuple, Word]:
    """Rotate the triple to its lex-least rotation (graph order), fixing the subgroup.

    The subgroup for (x, y, z; g) equals the one for (y, z, x; g x), since both
    are centralisers of g (xyz)^2 g^-1.
    """
    order = {v: i for i, v in enumerate(graph.vertices)}
    t = tuple(triple)
    g = Word(conjugator).reduced()
    best = (t, g)
    for _ in range(2):
        # (x, y, z; h) -> (y, z, x; h x)
        g = concat(g, Word.of(t[0]))
        t = t[1:] + t[:1]
        if [order[x] for x in t] < [order[x] for x in best[0]]:
            best = (t, g)
    return best


def exotic_subgroup(graph: DefiningGraph, triple, conjugator: Word = Word(),
                    normalize: bool = True) -> DihedralSubgroup:
    """g <b^-1, b abc> g^-1 for a triple with all three coefficients 3."""
    if len(triple) != 3:
        raise SubgroupError("an exotic subgroup needs a triple of generators")
    _check_letters(graph, triple)
    a, b, c = triple
    for x, y in ((a, b), (a, c), (b, c)):
        if graph.m(x, y) != 3:
            raise SubgroupError(f"exotic subgroups need m = 3 on every pair, m_{x}{y} = {graph.m(x, y)}")
    t, g = normalize_triple(graph, triple, conjugator) if normalize else (tuple(triple), Word(conjugator).reduced())
    a, b, c = t
    s_gen = conjugate(Word([(b, -1)]), g)
    t_gen = conjugate(Word.of(b, a, b, c), g)
    return DihedralSubgroup(EXOTIC, g, t, (s_gen, t_gen))


def exotic_centre(h: DihedralSubgroup) -> Word:
    """g (abc)^2 g^-1, which equals stst for the generators."""
    a, b, c = h.letters
    return conjugate(Word.of(a, b, c, a, b, c), h.conjugator)


def _alternating(s: Word, t: Word, n: int) -> Word:
    return concat(*[(s, t)[i % 2] for i in range(n)])


def braid_relation_holds(s: Word, t: Word, m: int, oracle: Oracle) -> bool:
    return oracle.are_equal(_alternating(s, t, m), _alternating(t, s, m))


def verify_A4_relation(h: DihedralSubgroup, oracle: Oracle) -> bool:
    """stst = tsts on the generators of h."""
    s, t = h.generators
    return braid_relation_holds(s, t, 4, oracle)


def centre_witness(h: DihedralSubgroup, oracle: Oracle) -> CentreWitness:
    s, t = h.generators
    if h.kind == EXOTIC:
        m = 4
    else:
        m = oracle.graph.m(*h.letters)
    mp = math.lcm(m, 2) // 2
    z = concat(s, t) ** mp
    for gen in (s, t):
        if not oracle.is_trivial(commutator(z, gen)):
            raise SubgroupError(f"(st)^{mp} does not commute with {gen}")
    return CentreWitness(z, mp)


def contains(h: DihedralSubgroup, w: Word, oracle: Oracle) -> bool:
    """Membership of w in a classical subgroup or in the centraliser of an exotic centre."""
    if h.kind == CLASSICAL:
        return oracle.in_parabolic(concat(inverse(h.conjugator), w, h.conjugator), h.letters)
    return oracle.is_trivial(commutator(w, exotic_centre(h)))


def same_subgroup(h1: DihedralSubgroup, h2: DihedralSubgroup, oracle: Oracle) -> bool:
    if h1.kind != h2.kind:
        return False
    if h1.kind == CLASSICAL:
        if set(h1.letters) != set(h2.letters):
            return False
        return oracle.same_coset(h1.conjugator, h2.conjugator, h1.letters)
    z1, z2 = exotic_centre(h1), exotic_centre(h2)
    return oracle.are_equal(z1, z2) or oracle.are_equal(z1, inverse(z2))


# centraliser presentation

@dataclass
class PresentationReport:
    checks: dict = field(default_factory=dict)
    power_bound: int = 0

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {"ok": self.ok, "power_bound": self.power_bound, "checks": dict(self.checks)}


def centraliser_presentation_checks(graph: DefiningGraph, triple, oracle: Oracle,
                                    power_bound: int = 6) -> PresentationReport:
    """Discrete consequences of C(z0) / <z0> being Z * Z/2 for z0 = abcabc."""
    h = exotic_subgroup(graph, triple, normalize=False)
    a, b, c = h.letters
    z0 = Word.of(a, b, c, a, b, c)
    abc = Word.of(a, b, c)
    bw = Word.of(b)
    rep = PresentationReport(power_bound=power_bound)
    rep.checks["(abc)^2 = z0"] = (abc ** 2) == z0
    rep.checks["[b, z0] = 1"] = oracle.is_trivial(commutator(bw, z0))
    rep.checks["[abc, z0] = 1"] = oracle.is_trivial(commutator(abc, z0))
    # b^k = z0^j forces k = 6j by height, so only multiples of 6 need the oracle
    free = True
    for k in range(1, power_bound + 1):
        if k % 6:
            continue
        j = k // 6
        for sign in (1, -1):
            if oracle.are_equal(bw ** k, z0 ** (sign * j)):
                free = False
    rep.checks[f"b^k not in <z0> for 1 <= k <= {power_bound}"] = free
    return rep


# isolated intersections

@dataclass
class ProbeReport:
    verdict: str
    subgroup: DihedralSubgroup
    radius: int
    length_bound: int
    witnesses: list = field(default_factory=list)
    candidates_checked: int = 0

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "subgroup": self.subgroup.to_json(),
            "ball": {"radius": self.radius, "length_bound": self.length_bound},
            "candidates_checked": self.candidates_checked,
            "witnesses": self.witnesses,
        }


def handle_vertex(h: DihedralSubgroup, ball: ComplexBall, oracle: Oracle) -> CosetVertex:
    """The type-2 vertex of the ball whose stabiliser is the classical subgroup h."""
    order = {v: i for i, v in enumerate(ball.graph.vertices)}
    tag = tuple(sorted(h.letters, key=order.__getitem__))
    key = oracle.coset_key(h.conjugator, tag)
    v = CosetVertex(key, tag)
    if not ball.copies_of(v):
        raise InsufficientRadius(f"the vertex of {format_word(h.conjugator)} A_{''.join(tag)} is not in the ball",
                                 ball.radius, ball.length_bound)
    return v


def _classical_probe(h1: DihedralSubgroup, ball: ComplexBall, oracle: Oracle, partner) -> ProbeReport:
    # Every intersection of H1 = g A_ab g^-1 with another handle is conjugate
    # inside H1 to g<a>g^-1 or g<b>g^-1, so those two standard trees suffice.
    v1 = handle_vertex(h1, ball, oracle)
    index = standard_tree_index(ball, oracle)
    g = h1.conjugator
    keys = [parabolic_key(oracle, CosetVertex(g, (x,))) for x in h1.letters]
    if partner is not None:
        v2 = handle_vertex(partner, ball, oracle)
        if v2 == v1:
            raise SubgroupError("the partner subgroup must differ from H1")
        keys = sorted(index.stars.get(v1, frozenset()) & index.stars.get(v2, frozenset()),
                      key=lambda k: oracle.shortlex_key(oracle.encode(k)))
        if not keys:
            raise SubgroupError("the partner meets H1 trivially inside the ball")
    witnesses, short = [], []
    for k in keys:
        on_tree = sorted(index.tree.get(k, ()), key=lambda v: (oracle.shortlex_key(oracle.encode(v.rep)), v.tag))
        for v in on_tree:
            if not oracle.in_parabolic(concat(inverse(v.rep), k, v.rep), v.tag):
                raise SubgroupError(f"{v.label()} lies on the tree of {format_word(k)} but does not contain it")
        entry = {"intersection": format_word(k), "type2_vertices": [v.label() for v in on_tree]}
        (witnesses if len(on_tree) >= 3 else short).append(entry)
    if short:
        raise InsufficientRadius("a standard tree through H1 shows fewer than 3 type-2 vertices",
                                 ball.radius, ball.length_bound, short)
    return ProbeReport(NO_ISOLATED, h1, ball.radius, ball.length_bound, witnesses, len(keys))


def exotic_partner(h1: DihedralSubgroup, graph: DefiningGraph) -> DihedralSubgroup:
    """g <a, bac> g^-1, meeting g <b, abc> g^-1 in the cyclic group generated by g babc g^-1."""
    a, b, c = h1.letters
    return exotic_subgroup(graph, (b, a, c), h1.conjugator, normalize=False)


def _exotic_probe(h1: DihedralSubgroup, ball: ComplexBall, oracle: Oracle, partner) -> ProbeReport:
    graph = ball.graph
    a, b, c = h1.letters
    h2 = partner if partner is not None else exotic_partner(h1, graph)
    if same_subgroup(h1, h2, oracle):
        raise SubgroupError("the partner subgroup must differ from H1")
    g = h1.conjugator
    x = conjugate(Word.of(b, a, b, c), g)
    for h in (h1, h2):
        if not contains(h, x, oracle):
            raise SubgroupError(f"{format_word(x)} is not in both subgroups; the partner is not a witness")
    z1, z2 = exotic_centre(h1), exotic_centre(h2)
    centres = [z1, inverse(z1), z2, inverse(z2)]
    checked = 0
    triples = []
    verts = graph.vertices
    for p in verts:
        for q in verts:
            for r in verts:
                if len({p, q, r}) == 3 and graph.m(p, q) == graph.m(p, r) == graph.m(q, r) == 3:
                    triples.append((p, q, r))
    order = {v: i for i, v in enumerate(verts)}
    tri_seen = set()
    for k in sorted(ball.copies, key=lambda w: oracle.shortlex_key(oracle.encode(w))):
        gk = concat(g, k)
        for t in triples:
            # H3 = C(z3) with z3 = gk (pqr)^2 (gk)^-1
            z3 = conjugate(Word.of(*t, *t), gk)
            canon = oracle.shortlex_geodesic(z3)
            if canon in tri_seen:
                continue
            tri_seen.add(canon)
            checked += 1
            if not oracle.is_trivial(commutator(x, z3)):
                continue
            if not any(oracle.are_equal(z3, z) for z in centres):
                raise SubgroupError(f"third exotic subgroup with centre {format_word(z3)} contains the intersection")
    for v in ball.vertices():
        if v.type != 2:
            continue
        checked += 1
        tag = tuple(sorted(v.tag, key=order.__getitem__))
        if oracle.in_parabolic(concat(inverse(v.rep), inverse(g), x, g, v.rep), tag):
            raise SubgroupError(f"classical subgroup at {v.label()} contains the intersection")
    witness = {
        "H1": h1.to_json(),
        "H2": h2.to_json(),
        "intersection_generator": format_word(x),
        "centres": [format_word(z1), format_word(z2)],
    }
    return ProbeReport(HAS_ISOLATED, h1, ball.radius, ball.length_bound, [witness], checked)


def isolated_intersections_probe(h1: DihedralSubgroup, ball: ComplexBall, oracle: Oracle,
                                 partner: DihedralSubgroup | None = None) -> ProbeReport:
    """Bounded probe of the isolated-intersections property for a maximal subgroup.

    Classical: every cyclic intersection of H1 with another visible handle lies
    on a standard tree carrying at least three type-2 vertices, so a third
    subgroup always exists. Exotic: the partner g<a, bac>g^-1 meets H1 in a
    cyclic group that no other ball-representable maximal dihedral subgroup
    contains.
    """
    if partner is not None and partner.kind != h1.kind and h1.kind == EXOTIC:
        raise SubgroupError("the exotic probe needs an exotic partner")
    try:
        if h1.kind == CLASSICAL:
            return _classical_probe(h1, ball, oracle, partner)
        return _exotic_probe(h1, ball, oracle, partner)
    except OracleBoundExceeded as exc:
        raise InsufficientRadius(f"oracle bound reached: {exc}", ball.radius, ball.length_bound) from exc


def centre_avoids_handles(h: DihedralSubgroup, ball: ComplexBall, oracle: Oracle,
                          vertices=None) -> list[str]:
    """Type-2 vertices of the ball fixed by the exotic centre; empty means none."""
    if h.kind != EXOTIC:
        raise SubgroupError("only exotic centres are checked")
    z = exotic_centre(h)
    order = {v: i for i, v in enumerate(ball.graph.vertices)}
    hits = []
    pool = vertices if vertices is not None else ball.vertices()
    for v in pool:
        if v.type != 2:
            continue
        tag = tuple(sorted(v.tag, key=order.__getitem__))
        if oracle.in_parabolic(concat(inverse(v.rep), z, v.rep), tag):
            hits.append(v.label())
    return hits

