"""Arrows between principal triangles and the principal hexagon patterns.

For a (3,3,3) triple the principal triangle g.K is the union of the six base
triangles of the copy g. Adjacent principal triangles g.K and h.K satisfy
g^-1 h = s^k for a generator s; the arrow points from g.K to h.K when k > 0
and is double when |k| >= 2. Six principal triangles around a type-2 vertex
form a principal hexagon; walking around it reads an exponent tuple
(k_1, ..., k_6) with s^k1 t^k2 ... t^k6 = 1 in A_3.

Arrow values are signed ints: +1/-1 single forward/backward, +2/-2 double.
"""

from __future__ import annotations

import itertools
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .deligne import ComplexBall, CosetVertex
from .dihedral import normal_form_local
from .oracle import Oracle
from .words import Word, format_word, height

SINGLE_PATTERN = "all_single_alternating_consistent"
DOUBLE_PATTERN = "two_double_opposite"
INVALID = "invalid"

ARROW_VALUES = (1, -1, 2, -2)


def arrow_of(k: int) -> int:
    if k == 0:
        raise ValueError("exponent 0 gives no arrow")
    return (1 if k > 0 else -1) * (1 if abs(k) == 1 else 2)


def hexagon_symmetries(t: Sequence[int]) -> set[tuple[int, ...]]:
    """Images of a cyclic tuple under the 12 symmetries of the hexagon.

    Rotations shift the walk's starting triangle; reflections reverse the walk,
    which reverses the tuple and flips every sign.
    """
    t = tuple(t)
    out = set()
    for r in range(6):
        x = t[r:] + t[:r]
        out.add(x)
        out.add(tuple(-k for k in reversed(x)))
    return out


LEGAL_PATTERNS = {
    SINGLE_PATTERN: frozenset(hexagon_symmetries((1, 1, 1, -1, -1, -1))),
    DOUBLE_PATTERN: frozenset(hexagon_symmetries((2, 1, 1, -2, -1, -1))
                              | hexagon_symmetries((-2, 1, 1, 2, -1, -1))),
}
ALL_LEGAL = LEGAL_PATTERNS[SINGLE_PATTERN] | LEGAL_PATTERNS[DOUBLE_PATTERN]


def classify_arrows(arrows: Sequence[int]) -> str:
    t = tuple(arrows)
    for name, pats in LEGAL_PATTERNS.items():
        if t in pats:
            return name
    return INVALID


def exponents_trivial(ks: Sequence[int]) -> bool:
    local = []
    for i, k in enumerate(ks):
        x = 1 + (i % 2)
        local.extend([x if k > 0 else -x] * abs(k))
    return normal_form_local(3, tuple(local)) == (0, ())


def classify_exponents(ks: Sequence[int]) -> str:
    """Pattern of the hexagon read from exact exponents; a non-trivial word is invalid."""
    if len(ks) != 6 or any(k == 0 for k in ks):
        return INVALID
    if not exponents_trivial(ks):
        return INVALID
    return classify_arrows([arrow_of(k) for k in ks])


def legal_lifts(arrows: Sequence[int], bound: int = 3) -> list[tuple[int, ...]]:
    """Exponent tuples with |k| <= bound inducing these arrows and trivial in A_3."""
    choices = []
    for a in arrows:
        if abs(a) == 1:
            choices.append([a])
        else:
            sign = 1 if a > 0 else -1
            choices.append([sign * k for k in range(2, bound + 1)])
    return [ks for ks in itertools.product(*choices) if exponents_trivial(ks)]


# arrow systems over abstract regions

@dataclass
class HexRegion:
    """Principal triangles (hashable ids) and the hexagons whose arrows are constrained.

    Each hexagon is the cyclic sequence of its six triangles; the arrow read at
    step i is the one from hexagon[i] to hexagon[i+1].
    """
    hexagons: list[tuple]
    order: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.order:
            tris = []
            for h in self.hexagons:
                tris.extend(h)
            self.order = {t: i for i, t in enumerate(dict.fromkeys(tris))}

    def edge(self, x, y) -> tuple:
        return (x, y) if self.order[x] < self.order[y] else (y, x)

    def edges(self) -> list[tuple]:
        out = []
        for h in self.hexagons:
            for i in range(6):
                out.append(self.edge(h[i], h[(i + 1) % 6]))
        return list(dict.fromkeys(out))


def _read(values: dict, region: HexRegion, x, y):
    e = region.edge(x, y)
    v = values[e]
    return v if e == (x, y) else _flip(v)


def _flip(v):
    if isinstance(v, (set, frozenset)):
        return frozenset(-a for a in v)
    return -v


@dataclass
class ArrowSystem:
    """Known arrows on ordered triangle pairs: values[(x, y)] is the arrow read from x to y."""
    values: dict = field(default_factory=dict)

    def get(self, x, y):
        if (x, y) in self.values:
            return self.values[(x, y)]
        if (y, x) in self.values:
            return -self.values[(y, x)]
        return None

    def set(self, x, y, v: int):
        if (y, x) in self.values:
            self.values[(y, x)] = -v
        else:
            self.values[(x, y)] = v


@dataclass
class CompletionResult:
    status: str                    # "complete" or "contradiction"
    arrows: ArrowSystem | None
    contradiction_hexagon: tuple | None = None
    choices: list = field(default_factory=list)
    forced_by_propagation: int = 0


def _propagate(region: HexRegion, domains: dict) -> tuple | None:
    """Arc consistency over hexagon constraints; returns the failing hexagon or None."""
    hexes_of = defaultdict(list)
    for idx, h in enumerate(region.hexagons):
        for i in range(6):
            hexes_of[region.edge(h[i], h[(i + 1) % 6])].append(idx)
    queue = deque(range(len(region.hexagons)))
    queued = set(queue)
    while queue:
        idx = queue.popleft()
        queued.discard(idx)
        h = region.hexagons[idx]
        doms = [_read(domains, region, h[i], h[(i + 1) % 6]) for i in range(6)]
        support = [set() for _ in range(6)]
        for pat in ALL_LEGAL:
            if all(pat[i] in doms[i] for i in range(6)):
                for i in range(6):
                    support[i].add(pat[i])
        for i in range(6):
            x, y = h[i], h[(i + 1) % 6]
            e = region.edge(x, y)
            new = frozenset(support[i]) if e == (x, y) else frozenset(-a for a in support[i])
            if new != domains[e]:
                domains[e] = new
                if not new:
                    return h
                for j in hexes_of[e]:
                    if j not in queued:
                        queue.append(j)
                        queued.add(j)
    return None


def _initial_domains(region: HexRegion, partial) -> dict:
    domains = {e: frozenset(ARROW_VALUES) for e in region.edges()}
    for (x, y), v in partial.items():
        allowed = frozenset(v) if isinstance(v, (set, frozenset, list, tuple)) else frozenset([v])
        if any(a not in ARROW_VALUES for a in allowed):
            raise ValueError(f"invalid arrow value {v!r}")
        e = region.edge(x, y)
        if e != (x, y):
            allowed = frozenset(-a for a in allowed)
        if e not in domains:
            domains[e] = allowed
        else:
            domains[e] = domains[e] & allowed
    return domains


def complete_strip(partial: dict | ArrowSystem, region: HexRegion, all_solutions: bool = False,
                   limit: int = 10_000):
    """Complete a partial arrow system under the hexagon constraints.

    ``partial`` maps ordered triangle pairs to an arrow value or a set of
    allowed values (e.g. {2, -2} for a double arrow of unknown direction).
    Forced arrows are found by propagation; remaining freedom is resolved by
    deterministic backtracking in region order, the chosen values being
    recorded. Known arrows are never revised. With ``all_solutions`` the list
    of every completion (up to ``limit``) is returned instead.
    """
    if isinstance(partial, ArrowSystem):
        partial = partial.values
    domains = _initial_domains(region, partial)
    fail = _propagate(region, domains)
    if fail is not None:
        return [] if all_solutions else CompletionResult("contradiction", None, fail)
    forced = sum(1 for d in domains.values() if len(d) == 1)
    edges = sorted(domains, key=lambda e: (region.order.get(e[0], -1), region.order.get(e[1], -1)))
    solutions = []
    first_fail: list = []

    def search(doms: dict, choices: list):
        open_edges = [e for e in edges if len(doms[e]) > 1]
        if not open_edges:
            solutions.append((doms, choices))
            return not all_solutions or len(solutions) >= limit
        e = open_edges[0]
        for v in sorted(doms[e], key=lambda a: (abs(a), -a)):
            trial = dict(doms)
            trial[e] = frozenset([v])
            bad = _propagate(region, trial)
            if bad is not None:
                if not first_fail:
                    first_fail.append(bad)
                continue
            if search(trial, choices + [(e, v)]):
                return True
        return False

    search(domains, [])
    if all_solutions:
        return [ArrowSystem({e: next(iter(d)) for e, d in doms.items()}) for doms, _c in solutions]
    if not solutions:
        return CompletionResult("contradiction", None, first_fail[0] if first_fail else None)
    doms, choices = solutions[0]
    arrows = ArrowSystem({e: next(iter(d)) for e, d in doms.items()})
    return CompletionResult("complete", arrows, None, choices, forced)


# triangular lattice regions

_NBRS = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))


def lattice_triangle(v, k: int) -> frozenset:
    """Triangle of the lattice between directions k and k+1 around vertex v."""
    (x, y) = v
    d1, d2 = _NBRS[k % 6], _NBRS[(k + 1) % 6]
    return frozenset([(x, y), (x + d1[0], y + d1[1]), (x + d2[0], y + d2[1])])


def lattice_hexagon(v) -> tuple:
    return tuple(lattice_triangle(v, k) for k in range(6))


def lattice_region(centres: Iterable, extra: Iterable = ()) -> HexRegion:
    hexes = [lattice_hexagon(v) for v in centres]
    tris = []
    for h in hexes:
        tris.extend(h)
    tris.extend(extra)
    order = {t: i for i, t in enumerate(sorted(set(tris), key=lambda t: sorted(t)))}
    return HexRegion(hexes, order)


def big_triangle(n: int) -> tuple[list[frozenset], list[tuple], set]:
    """Up-triangle of side n: its small triangles, its vertices, and its corners."""
    tris = []
    for i in range(n):
        for j in range(n - i):
            tris.append(frozenset([(i, j), (i + 1, j), (i, j + 1)]))
            if i + j < n - 1:
                tris.append(frozenset([(i + 1, j), (i, j + 1), (i + 1, j + 1)]))
    verts = [(i, j) for i in range(n + 1) for j in range(n + 1 - i)]
    corners = {(0, 0), (n, 0), (0, n)}
    return tris, verts, corners


def triangle_region_with_double_sides(n: int) -> tuple[HexRegion, dict]:
    """Region M (side n) with double arrows of unknown direction across its sides.

    Hexagon constraints sit at the non-corner vertices of M; the seed arrows
    are on the edges between M and the triangles just outside its sides.
    """
    tris, verts, corners = big_triangle(n)
    inside = set(tris)
    centres = [v for v in verts if v not in corners]
    region = lattice_region(centres, tris)
    seeds = {}
    for h in region.hexagons:
        for i in range(6):
            x, y = h[i], h[(i + 1) % 6]
            if (x in inside) != (y in inside):
                seeds[region.edge(x, y)] = {2, -2}
    return region, seeds


def strip_region(period: int, rows: int = 2) -> tuple[HexRegion, dict, list]:
    """A z-periodic horizontal strip with doubles of unknown direction across y = 0.

    The translation along the strip (the centre z acting on its minset) makes
    the arrow system periodic, so lattice points are taken modulo ``period`` in
    x. Hexagon centres are the vertices on the lines y = 0, ..., rows - 1.
    Returns the region, the seeds, and the edges inside the row 0 <= y <= 1
    in the form ((tail position, head position), edge) where positions number
    the row triangles from left to right.
    """
    if period < 3:
        raise ValueError("period must be >= 3")

    def red(p):
        return (p[0] % period, p[1])

    def tri(v, k):
        d1, d2 = _NBRS[k % 6], _NBRS[(k + 1) % 6]
        return frozenset(map(red, [v, (v[0] + d1[0], v[1] + d1[1]), (v[0] + d2[0], v[1] + d2[1])]))

    hexes = [tuple(tri((x, y), k) for k in range(6)) for y in range(rows) for x in range(period)]
    order = {}
    for h in hexes:
        for t in h:
            order.setdefault(t, len(order))
    region = HexRegion(hexes, order)

    def row_pos(t):
        low = [p for p in t if p[1] == 0]
        if len(low) == 2:
            xs = {p[0] for p in low}
            return 2 * (max(xs) if xs == {0, period - 1} else min(xs))
        return 2 * ((low[0][0] - 1) % period) + 1

    seeds = {}
    row = []
    for e in region.edges():
        x, y = e
        shared = x & y
        if {p[1] for p in shared} == {0}:
            seeds[e] = {2, -2}
        elif all(p[1] in (0, 1) for p in x | y):
            row.append(((row_pos(x), row_pos(y)), e))
    return region, seeds, row


def row_direction(positions: tuple, value: int, period: int) -> int:
    """+1 if an arrow inside the strip row points rightwards, -1 otherwise."""
    pa, pb = positions
    rightward = (pb - pa) % (2 * period) == 1
    return (1 if rightward else -1) * (1 if value > 0 else -1)


# hexagons harvested from a ball

@dataclass(frozen=True)
class PrincipalHexagon:
    centre: CosetVertex
    copies: tuple           # six copy reps in walk order
    exponents: tuple        # k_i with copies[i+1] = copies[i] . x_i^k_i
    generators: tuple       # x_i


def derive_arrows(ball: ComplexBall, oracle: Oracle | None = None, copies: Iterable[Word] | None = None,
                  verify: bool = True) -> ArrowSystem:
    """Arrows between all pairs of copies sharing a type-1 vertex.

    g^-1 h = s^k forces k = ht(h) - ht(g); the oracle confirms the relation.
    """
    allowed = set(ball.copies) if copies is None else set(copies)
    oracle = oracle or ball.oracle()
    arrows = ArrowSystem()
    for v in ball.vertices():
        if v.type != 1:
            continue
        holders = [g for g in ball.copies_of(v) if g in allowed]
        s = v.tag[0]
        for g, h in itertools.combinations(holders, 2):
            k = height(h) - height(g)
            if k == 0:
                raise ValueError(f"copies {format_word(g)} and {format_word(h)} coincide")
            if verify:
                diff = Word(tuple(g.inverse()) + tuple(h) + tuple(Word.power(s, -k)))
                if not oracle.is_trivial(diff):
                    raise ValueError(f"{format_word(g)}^-1 {format_word(h)} is not a power of {s}")
            arrows.set(g, h, arrow_of(k))
    return arrows


def harvest_hexagons(ball: ComplexBall, v: CosetVertex, limit: int | None = None) -> list[PrincipalHexagon]:
    """All principal hexagons around the type-2 vertex v inside the ball."""
    if v.type != 2:
        raise ValueError("hexagons are centred at type-2 vertices")
    a, b = v.tag
    if ball.graph.m(a, b) != 3:
        raise ValueError("principal hexagons need a coefficient-3 pair")
    holders = set(ball.copies_of(v))
    cv = ball.copy_vertices

    def step(c, gen):
        y = cv[c][(gen,)]
        return [d for d in ball.copies_of(y) if d != c and d in holders]

    order = {c: i for i, c in enumerate(sorted(holders, key=lambda w: (len(w), str(w))))}
    found = {}
    for c in sorted(holders, key=order.get):
        # forward a, b, a from c; backward b, a, b from c
        fwd = defaultdict(list)
        for c1 in step(c, a):
            for c2 in step(c1, b):
                if c2 == c:
                    continue
                for c3 in step(c2, a):
                    if c3 not in (c, c1):
                        fwd[c3].append((c1, c2))
        for c5 in step(c, b):
            for c4 in step(c5, a):
                if c4 == c:
                    continue
                for c3 in step(c4, b):
                    for c1, c2 in fwd.get(c3, ()):
                        cyc = (c, c1, c2, c3, c4, c5)
                        if len(set(cyc)) != 6:
                            continue
                        key = min(_cyclic_forms(cyc, order))
                        if key not in found:
                            gens = tuple(a if i % 2 == 0 else b for i in range(6))
                            ks = tuple(height(cyc[(i + 1) % 6]) - height(cyc[i]) for i in range(6))
                            found[key] = PrincipalHexagon(v, cyc, ks, gens)
                            if limit is not None and len(found) >= limit:
                                return list(found.values())
    return list(found.values())


def _cyclic_forms(cyc, order):
    idx = [order[c] for c in cyc]
    for r in range(6):
        x = idx[r:] + idx[:r]
        yield tuple(x)
        yield tuple(reversed(x))


def classify_hexagon(h: PrincipalHexagon, arrows: ArrowSystem | None = None) -> str:
    """Pattern of a principal hexagon; exact exponents are checked when present."""
    if arrows is None:
        return classify_exponents(h.exponents)
    read = []
    for i in range(6):
        a = arrows.get(h.copies[i], h.copies[(i + 1) % 6])
        if a is None:
            raise ValueError("hexagon adjacency without an arrow")
        read.append(a)
    name = classify_arrows(read)
    if name != INVALID and h.exponents and not exponents_trivial(h.exponents):
        return INVALID
    return name


def ball_region(ball: ComplexBall, hexagons: list[PrincipalHexagon]) -> HexRegion:
    return HexRegion([h.copies for h in hexagons])
