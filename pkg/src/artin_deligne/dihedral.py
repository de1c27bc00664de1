"""Dihedral Artin groups A_m = <s, t | sts... = tst...> (m letters each side).

Elements are handled through the Garside structure: Delta is the alternating
positive word of length m, conjugation by Delta is the involution ``delta``
(swap s and t for odd m, identity for even m), and every element is uniquely
Delta^k Q with Q a positive word containing no alternating subword of length m.

Internally a word over {s, t} is a tuple of ints: 1 = s, 2 = t, negative for
inverses. The geodesic machinery below is shared with the oracle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from .words import Word, free_reduce

Local = tuple  # tuple of ints in {1, -1, 2, -2}


class DihedralError(ValueError):
    pass


@dataclass(frozen=True)
class DihedralGroup:
    m: int
    generators: tuple[str, str] = ("s", "t")

    def __post_init__(self):
        if isinstance(self.m, bool) or not isinstance(self.m, int) or self.m < 3:
            raise DihedralError(f"dihedral coefficient must be an integer >= 3, got {self.m!r}")
        s, t = self.generators
        if s == t:
            raise DihedralError("the two generators must differ")

    def to_local(self, w: Word) -> Local:
        s, t = self.generators
        out = []
        for gen, sign in w:
            if gen == s:
                out.append(sign)
            elif gen == t:
                out.append(2 * sign)
            else:
                raise DihedralError(f"letter {gen!r} is not one of {self.generators}")
        return tuple(out)

    def to_word(self, local: Local) -> Word:
        return Word((self.generators[abs(x) - 1], 1 if x > 0 else -1) for x in local)

    def delta(self) -> Word:
        return self.to_word(alternating(1, self.m))


@dataclass(frozen=True)
class DihedralNormalForm:
    central_power: int
    tail: Word

    def __str__(self):
        return f"Delta^{self.central_power} . {self.tail}"


# local-word primitives

def _other(x: int) -> int:
    return 3 - x


def alternating(start: int, length: int) -> Local:
    out = []
    x = start
    for _ in range(length):
        out.append(x)
        x = _other(x)
    return tuple(out)


def _delta_map(m: int, w) -> list:
    if m % 2 == 0:
        return list(w)
    return [(3 - x) if x > 0 else -(3 + x) for x in w]


def _reduce(w) -> list:
    out: list = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return out


def _extract_deltas(m: int, pos: list) -> tuple[int, list]:
    j = 0
    while True:
        run = 1
        hit = -1
        for i in range(1, len(pos)):
            run = run + 1 if pos[i] != pos[i - 1] else 1
            if run >= m:
                hit = i - m + 1
                break
        if hit < 0:
            return j, pos
        pos = _delta_map(m, pos[:hit]) + pos[hit + m:]
        j += 1


@lru_cache(maxsize=200_000)
def normal_form_local(m: int, w: Local) -> tuple[int, Local]:
    k = 0
    pos: list = []
    for x in w:
        if x > 0:
            pos.append(x)
        else:
            # x^-1 = Delta^-1 R with Delta = R x
            pos = _delta_map(m, pos)
            pos.extend(alternating(_other(-x) if m % 2 == 0 else -x, m)[:-1])
            k -= 1
    j, q = _extract_deltas(m, pos)
    return k + j, tuple(q)


def _alt_runs(w, positive: bool) -> tuple[int, int]:
    """(start, length) of the first longest alternating run of one sign."""
    best = (0, 0)
    i = 0
    n = len(w)
    while i < n:
        if (w[i] > 0) != positive:
            i += 1
            continue
        j = i + 1
        while j < n and (w[j] > 0) == positive and abs(w[j]) != abs(w[j - 1]):
            j += 1
        if j - i > best[1]:
            best = (i, j - i)
        i = j
    return best


def pn(m: int, w: Local) -> tuple[int, int]:
    """Capped lengths of the longest positive and negative alternating subwords."""
    return min(m, _alt_runs(w, True)[1]), min(m, _alt_runs(w, False)[1])


def is_geodesic_local(m: int, w: Local) -> bool:
    if any(w[i] == -w[i + 1] for i in range(len(w) - 1)):
        return False
    p, n = pn(m, w)
    return p + n <= m


def _shorten_once(m: int, w: list) -> list | None:
    pa, la = _alt_runs(w, True)
    pb, lb = _alt_runs(w, False)
    p, n = min(m, la), min(m, lb)
    if p + n <= m:
        return None
    A = w[pa:pa + p]
    B = w[pb:pb + n]
    D = [-x for x in reversed(B)]
    # C continues A to Delta; E precedes D in Delta
    C = list(alternating(_other(A[-1]), m - p))
    C_inv = [-x for x in reversed(C)]
    e_len = m - n
    E = list(alternating(_other(D[0]) if e_len % 2 else D[0], e_len))
    if pa < pb:
        U, V, W = w[:pa], w[pa + p:pb], w[pb + n:]
        return U + _delta_map(m, C_inv + V) + E + W
    U, V, W = w[:pb], w[pb + n:pa], w[pa + p:]
    return U + _delta_map(m, E + V) + C_inv + W


@lru_cache(maxsize=200_000)
def geodesic_local(m: int, w: Local) -> Local:
    """A geodesic word for the element represented by ``w``."""
    cur = _reduce(w)
    while True:
        nxt = _shorten_once(m, cur)
        if nxt is None:
            return tuple(cur)
        cur = _reduce(nxt)


def geodesic_length_local(m: int, w: Local) -> int:
    return len(geodesic_local(m, w))


@lru_cache(maxsize=100_000)
def _geodesics_of(m: int, nf: tuple[int, Local], g: Local) -> tuple[Local, ...]:
    results: list = []

    def dfs(prefix: tuple, rest: Local):
        if not rest:
            results.append(prefix)
            return
        for x in (1, 2, -1, -2):
            if prefix and prefix[-1] == -x:
                continue
            r = geodesic_local(m, (-x,) + rest)
            if len(r) == len(rest) - 1:
                dfs(prefix + (x,), r)

    dfs((), g)
    return tuple(results)


def geodesics_local(m: int, w: Local) -> tuple[Local, ...]:
    """Every geodesic word of the element represented by ``w``, in a fixed order."""
    g = geodesic_local(m, w)
    return _geodesics_of(m, normal_form_local(m, g), g)


# public API

def dihedral_normal_form(g: DihedralGroup, w: Word) -> DihedralNormalForm:
    k, q = normal_form_local(g.m, g.to_local(w))
    return DihedralNormalForm(k, g.to_word(q))


def dihedral_equal(g: DihedralGroup, u: Word, v: Word) -> bool:
    return normal_form_local(g.m, g.to_local(u)) == normal_form_local(g.m, g.to_local(v))


def dihedral_geodesic(g: DihedralGroup, w: Word) -> Word:
    return g.to_word(geodesic_local(g.m, g.to_local(w)))


def dihedral_is_geodesic(g: DihedralGroup, w: Word) -> bool:
    return is_geodesic_local(g.m, g.to_local(w))


def from_normal_form(g: DihedralGroup, nf: DihedralNormalForm) -> Word:
    d = g.delta()
    dk = d ** nf.central_power
    return free_reduce(tuple(dk) + tuple(nf.tail))


def centre_element(g: DihedralGroup) -> Word:
    """(st)^m' with m' = lcm(m, 2) / 2."""
    s, t = g.generators
    mp = math.lcm(g.m, 2) // 2
    return Word.of(s, t) ** mp


def alternating_syllable_word(exponents, generators=("t", "r")) -> Word:
    """t^k1 r^k2 t^k3 ... for the given exponents."""
    letters = []
    for i, k in enumerate(exponents):
        gen = generators[i % 2]
        letters.extend([(gen, 1 if k > 0 else -1)] * abs(k))
    return Word(letters)


def trivial_2m_syllable_tuples(m: int, K: int) -> list[tuple[int, ...]]:
    """All (k_1, ..., k_2m) with 0 < |k_i| <= K and t^k1 r^k2 ... trivial in A_m."""
    if m < 3:
        raise DihedralError("m must be >= 3")
    if K < 1:
        raise DihedralError("bound K must be >= 1")
    values = [k for k in range(-K, K + 1) if k]
    out = []
    for ks in itertools.product(values, repeat=2 * m):
        local = []
        for i, k in enumerate(ks):
            x = 1 + (i % 2)
            local.extend([x if k > 0 else -x] * abs(k))
        if normal_form_local(m, tuple(local)) == (0, ()):
            out.append(ks)
    return out


def dihedral_coefficient_invariant(g1: DihedralGroup, g2: DihedralGroup) -> bool:
    return g1.m == g2.m
