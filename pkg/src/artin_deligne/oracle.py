"""Word problem and standard-parabolic membership for large-type Artin groups.

A freely reduced word is explored through its same-length class. One move
replaces a maximal two-generator factor (a maximal run of syllables over a pair
{a, b} with m_ab finite) by another geodesic word of the same element of the
dihedral group A_ab. A factor that is not a dihedral geodesic is replaced by a
shorter word, and the search restarts from the shortened word. The class
reached from a geodesic is its full set of geodesic representatives, so the
ShortLex-least member is a canonical form.
"""

from __future__ import annotations

import os
import threading
from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .dihedral import geodesic_local, geodesics_local, is_geodesic_local
from .graph import DefiningGraph, is_large_type
from .words import Word, free_reduce, inverse

DEFAULT_CAP = 5_000_000
MIN_CAP = 10_000
CAP_ENV = "ARTIN_ORACLE_CAP"

MEMBER = "member"
NON_MEMBER = "non_member"
UNKNOWN = "unknown_at_bound"


class OracleError(ValueError):
    pass


class OracleBoundExceeded(RuntimeError):
    def __init__(self, word: Word, cap: int):
        super().__init__(f"geodesic class of {word} exceeded {cap} words")
        self.word = word
        self.cap = cap


@dataclass(frozen=True)
class MembershipVerdict:
    status: str
    bound_used: int

    def __bool__(self):
        return self.status == MEMBER


def cap_from_env(default: int = DEFAULT_CAP) -> int:
    raw = os.environ.get(CAP_ENV)
    if raw is None:
        return default
    try:
        cap = int(raw)
    except ValueError as exc:
        raise OracleError(f"{CAP_ENV} must be an integer, got {raw!r}") from exc
    return cap


def _reduce(w) -> tuple:
    out: list = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


class Oracle:
    """Exact word problem oracle over a large-type defining graph."""

    def __init__(self, graph: DefiningGraph, cap: int | None = None):
        if not is_large_type(graph):
            raise OracleError("the oracle requires a large-type graph (all m >= 3)")
        self.graph = graph
        self.cap = cap_from_env() if cap is None else cap
        if self.cap < MIN_CAP:
            raise OracleError(f"oracle cap must be >= {MIN_CAP}")
        self.names = graph.vertices
        n = len(self.names)
        self._code = {name: i + 1 for i, name in enumerate(self.names)}
        self._m = [[None] * (n + 1) for _ in range(n + 1)]
        for (a, b), m in graph.edges():
            i, j = self._code[a], self._code[b]
            self._m[i][j] = self._m[j][i] = m
        self._rank = {}
        for i in range(1, n + 1):
            self._rank[i] = i - 1
            self._rank[-i] = n + i - 1
        self._lock = threading.RLock()
        self._canon: dict[tuple, tuple] = {}
        self._classes: dict[tuple, frozenset] = {}
        self._factor_cache: dict[tuple, object] = {}
        self.max_class_seen = 0

    # encoding

    def encode(self, w: Word) -> tuple:
        out = []
        for gen, sign in w:
            code = self._code.get(gen)
            if code is None:
                raise OracleError(f"unknown generator {gen!r}")
            out.append(code * sign)
        return tuple(out)

    def decode(self, t: Iterable[int]) -> Word:
        return Word((self.names[abs(x) - 1], 1 if x > 0 else -1) for x in t)

    def shortlex_key(self, t: tuple) -> tuple:
        rank = self._rank
        return (len(t), tuple(rank[x] for x in t))

    # dihedral factors

    def _factors(self, u: tuple):
        sy = []
        i = 0
        n = len(u)
        while i < n:
            g = abs(u[i])
            j = i + 1
            while j < n and abs(u[j]) == g:
                j += 1
            sy.append((g, i, j))
            i = j
        r = len(sy)
        for a in range(r - 1):
            if a > 0 and sy[a - 1][0] == sy[a + 1][0]:
                continue
            g1, g2 = sy[a][0], sy[a + 1][0]
            if self._m[g1][g2] is None:
                continue
            b = a + 1
            while b + 1 < r and sy[b + 1][0] in (g1, g2):
                b += 1
            yield g1, g2, sy[a][1], sy[b][2]

    def _factor_moves(self, g1: int, g2: int, f: tuple):
        """('short', word) or ('alts', [words]) for a factor over {g1, g2}."""
        key = (g1, g2, f) if g1 < g2 else (g2, g1, f)
        hit = self._factor_cache.get(key)
        if hit is not None:
            return hit
        lo, hi = key[0], key[1]
        m = self._m[lo][hi]
        local = tuple((1 if abs(x) == lo else 2) * (1 if x > 0 else -1) for x in f)

        def back(loc):
            return tuple((lo if abs(y) == 1 else hi) * (1 if y > 0 else -1) for y in loc)

        if not is_geodesic_local(m, local):
            res = ("short", back(geodesic_local(m, local)))
        else:
            alts = geodesics_local(m, local)
            res = ("alts", [back(a) for a in alts] if len(alts) > 1 else [])
        if len(self._factor_cache) < 2_000_000:
            self._factor_cache[key] = res
        return res

    # class search

    def _explore(self, w: tuple):
        seen = {w}
        queue = deque([w])
        cap = self.cap
        while queue:
            u = queue.popleft()
            for g1, g2, s, e in self._factors(u):
                kind, data = self._factor_moves(g1, g2, u[s:e])
                if kind == "short":
                    return "short", _reduce(u[:s] + data + u[e:])
                for alt in data:
                    v = u[:s] + alt + u[e:]
                    if v not in seen:
                        seen.add(v)
                        queue.append(v)
                        if len(seen) > cap:
                            raise OracleBoundExceeded(self.decode(w), cap)
        return "class", seen

    def _geodesic_class(self, w: tuple) -> tuple[tuple, frozenset]:
        w = _reduce(w)
        with self._lock:
            canon = self._canon.get(w)
            if canon is not None:
                cls = self._classes.get(canon)
                if cls is not None:
                    return canon, cls
        start = w
        while True:
            kind, data = self._explore(w)
            if kind == "short":
                w = data
                continue
            break
        cls = frozenset(data)
        canon = min(cls, key=self.shortlex_key)
        with self._lock:
            self.max_class_seen = max(self.max_class_seen, len(cls))
            self._canon[start] = canon
            if len(cls) <= 50_000:
                self._classes[canon] = cls
                for v in cls:
                    self._canon[v] = canon
        return canon, cls

    def _canonical(self, w: tuple) -> tuple:
        return self._geodesic_class(w)[0]

    # public queries

    def geodesic_class(self, w: Word) -> list[Word]:
        """All geodesic words of the element, in ShortLex order."""
        _, cls = self._geodesic_class(self.encode(w))
        return [self.decode(v) for v in sorted(cls, key=self.shortlex_key)]

    def shortlex_geodesic(self, w: Word) -> Word:
        return self.decode(self._canonical(self.encode(w)))

    def length(self, w: Word) -> int:
        return len(self._canonical(self.encode(w)))

    def is_trivial(self, w: Word) -> bool:
        t = _reduce(self.encode(w))
        if sum(1 if x > 0 else -1 for x in t) != 0:
            return False
        return self._canonical(t) == ()

    def are_equal(self, u: Word, v: Word) -> bool:
        return self.is_trivial(free_reduce(tuple(u) + tuple(inverse(v))))

    def _sub_codes(self, sub: Iterable[str]) -> set[int]:
        codes = set()
        for name in sub:
            if name not in self._code:
                raise OracleError(f"unknown generator {name!r}")
            codes.add(self._code[name])
        return codes

    def standard_parabolic_membership(self, w: Word, sub: Iterable[str]) -> MembershipVerdict:
        codes = self._sub_codes(sub)
        try:
            canon, cls = self._geodesic_class(self.encode(w))
        except OracleBoundExceeded:
            return MembershipVerdict(UNKNOWN, self.cap)
        if all(abs(x) in codes for x in canon):
            return MembershipVerdict(MEMBER, len(canon))
        if any(all(abs(x) in codes for x in v) for v in cls):
            return MembershipVerdict(MEMBER, len(canon))
        return MembershipVerdict(NON_MEMBER, len(canon))

    def in_parabolic(self, w: Word, sub: Iterable[str]) -> bool:
        verdict = self.standard_parabolic_membership(w, sub)
        if verdict.status == UNKNOWN:
            raise OracleBoundExceeded(w, self.cap)
        return verdict.status == MEMBER

    def coset_key_codes(self, t: tuple, codes: set[int]) -> tuple:
        cur = _reduce(t)
        while True:
            canon, cls = self._geodesic_class(cur)
            ends = [v for v in cls if v and abs(v[-1]) in codes]
            if not ends:
                return canon
            cur = min(ends, key=self.shortlex_key)[:-1]

    def coset_key(self, g: Word, sub: Iterable[str]) -> Word:
        """Canonical representative of the coset g A_sub."""
        return self.decode(self.coset_key_codes(self.encode(g), self._sub_codes(sub)))

    def same_coset(self, g: Word, h: Word, sub: Iterable[str]) -> bool:
        """Exact check g A_sub == h A_sub by membership of g^-1 h."""
        return self.in_parabolic(free_reduce(tuple(inverse(g)) + tuple(h)), sub)

    def cache_size(self) -> int:
        return len(self._canon)
