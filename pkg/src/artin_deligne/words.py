"""Words in the standard generators, free reduction, height and syllables."""

from __future__ import annotations

import re
from typing import Iterable, NamedTuple, Sequence


class WordSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class Syllable(NamedTuple):
    generator: str
    exponent: int


class Word(tuple):
    """An immutable sequence of letters ``(generator, sign)``.

    Words are not reduced on construction; ``concat``, ``inverse`` and
    ``conjugate`` return freely reduced results.
    """

    __slots__ = ()

    def __new__(cls, letters: Iterable = ()):
        out = []
        for gen, sign in letters:
            if sign not in (1, -1):
                raise ValueError(f"letter sign must be +1 or -1, got {sign!r}")
            out.append((gen, int(sign)))
        return super().__new__(cls, out)

    @classmethod
    def parse(cls, text: str, generators: Sequence[str] | None = None) -> "Word":
        return parse_word(text, generators)

    @classmethod
    def of(cls, *names: str) -> "Word":
        """Positive word from generator names."""
        return cls((n, 1) for n in names)

    @classmethod
    def power(cls, gen: str, k: int) -> "Word":
        return cls([(gen, 1 if k > 0 else -1)] * abs(k))

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"

    def __add__(self, other):
        return Word(tuple.__add__(self, Word(other)))

    def __getitem__(self, item):
        res = tuple.__getitem__(self, item)
        return Word(res) if isinstance(item, slice) else res

    def __mul__(self, other: "Word") -> "Word":
        return concat(self, other)

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return inverse(self) ** (-k)
        return free_reduce(Word(tuple(self) * k))

    def height(self) -> int:
        return height(self)

    def inverse(self) -> "Word":
        return inverse(self)

    def reduced(self) -> "Word":
        return free_reduce(self)

    def support(self) -> set[str]:
        return {g for g, _ in self}

    def syllables(self) -> list[Syllable]:
        return syllables(self)


def free_reduce(w: Iterable) -> Word:
    out: list = []
    for gen, sign in w:
        if out and out[-1][0] == gen and out[-1][1] == -sign:
            out.pop()
        else:
            out.append((gen, sign))
    return Word(out)


def height(w: Iterable) -> int:
    return sum(sign for _gen, sign in w)


def syllables(w: Word) -> list[Syllable]:
    out: list[Syllable] = []
    for gen, sign in w:
        if out and out[-1].generator == gen:
            exp = out[-1].exponent + sign
            out.pop()
            if exp:
                out.append(Syllable(gen, exp))
        else:
            out.append(Syllable(gen, sign))
    return out


def from_syllables(sylls: Iterable[tuple[str, int]]) -> Word:
    letters = []
    for gen, k in sylls:
        letters.extend([(gen, 1 if k > 0 else -1)] * abs(k))
    return free_reduce(letters)


def concat(*words: Word) -> Word:
    letters: list = []
    for w in words:
        letters.extend(w)
    return free_reduce(letters)


def inverse(w: Word) -> Word:
    return free_reduce((gen, -sign) for gen, sign in reversed(w))


def conjugate(w: Word, g: Word) -> Word:
    """g w g^-1."""
    return concat(g, w, inverse(g))


def commutator(u: Word, v: Word) -> Word:
    """u v u^-1 v^-1."""
    return concat(u, v, inverse(u), inverse(v))


def format_word(w: Iterable) -> str:
    parts = [gen if sign > 0 else f"{gen}^-1" for gen, sign in w]
    return " ".join(parts) if parts else "1"


_TOKEN_SEP = re.compile(r"[\s.*]+")
_EXPONENT = re.compile(r"\^(\(?)([+-]?\d+)(\)?)")


def parse_word(text: str, generators: Sequence[str] | None = None) -> Word:
    """Parse ``"a b^-1 c"``, ``"aB c"``, ``"a.b^-1"`` or ``"a^3 b^-2"``.

    With ``generators`` given, names are matched greedily (longest first) and
    an upper-case variant of a name that is not itself a generator denotes the
    inverse. Without it, each lower-case letter is a generator and an
    upper-case letter its inverse. ``"1"`` and the empty string denote the
    identity.
    """
    if generators is not None:
        gens = sorted(generators, key=len, reverse=True)
        inverse_names = {g.upper(): g for g in generators if g.upper() != g and g.upper() not in generators}
        names = sorted(set(gens) | set(inverse_names), key=len, reverse=True)
    letters: list = []
    pos = 0
    n = len(text)
    if text.strip() in ("", "1"):
        return Word()
    while pos < n:
        sep = _TOKEN_SEP.match(text, pos)
        if sep:
            pos = sep.end()
            continue
        start = pos
        if generators is None:
            ch = text[pos]
            if not ch.isalpha():
                raise WordSyntaxError(f"unexpected character {ch!r}", pos)
            if ch.islower():
                gen, sign = ch, 1
            else:
                gen, sign = ch.lower(), -1
            pos += 1
        else:
            for name in names:
                if text.startswith(name, pos):
                    if name in inverse_names:
                        gen, sign = inverse_names[name], -1
                    else:
                        gen, sign = name, 1
                    pos += len(name)
                    break
            else:
                raise WordSyntaxError(f"unknown generator at {text[pos:pos + 8]!r}", pos)
        k = 1
        exp = _EXPONENT.match(text, pos)
        if exp:
            if bool(exp.group(1)) != bool(exp.group(3)):
                raise WordSyntaxError("unbalanced parenthesis in exponent", pos)
            k = int(exp.group(2))
            if k == 0:
                raise WordSyntaxError("zero exponent", start)
            pos = exp.end()
        elif pos < n and text[pos] == "^":
            raise WordSyntaxError("malformed exponent", pos)
        letters.extend([(gen, sign if k > 0 else -sign)] * abs(k))
    return Word(letters)
