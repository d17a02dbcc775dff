"""Complete deterministic automata, state subsets and words.

States are numbered 1..n everywhere a caller can see them.  Internally a
subset of states is an ``int`` bit pattern with bit ``i - 1`` standing for
state ``i``; the breadth-first searches work on those raw masks.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

MAX_STATES = 64

LETTER_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")

Word = tuple[int, ...]


class AutomatonError(ValueError):
    """Raised for malformed automata, words or state sets."""


class InvalidWordError(AutomatonError):
    pass


class ParseError(AutomatonError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class CapExceeded(RuntimeError):
    """A search visited more objects than its cap allows."""

    def __init__(self, what: str, cap: int):
        self.cap = cap
        super().__init__(f"{what} exceeded cap of {cap}")


@dataclass(frozen=True)
class StateSet:
    """Immutable subset of the states ``1..n`` backed by a bit mask."""

    n: int
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.n:
            raise AutomatonError(f"mask {self.mask:#x} does not fit {self.n} states")

    @classmethod
    def of(cls, n: int, states: Iterable[int]) -> StateSet:
        mask = 0
        for q in states:
            if not 1 <= q <= n:
                raise AutomatonError(f"state {q} out of range 1..{n}")
            mask |= 1 << (q - 1)
        return cls(n, mask)

    @classmethod
    def full(cls, n: int) -> StateSet:
        return cls(n, (1 << n) - 1)

    def states(self) -> list[int]:
        return mask_states(self.mask)

    def complement(self) -> StateSet:
        return StateSet(self.n, ((1 << self.n) - 1) & ~self.mask)

    def issubset(self, other: StateSet) -> bool:
        return self.mask & ~other.mask == 0

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, q: int) -> bool:
        return 1 <= q <= self.n and bool(self.mask >> (q - 1) & 1)

    def __iter__(self):
        return iter(self.states())

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.states())) + "}"


def mask_states(mask: int) -> list[int]:
    out = []
    q = 1
    while mask:
        if mask & 1:
            out.append(q)
        mask >>= 1
        q += 1
    return out


@dataclass(frozen=True)
class Dfa:
    """A complete DFA on states ``1..n``.

    ``delta[q - 1][l]`` is the image of state ``q`` under the letter with
    index ``l``; images are 1-indexed.
    """

    n: int
    letters: tuple[str, ...]
    delta: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        object.__setattr__(self, "delta", tuple(tuple(row) for row in self.delta))
        if not isinstance(self.n, int) or self.n < 1:
            raise AutomatonError("an automaton needs at least one state")
        if self.n > MAX_STATES:
            raise AutomatonError(f"at most {MAX_STATES} states are supported, got {self.n}")
        if not self.letters:
            raise AutomatonError("an automaton needs at least one letter")
        for name in self.letters:
            if not isinstance(name, str) or not LETTER_NAME.match(name):
                raise AutomatonError(f"invalid letter name {name!r}")
        if len(set(self.letters)) != len(self.letters):
            raise AutomatonError("duplicate letter name")
        if len(self.delta) != self.n:
            raise AutomatonError(f"transition table has {len(self.delta)} rows, expected {self.n}")
        k = len(self.letters)
        for q, row in enumerate(self.delta, 1):
            if len(row) != k:
                raise AutomatonError(f"state {q} has {len(row)} transitions, expected {k}")
            for p in row:
                if not isinstance(p, int) or not 1 <= p <= self.n:
                    raise AutomatonError(f"image {p!r} of state {q} out of range 1..{self.n}")

    @classmethod
    def from_maps(cls, letters: Sequence[str], maps: Sequence[Sequence[int]]) -> Dfa:
        """Build from one 1-indexed image list per letter."""
        if len(maps) != len(letters):
            raise AutomatonError("need exactly one map per letter")
        n = len(maps[0]) if maps else 0
        if any(len(m) != n for m in maps):
            raise AutomatonError("letter maps have different lengths")
        delta = [[maps[l][q] for l in range(len(letters))] for q in range(n)]
        return cls(n, tuple(letters), delta)

    @property
    def k(self) -> int:
        return len(self.letters)

    @cached_property
    def maps(self) -> tuple[tuple[int, ...], ...]:
        """Per-letter 0-indexed full transformations."""
        return tuple(tuple(self.delta[q][l] - 1 for q in range(self.n)) for l in range(self.k))

    @cached_property
    def _byte_tables(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        # tables[l][c][b]: image mask of the states encoded by byte b of chunk c
        tables = []
        chunks = (self.n + 7) // 8
        for m in self.maps:
            per_letter = []
            for c in range(chunks):
                single = [1 << m[8 * c + i] if 8 * c + i < self.n else 0 for i in range(8)]
                table = [0] * 256
                for b in range(1, 256):
                    low = b & -b
                    table[b] = table[b ^ low] | single[low.bit_length() - 1]
                per_letter.append(tuple(table))
            tables.append(tuple(per_letter))
        return tuple(tables)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def image(self, q: int, letter: int) -> int:
        return self.delta[q - 1][letter]

    def step_mask(self, mask: int, letter: int) -> int:
        tables = self._byte_tables[letter]
        out = 0
        c = 0
        while mask:
            out |= tables[c][mask & 0xFF]
            mask >>= 8
            c += 1
        return out

    def apply_mask(self, mask: int, word: Iterable[int]) -> int:
        for l in word:
            mask = self.step_mask(mask, l)
        return mask

    def check_word(self, word: Iterable[int]) -> Word:
        w = tuple(word)
        for l in w:
            if not isinstance(l, int) or not 0 <= l < self.k:
                raise InvalidWordError(f"letter index {l!r} out of range for {self.k} letters")
        return w

    def transformation(self, word: Iterable[int]) -> tuple[int, ...]:
        """0-indexed full map of ``word``."""
        images = list(range(self.n))
        for l in self.check_word(word):
            m = self.maps[l]
            images = [m[x] for x in images]
        return tuple(images)

    def letter_index(self, name: str) -> int:
        try:
            return self.letters.index(name)
        except ValueError:
            raise InvalidWordError(f"unknown letter {name!r}") from None

    def parse_word(self, text: str) -> Word:
        """Read a word written either as a run of single-character letters or
        as letter names separated by spaces or dots."""
        text = text.strip()
        if text in ("", "ε"):
            return ()
        if " " in text or "." in text:
            return tuple(self.letter_index(t) for t in re.split(r"[\s.]+", text) if t)
        if all(len(x) == 1 for x in self.letters):
            return tuple(self.letter_index(ch) for ch in text)
        return (self.letter_index(text),)

    def format_word(self, word: Iterable[int]) -> str:
        w = self.check_word(word)
        if not w:
            return "ε"
        sep = "" if all(len(x) == 1 for x in self.letters) else "."
        return sep.join(self.letters[l] for l in w)


def apply(dfa: Dfa, s: StateSet, w: Iterable[int]) -> StateSet:
    """Image of ``s`` under the word ``w``."""
    if s.n != dfa.n:
        raise AutomatonError(f"state set over {s.n} states used with a {dfa.n}-state automaton")
    return StateSet(dfa.n, dfa.apply_mask(s.mask, dfa.check_word(w)))


def rank(dfa: Dfa, w: Iterable[int]) -> int:
    return dfa.apply_mask(dfa.full_mask, dfa.check_word(w)).bit_count()


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse(text: str) -> Dfa:
    """Parse the line-oriented automaton text format.

    ::

        states: 4
        letters: a b
        a: 1 2 3 1
        b: 2 3 4 1
    """
    lines = [(i, _strip(raw)) for i, raw in enumerate(text.splitlines(), 1)]
    lines = [(i, s) for i, s in lines if s]
    if len(lines) < 2:
        raise ParseError("expected 'states:' and 'letters:' header lines", lines[-1][0] if lines else None)

    def header(entry, key):
        lineno, s = entry
        name, sep, rest = s.partition(":")
        if not sep or name.strip() != key:
            raise ParseError(f"expected '{key}: ...'", lineno)
        return lineno, rest.strip()

    lineno, rest = header(lines[0], "states")
    try:
        n = int(rest)
    except ValueError:
        raise ParseError(f"state count {rest!r} is not an integer", lineno) from None
    if not 1 <= n <= MAX_STATES:
        raise ParseError(f"state count must be in 1..{MAX_STATES}, got {n}", lineno)

    lineno, rest = header(lines[1], "letters")
    letters = rest.split()
    if not letters:
        raise ParseError("no letters declared", lineno)
    seen = set()
    for name in letters:
        if not LETTER_NAME.match(name):
            raise ParseError(f"invalid letter name {name!r}", lineno)
        if name in seen:
            raise ParseError(f"duplicate letter {name!r}", lineno)
        seen.add(name)

    body = lines[2:]
    if len(body) != len(letters):
        where = body[len(letters)][0] if len(body) > len(letters) else (body[-1][0] if body else lineno)
        raise ParseError(f"expected {len(letters)} transition lines, got {len(body)}", where)
    maps = []
    for expected, (lineno, s) in zip(letters, body):
        name, sep, rest = s.partition(":")
        if not sep:
            raise ParseError("expected '<letter>: <images>'", lineno)
        if name.strip() != expected:
            raise ParseError(f"expected transitions of letter {expected!r}, got {name.strip()!r}", lineno)
        try:
            images = [int(x) for x in rest.split()]
        except ValueError:
            raise ParseError("images must be integers", lineno) from None
        if len(images) != n:
            raise ParseError(f"letter {expected!r} lists {len(images)} images, expected {n}", lineno)
        for p in images:
            if not 1 <= p <= n:
                raise ParseError(f"image {p} out of range 1..{n}", lineno)
        maps.append(images)
    return Dfa.from_maps(letters, maps)


def serialize(dfa: Dfa) -> str:
    lines = [f"states: {dfa.n}", "letters: " + " ".join(dfa.letters)]
    for l, name in enumerate(dfa.letters):
        lines.append(f"{name}: " + " ".join(str(dfa.delta[q][l]) for q in range(dfa.n)))
    return "\n".join(lines) + "\n"


def to_dot(dfa: Dfa, name: str = "automaton") -> str:
    """DOT digraph of ``dfa``; transitions sharing endpoints share an edge."""
    labels: dict[tuple[int, int], list[str]] = {}
    for q in range(1, dfa.n + 1):
        for l, letter in enumerate(dfa.letters):
            labels.setdefault((q, dfa.image(q, l)), []).append(letter)
    out = [f"digraph {name} {{"]
    out += [f"  q{q};" for q in range(1, dfa.n + 1)]
    for (p, q), ls in labels.items():
        out.append(f'  q{p} -> q{q} [label="{",".join(ls)}"];')
    out.append("}")
    return "\n".join(out) + "\n"
